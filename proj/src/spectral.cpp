#include "lpmlab/spectral.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace lpm {

SpMat linearized_operator(const SupportFunction& h) {
  const Grid& g = h.grid();
  const auto& o = g.ops();
  const Index N = g.size();
  SpMat id(N, N);
  id.setIdentity();
  if (g.dim() == 1) {
    SpMat l = o.h11 + id;
    l.makeCompressed();
    return l;
  }
  // U11 = A22, U22 = A11, U12 = -A12
  SpMat l = h.a22().asDiagonal() * (o.h11 + id);
  l -= (2 * h.a12()).asDiagonal() * o.h12;
  l += h.a11().asDiagonal() * (o.h22 + id);
  l.makeCompressed();
  return l;
}

GeneralizedEigenPair assemble_linearized(const SupportFunction& h) {
  require(h.convex(), ErrorCode::nonconvex, "linearized operator needs a convex body");
  const Grid& g = h.grid();
  GeneralizedEigenPair pair;
  const SpMat ws = -(g.weights().asDiagonal() * linearized_operator(h));
  pair.stiffness = Mat(ws);
  const double scale = pair.stiffness.cwiseAbs().maxCoeff();
  const Mat skew = pair.stiffness - pair.stiffness.transpose();
  pair.raw_asymmetry = scale > 0 ? skew.cwiseAbs().maxCoeff() / scale : 0;
  pair.stiffness = 0.5 * (pair.stiffness + pair.stiffness.transpose()).eval();
  pair.weight = g.weights().cwiseProduct(h.det_a()).cwiseQuotient(h.values());
  require((pair.weight.array() > 0).all(), ErrorCode::nonconvex, "weight matrix is not positive");
  return pair;
}

void spectrum(GeneralizedEigenPair& pair, int m) {
  const Index N = pair.stiffness.rows();
  require(m >= 1, ErrorCode::invalid_argument, "eigenvalue count must be positive");
  m = static_cast<int>(std::min<Index>(m, N));
  const Vec d = pair.weight.cwiseSqrt().cwiseInverse();
  Mat c = d.asDiagonal() * pair.stiffness * d.asDiagonal();
  Vec w(N);
  Mat z(N, m);
  std::vector<lapack_int> support(2 * static_cast<size_t>(m));
  lapack_int found = 0;
  const lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'U', static_cast<lapack_int>(N), c.data(),
                                         static_cast<lapack_int>(N), 0.0, 0.0, 1, m, 0.0, &found, w.data(),
                                         z.data(), static_cast<lapack_int>(N), support.data());
  if (info != 0 || found != m) {
    const double cond = pair.weight.maxCoeff() / pair.weight.minCoeff();
    fail(ErrorCode::solver_failure, "symmetric eigensolver failed (info=" + std::to_string(info) +
                                        ", weight condition " + fmt_g(cond) + ")");
  }
  pair.eigenvalues = w.head(m);
  pair.eigenvectors = d.asDiagonal() * z;
}

double lambda3(const SupportFunction& h) {
  auto pair = assemble_linearized(h);
  const int n = h.grid().dim();
  spectrum(pair, n + 3);
  return pair.eigenvalues[n + 2];
}

std::vector<double> sphere_spectrum(int n, int count) {
  std::vector<double> out;
  for (int l = 0; static_cast<int>(out.size()) < count; ++l) {
    const int mult = n == 1 ? (l == 0 ? 1 : 2) : 2 * l + 1;
    const double lam = static_cast<double>(l) * (l + n - 1) - n;
    for (int k = 0; k < mult && static_cast<int>(out.size()) < count; ++k) out.push_back(lam);
  }
  return out;
}

std::vector<int> cluster_labels(const Vec& eigenvalues, double tol) {
  std::vector<int> lab(static_cast<size_t>(eigenvalues.size()));
  int c = 0;
  for (Index i = 0; i < eigenvalues.size(); ++i) {
    if (i > 0 && eigenvalues[i] - eigenvalues[i - 1] > tol) ++c;
    lab[static_cast<size_t>(i)] = c;
  }
  return lab;
}

double sphere_grid_error(const GridPtr& g, double upto) {
  const int n = g->dim();
  int count = 0;
  for (double v : sphere_spectrum(n, 4000)) {
    if (v > upto) break;
    ++count;
  }
  count = std::max(count, n + 3);
  auto pair = assemble_linearized(sphere(g));
  spectrum(pair, count);
  const auto exact = sphere_spectrum(n, count);
  double err = 0;
  for (int i = 0; i < count; ++i) err = std::max(err, std::abs(pair.eigenvalues[i] - exact[static_cast<size_t>(i)]));
  return err;
}

std::vector<Vec> rotational_tangent_basis(const SupportFunction& h) {
  require(h.convex(), ErrorCode::nonconvex, "rotational fields need a convex body");
  const Grid& g = h.grid();
  const Mat z = boundary_points(h);
  const Mat& x = g.points();
  const double znorm = std::sqrt(integrate(g, z.rowwise().squaredNorm()));
  std::vector<Vec> out;
  const int d = g.ambient();
  for (int r = 0; r < d; ++r)
    for (int s = r + 1; s < d; ++s) {
      // x^T B Z with B = e_r e_s^T - e_s e_r^T
      Vec f = x.col(r).cwiseProduct(z.col(s)) - x.col(s).cwiseProduct(z.col(r));
      if (std::sqrt(integrate(g, f.cwiseProduct(f))) >= 1e-10 * znorm) out.push_back(std::move(f));
    }
  return out;
}

double containment_angle(const Mat& a, const Mat& b, const Vec& weight) {
  if (b.cols() == 0) return 0;
  if (a.cols() < b.cols()) return 90;
  const Vec s = weight.cwiseSqrt();
  auto orth = [&](const Mat& m) {
    Eigen::HouseholderQR<Mat> qr(s.asDiagonal() * m);
    return Mat(qr.householderQ() * Mat::Identity(m.rows(), m.cols()));
  };
  const Mat qa = orth(a), qb = orth(b);
  Eigen::JacobiSVD<Mat> svd(qa.transpose() * qb);
  const double smin = std::clamp(svd.singularValues().minCoeff(), 0.0, 1.0);
  return std::acos(smin) * 180 / std::numbers::pi;
}

KernelCheck kernel_check(const SupportFunction& h, double p) {
  const Residual res = lp_residual(h, p);
  require(res.sup < 1e-6, ErrorCode::precondition,
          "kernel check needs a solution (residual " + fmt_g(res.sup) + " >= 1e-6)");
  KernelCheck kc;
  kc.target = 1 - p;
  kc.grid_error = sphere_grid_error(h.grid_ptr(), kc.target + 2);
  kc.tol = std::max(0.02 * std::abs(kc.target), 5 * kc.grid_error);
  auto pair = assemble_linearized(h);
  const Index N = h.size();
  int m = 0;
  for (double v : sphere_spectrum(h.grid().dim(), 4000)) {
    if (v > 1.5 * (kc.target + kc.tol) + 4) break;
    ++m;
  }
  m = std::max(m + 8, 16);
  for (;;) {
    spectrum(pair, m);
    if (pair.eigenvalues[m - 1] > kc.target + kc.tol || m >= N) break;
    m = static_cast<int>(std::min<Index>(2 * m, N));
  }
  std::vector<Index> in;
  for (Index i = 0; i < pair.eigenvalues.size(); ++i)
    if (std::abs(pair.eigenvalues[i] - kc.target) <= kc.tol) in.push_back(i);
  kc.dimension = static_cast<int>(in.size());
  kc.nearby.resize(kc.dimension);
  Mat e(N, kc.dimension);
  for (int i = 0; i < kc.dimension; ++i) {
    kc.nearby[i] = pair.eigenvalues[in[static_cast<size_t>(i)]];
    e.col(i) = pair.eigenvectors.col(in[static_cast<size_t>(i)]);
  }
  const auto t = rotational_tangent_basis(h);
  kc.tangent_dimension = static_cast<int>(t.size());
  Mat tb(N, kc.tangent_dimension);
  for (int i = 0; i < kc.tangent_dimension; ++i) tb.col(i) = t[static_cast<size_t>(i)];
  kc.defect_deg = containment_angle(e, tb, pair.weight);
  return kc;
}

}  // namespace lpm
