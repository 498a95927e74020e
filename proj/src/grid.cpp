#include "lpmlab/grid.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace lpm {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMinResolution = 8;

// 6th-order centered stencils, offsets -3..3.
constexpr int kHalf = 3;
constexpr double kFirst[7] = {-1.0 / 60, 3.0 / 20, -3.0 / 4, 0.0, 3.0 / 4, -3.0 / 20, 1.0 / 60};
constexpr double kSecond[7] = {1.0 / 90, -3.0 / 20, 3.0 / 2, -49.0 / 18, 3.0 / 2, -3.0 / 20, 1.0 / 90};

// Lagrange weights for nodes at -1, 0, 1, 2 evaluated at u in [0, 1).
void cubic_weights(double u, double w[4]) {
  w[0] = -u * (u - 1) * (u - 2) / 6;
  w[1] = (u + 1) * (u - 1) * (u - 2) / 2;
  w[2] = -(u + 1) * u * (u - 2) / 2;
  w[3] = (u + 1) * u * (u - 1) / 6;
}

// Split s into integer base and fraction, snapping fractions that are
// within rounding of a node so node directions reproduce stored values.
void split(double s, int& base, double& frac) {
  base = static_cast<int>(std::floor(s));
  frac = s - base;
  if (frac > 1 - 1e-12) {
    ++base;
    frac = 0;
  } else if (frac < 1e-12) {
    frac = 0;
  }
}

Vec row_abs_sum(const SpMat& m) {
  Vec r = Vec::Zero(m.rows());
  for (Index i = 0; i < m.outerSize(); ++i)
    for (SpMat::InnerIterator it(m, i); it; ++it) r[i] += std::abs(it.value());
  return r;
}

}  // namespace

Vec fejer_weights(int J) {
  Vec w(J);
  for (int j = 0; j < J; ++j) {
    const double t = (j + 0.5) * kPi / J;
    double s = 0;
    for (int k = 1; k <= J / 2; ++k) s += std::cos(2 * k * t) / (4.0 * k * k - 1);
    w[j] = 2.0 / J * (1 - 2 * s);
  }
  return w;
}

std::shared_ptr<const Grid> Grid::make(int n, int n_theta, int n_phi) {
  require(n == 1 || n == 2, ErrorCode::invalid_argument,
          "unsupported sphere dimension " + std::to_string(n) + " (expected 1 or 2)");
  require(n_theta >= kMinResolution, ErrorCode::invalid_argument,
          "resolution below minimum of 8 nodes per angular direction");
  if (n == 2) {
    require(n_phi >= kMinResolution, ErrorCode::invalid_argument,
            "resolution below minimum of 8 nodes per angular direction");
    require(n_phi % 2 == 0, ErrorCode::invalid_argument,
            "longitude count must be even for the pole index shift");
  }
  std::shared_ptr<Grid> g(new Grid());
  g->n_ = n;
  g->nt_ = n_theta;
  g->np_ = n == 2 ? n_phi : 1;
  g->size_ = static_cast<Index>(g->nt_) * g->np_;
  const Index N = g->size_;
  g->x_.resize(N, n + 1);
  g->w_.resize(N);
  g->theta_.resize(N);
  g->phi_ = Vec::Zero(N);
  g->frame_[0].resize(N, n + 1);
  if (n == 1) {
    g->dt_ = 2 * kPi / n_theta;
    for (int j = 0; j < n_theta; ++j) {
      const double t = g->dt_ * j;
      g->theta_[j] = t;
      g->x_.row(j) << std::cos(t), std::sin(t);
      g->frame_[0].row(j) << -std::sin(t), std::cos(t);
      g->w_[j] = g->dt_;
    }
  } else {
    g->dt_ = kPi / n_theta;
    g->dp_ = 2 * kPi / n_phi;
    g->sin_.resize(N);
    g->cos_.resize(N);
    g->frame_[1].resize(N, 3);
    const Vec wt = fejer_weights(n_theta);
    for (int j = 0; j < n_theta; ++j) {
      const double t = (j + 0.5) * g->dt_;
      const double st = std::sin(t), ct = std::cos(t);
      for (int l = 0; l < n_phi; ++l) {
        const Index i = g->index(j, l);
        const double p = l * g->dp_;
        const double sp = std::sin(p), cp = std::cos(p);
        g->theta_[i] = t;
        g->phi_[i] = p;
        g->sin_[i] = st;
        g->cos_[i] = ct;
        g->x_.row(i) << st * cp, st * sp, ct;
        g->frame_[0].row(i) << ct * cp, ct * sp, -st;
        g->frame_[1].row(i) << -sp, cp, 0.0;
        g->w_[i] = wt[j] * g->dp_;
      }
    }
  }
  g->build_ops();
  return g;
}

double Grid::area() const { return n_ == 1 ? 2 * kPi : 4 * kPi; }

Index Grid::wrap(int j, int l) const {
  if (n_ == 1) return ((j % nt_) + nt_) % nt_;
  if (j < 0) {
    j = -1 - j;
    l += np_ / 2;
  } else if (j >= nt_) {
    j = 2 * nt_ - 1 - j;
    l += np_ / 2;
  }
  l = ((l % np_) + np_) % np_;
  return index(j, l);
}

void Grid::build_ops() {
  using Trip = Eigen::Triplet<double>;
  const Index N = size_;
  std::vector<Trip> t1, t2, p1, p2;
  for (int j = 0; j < nt_; ++j) {
    for (int l = 0; l < np_; ++l) {
      const Index i = n_ == 1 ? j : index(j, l);
      for (int s = -kHalf; s <= kHalf; ++s) {
        const Index k = n_ == 1 ? wrap(j + s, 0) : wrap(j + s, l);
        if (kFirst[s + kHalf] != 0) t1.emplace_back(i, k, kFirst[s + kHalf] / dt_);
        t2.emplace_back(i, k, kSecond[s + kHalf] / (dt_ * dt_));
        if (n_ == 2) {
          const Index q = wrap(j, l + s);
          if (kFirst[s + kHalf] != 0) p1.emplace_back(i, q, kFirst[s + kHalf] / dp_);
          p2.emplace_back(i, q, kSecond[s + kHalf] / (dp_ * dp_));
        }
      }
    }
  }
  ops_.d_t.resize(N, N);
  ops_.d_t.setFromTriplets(t1.begin(), t1.end());
  ops_.d_tt.resize(N, N);
  ops_.d_tt.setFromTriplets(t2.begin(), t2.end());
  ops_.h11 = ops_.d_tt;
  if (n_ == 2) {
    ops_.d_p.resize(N, N);
    ops_.d_p.setFromTriplets(p1.begin(), p1.end());
    ops_.d_pp.resize(N, N);
    ops_.d_pp.setFromTriplets(p2.begin(), p2.end());
    ops_.d_tp = ops_.d_t * ops_.d_p;
    const Vec inv_s = sin_.cwiseInverse();
    const Vec cot = cos_.cwiseProduct(inv_s);
    ops_.h12 = inv_s.asDiagonal() * ops_.d_tp;
    ops_.h12 -= cot.cwiseProduct(inv_s).asDiagonal() * ops_.d_p;
    ops_.h22 = inv_s.cwiseProduct(inv_s).asDiagonal() * ops_.d_pp;
    ops_.h22 += cot.asDiagonal() * ops_.d_t;
    ops_.h12.makeCompressed();
    ops_.h22.makeCompressed();
    ops_.abs_h12 = row_abs_sum(ops_.h12);
    ops_.abs_h22 = row_abs_sum(ops_.h22);
  }
  ops_.abs_h11 = row_abs_sum(ops_.h11);
}

void Grid::stencil(const double* x, std::vector<Index>& idx, std::vector<double>& wt) const {
  idx.clear();
  wt.clear();
  if (n_ == 1) {
    double t = std::atan2(x[1], x[0]);
    if (t < 0) t += 2 * kPi;
    int b;
    double u, w[4];
    split(t / dt_, b, u);
    cubic_weights(u, w);
    for (int a = 0; a < 4; ++a) {
      if (w[a] == 0) continue;
      idx.push_back(wrap(b - 1 + a, 0));
      wt.push_back(w[a]);
    }
    return;
  }
  const double t = std::atan2(std::hypot(x[0], x[1]), x[2]);
  double p = std::atan2(x[1], x[0]);
  if (p < 0) p += 2 * kPi;
  int bj, bl;
  double u, v, wu[4], wv[4];
  split(t / dt_ - 0.5, bj, u);
  split(p / dp_, bl, v);
  cubic_weights(u, wu);
  cubic_weights(v, wv);
  for (int a = 0; a < 4; ++a) {
    if (wu[a] == 0) continue;
    for (int b = 0; b < 4; ++b) {
      if (wv[b] == 0) continue;
      idx.push_back(wrap(bj - 1 + a, bl - 1 + b));
      wt.push_back(wu[a] * wv[b]);
    }
  }
}

std::string Grid::describe() const {
  return n_ == 1 ? "S1 N=" + std::to_string(nt_)
                 : "S2 " + std::to_string(nt_) + "x" + std::to_string(np_);
}

ScalarField::ScalarField(GridPtr grid, Vec values) : grid_(std::move(grid)), v_(std::move(values)) {
  require(grid_ != nullptr, ErrorCode::invalid_argument, "field without grid");
  require(v_.size() == grid_->size(), ErrorCode::grid_mismatch,
          "field value count does not match grid node count");
  require(v_.allFinite(), ErrorCode::invalid_argument, "field contains non-finite values");
}

double integrate(const Grid& g, const Vec& values) {
  require(values.size() == g.size(), ErrorCode::grid_mismatch, "integrand defined on a different grid");
  return g.weights().dot(values);
}

double integrate(const ScalarField& f, const Grid& g) {
  require(&f.grid() == &g, ErrorCode::grid_mismatch, "field defined on a different grid");
  return integrate(g, f.values());
}

FrameHessian differentials(const ScalarField& f) {
  const Grid& g = f.grid();
  const auto& o = g.ops();
  const Vec& v = f.values();
  FrameHessian d;
  d.g1 = o.d_t * v;
  d.h11 = o.h11 * v;
  if (g.dim() == 1) {
    d.laplacian = d.h11;
    return d;
  }
  d.g2 = (o.d_p * v).cwiseQuotient(g.sin_theta());
  d.h12 = o.h12 * v;
  d.h22 = o.h22 * v;
  d.laplacian = d.h11 + d.h22;
  return d;
}

FrameHessian differentials_direct(const Grid& g, const Vec& f) {
  require(f.size() == g.size(), ErrorCode::grid_mismatch, "field defined on a different grid");
  const Index N = g.size();
  const double dt = g.d_theta();
  FrameHessian d;
  d.g1.resize(N);
  d.h11.resize(N);
  if (g.dim() == 1) {
    for (int j = 0; j < g.n_theta(); ++j) {
      double a = 0, b = 0;
      for (int s = -kHalf; s <= kHalf; ++s) {
        const double fv = f[g.wrap(j + s, 0)];
        a += kFirst[s + kHalf] * fv;
        b += kSecond[s + kHalf] * fv;
      }
      d.g1[j] = a / dt;
      d.h11[j] = b / (dt * dt);
    }
    d.laplacian = d.h11;
    return d;
  }
  const double dp = g.d_phi();
  const int J = g.n_theta(), L = g.n_phi();
  Vec fp(N), fpp(N);
  for (int j = 0; j < J; ++j)
    for (int l = 0; l < L; ++l) {
      double a = 0, b = 0;
      for (int s = -kHalf; s <= kHalf; ++s) {
        const double fv = f[g.wrap(j, l + s)];
        a += kFirst[s + kHalf] * fv;
        b += kSecond[s + kHalf] * fv;
      }
      fp[g.index(j, l)] = a / dp;
      fpp[g.index(j, l)] = b / (dp * dp);
    }
  d.g2.resize(N);
  d.h12.resize(N);
  d.h22.resize(N);
  for (int j = 0; j < J; ++j)
    for (int l = 0; l < L; ++l) {
      double ft = 0, ftt = 0, ftp = 0;
      for (int s = -kHalf; s <= kHalf; ++s) {
        const Index k = g.wrap(j + s, l);
        ft += kFirst[s + kHalf] * f[k];
        ftt += kSecond[s + kHalf] * f[k];
        ftp += kFirst[s + kHalf] * fp[k];
      }
      ft /= dt;
      ftt /= dt * dt;
      ftp /= dt;
      const Index i = g.index(j, l);
      const double st = g.sin_theta()[i], ct = g.cos_theta()[i];
      d.g1[i] = ft;
      d.g2[i] = fp[i] / st;
      d.h11[i] = ftt;
      d.h12[i] = ftp / st - ct / (st * st) * fp[i];
      d.h22[i] = fpp[i] / (st * st) + ct / st * ft;
    }
  d.laplacian = d.h11 + d.h22;
  return d;
}

double interpolate(const ScalarField& f, const Eigen::Ref<const Eigen::VectorXd>& x) {
  const Grid& g = f.grid();
  require(x.size() == g.ambient(), ErrorCode::invalid_argument, "direction has wrong dimension");
  require(std::abs(x.norm() - 1) < 1e-10, ErrorCode::invalid_argument, "direction is not a unit vector");
  Eigen::VectorXd xc = x;
  std::vector<Index> idx;
  std::vector<double> wt;
  g.stencil(xc.data(), idx, wt);
  double s = 0;
  for (size_t a = 0; a < idx.size(); ++a) s += wt[a] * f[idx[a]];
  return s;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_field_csv(std::ostream& os, const Grid& g, const Vec& values) {
  require(values.size() == g.size(), ErrorCode::grid_mismatch, "field defined on a different grid");
  os << (g.dim() == 2 ? "theta,phi,value\n" : "theta,value\n");
  for (Index i = 0; i < g.size(); ++i) {
    os << format_number(g.theta()[i]) << ',';
    if (g.dim() == 2) os << format_number(g.phi()[i]) << ',';
    os << format_number(values[i]) << '\n';
  }
}

void write_field_csv(const std::string& path, const Grid& g, const Vec& values) {
  std::ofstream os(path);
  require(static_cast<bool>(os), ErrorCode::io, "cannot write " + path);
  write_field_csv(os, g, values);
}

Vec read_field_csv(const std::string& path, const Grid& g) {
  std::ifstream is(path);
  require(static_cast<bool>(is), ErrorCode::io, "cannot read " + path);
  std::string line;
  std::getline(is, line);
  const std::string expect = g.dim() == 2 ? "theta,phi,value" : "theta,value";
  if (!line.empty() && line.back() == '\r') line.pop_back();
  require(line == expect, ErrorCode::io, path + ": unexpected header '" + line + "'");
  Vec v(g.size());
  Index i = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    require(i < g.size(), ErrorCode::grid_mismatch, path + ": more rows than grid nodes");
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> cols;
    while (std::getline(ss, cell, ',')) cols.push_back(std::stod(cell));
    require(static_cast<int>(cols.size()) == g.dim() + 1, ErrorCode::io, path + ": malformed row");
    require(std::abs(cols[0] - g.theta()[i]) < 1e-9, ErrorCode::grid_mismatch, path + ": node layout mismatch");
    if (g.dim() == 2)
      require(std::abs(cols[1] - g.phi()[i]) < 1e-9, ErrorCode::grid_mismatch, path + ": node layout mismatch");
    v[i++] = cols.back();
  }
  require(i == g.size(), ErrorCode::grid_mismatch, path + ": fewer rows than grid nodes");
  return v;
}

}  // namespace lpm
