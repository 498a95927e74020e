#include "lpmlab/functional.hpp"

#include "lpmlab/spectral.hpp"

#include <cmath>
#include <cstdio>
#include <string>

namespace lpm {

namespace {

Vec shifted(const SupportFunction& h, const Vec& xi) { return h.values() - h.grid().points() * xi; }

}  // namespace

double santalo_objective(const SupportFunction& h, double p, const Vec& xi) {
  const Vec u = shifted(h, xi);
  require(u.minCoeff() > 0, ErrorCode::invalid_argument, "point lies outside the body");
  return integrate(h.grid(), u.array().pow(p).matrix());
}

SantaloResult santalo_center(const SupportFunction& h, double p) {
  require(p < 0, ErrorCode::invalid_argument, "Santalo center needs p < 0");
  require(h.convex(), ErrorCode::nonconvex, "Santalo center needs a convex body");
  const Grid& g = h.grid();
  const Mat& x = g.points();
  const int d = g.ambient();
  const double margin = 0.1 * h.min();
  Vec xi = moment_ellipsoid(h).ellipsoid.center;
  if (shifted(h, xi).minCoeff() < margin) xi = Vec::Zero(d);
  SantaloResult r;
  double H = santalo_objective(h, p, xi);
  for (int it = 0; it < 100; ++it) {
    const Vec u = shifted(h, xi);
    const Vec w1 = g.weights().cwiseProduct(u.array().pow(p - 1).matrix());
    const Vec w2 = g.weights().cwiseProduct(u.array().pow(p - 2).matrix());
    const Vec grad = -p * (x.transpose() * w1);
    const double scale = std::abs(p) * w1.sum();
    r.grad_norm = grad.norm() / scale;
    r.iterations = it;
    if (r.grad_norm < 1e-12) break;
    const Mat hess = p * (p - 1) * (x.transpose() * w2.asDiagonal() * x);
    const Vec step = -hess.ldlt().solve(grad);
    // In the quadratic regime objective differences fall below rounding; take the full step.
    if (r.grad_norm < 1e-6 && shifted(h, xi + step).minCoeff() >= margin) {
      xi += step;
      H = santalo_objective(h, p, xi);
      continue;
    }
    double t = 1;
    bool moved = false;
    for (int k = 0; k < 60; ++k, t *= 0.5) {
      const Vec trial = xi + t * step;
      if (shifted(h, trial).minCoeff() < margin) continue;
      const double Ht = santalo_objective(h, p, trial);
      if (Ht <= H) {
        xi = trial;
        H = Ht;
        moved = true;
        break;
      }
    }
    if (!moved) break;  // no decrease possible at rounding level
  }
  require(r.grad_norm < 1e-10, ErrorCode::not_converged,
          "Santalo center did not converge (relative gradient " + fmt_g(r.grad_norm) + ")");
  r.center = xi;
  r.value = H;
  return r;
}

double bs_functional(const SupportFunction& h, double p, bool centered) {
  require(p < 0, ErrorCode::invalid_argument, "functional needs p < 0");
  const int n = h.grid().dim();
  const double vol = geometry_report(h).volume;
  const double H = centered ? santalo_center(h, p).value
                            : integrate(h.grid(), h.values().array().pow(p).matrix());
  return vol * std::pow(H, -(n + 1) / p);
}

Components project_components(const Vec& phi, const SupportFunction& h) {
  const Grid& g = h.grid();
  require(phi.size() == g.size(), ErrorCode::grid_mismatch, "field defined on a different grid");
  const int d = g.ambient();
  // h^-2 dV = h^-1 detA w
  const Vec rho = h.det_a().cwiseQuotient(h.values()).cwiseProduct(g.weights());
  auto dot = [&](const Vec& a, const Vec& b) { return a.cwiseProduct(b).dot(rho); };
  Mat q(g.size(), d + 1);
  q.col(0) = h.values();
  q.rightCols(d) = g.points();
  for (int i = 0; i <= d; ++i)
    for (int pass = 0; pass < 2; ++pass) {
      for (int j = 0; j < i; ++j) q.col(i) -= dot(q.col(i), q.col(j)) * q.col(j);
      q.col(i) /= std::sqrt(dot(q.col(i), q.col(i)));
    }
  Vec c = Vec::Zero(d + 1);
  Vec r = phi;
  for (int pass = 0; pass < 2; ++pass)
    for (int i = 0; i <= d; ++i) {
      const double a = dot(r, q.col(i));
      c[i] += a;
      r -= a * q.col(i);
    }
  Components out;
  out.along_h = c[0] * q.col(0);
  out.linear = q.rightCols(d) * c.tail(d);
  out.perp = phi - out.along_h - out.linear;
  out.basis = std::move(q);
  return out;
}

ZPerp z_perp(const SupportFunction& h) {
  const GeometryReport geo = geometry_report(h);
  const Grid& g = h.grid();
  const int d = g.ambient();
  const Components comp = project_components(Vec::Zero(g.size()), h);
  // q_i / h is orthonormal in L2(dV).
  const Mat b = comp.basis.array().colwise() / h.values().array();
  ZPerp out;
  out.field = geo.z;
  for (int l = 0; l < d; ++l)
    for (int pass = 0; pass < 2; ++pass)
      for (Index i = 0; i < b.cols(); ++i)
        out.field.col(l) -= out.field.col(l).cwiseProduct(b.col(i)).dot(geo.dv) * b.col(i);
  out.norm2 = out.field.rowwise().squaredNorm().dot(geo.dv);
  out.z_norm2 = geo.z.rowwise().squaredNorm().dot(geo.dv);
  return out;
}

QuotientReport combined_quotient(const SupportFunction& h) {
  const GeometryReport geo = geometry_report(h);
  QuotientReport r;
  Vec grad2 = h.hessian().g1.cwiseAbs2();
  if (h.grid().dim() == 2) grad2 += h.hessian().g2.cwiseAbs2();
  r.grad2 = grad2.dot(geo.dv);
  r.z_perp2 = z_perp(h).norm2;
  r.lambda3 = lambda3(h);
  const double h2 = h.values().cwiseAbs2().dot(geo.dv);
  r.near_round = r.grad2 < 1e-12 * h2;
  if (!r.near_round) {
    r.q = r.z_perp2 / r.grad2;
    r.Q = r.lambda3 * r.q;
  }
  return r;
}

double second_variation_form(const SupportFunction& h, double p, const Vec& phi) {
  const Grid& g = h.grid();
  const int n = g.dim();
  const SpMat l = linearized_operator(h);
  const Vec& w = g.weights();
  const Vec lphi = l * phi;
  const double G = integrate(g, h.values().array().pow(p).matrix());
  const double quad = w.dot(phi.cwiseProduct(lphi));
  const double mass = w.dot(h.values().array().pow(p - 2).matrix().cwiseProduct(phi.cwiseAbs2()));
  return std::pow(G, -(n + 1) / p) * (quad - (p - 1) * mass);
}

VariationReport variation_check(const SupportFunction& h, double p, const Vec& phi, double eps, bool with_bounds) {
  const Residual res = lp_residual(h, p);
  require(res.sup < 1e-6, ErrorCode::precondition,
          "variation check needs a solution (residual " + fmt_g(res.sup) + " >= 1e-6)");
  require(eps >= 1e-4 && eps <= 1e-2, ErrorCode::invalid_argument, "step must lie in [1e-4, 1e-2]");
  const GridPtr& g = h.grid_ptr();
  const int n = g->dim();
  auto F = [&](const Vec& dir, double t) {
    return bs_functional(SupportFunction(g, h.values() + t * dir), p, true);
  };
  VariationReport r;
  r.F = bs_functional(h, p, true);
  const double fp = F(phi, eps), fm = F(phi, -eps);
  r.first = (fp - fm) / (2 * eps);
  r.second_fd = (fp - 2 * r.F + fm) / (eps * eps);
  const Components comp = project_components(phi, h);
  r.second_form = second_variation_form(h, p, comp.perp);
  const double scale = std::max(std::abs(r.second_form), 1e-300);
  r.rel_error = std::abs(r.second_fd - r.second_form) / scale;
  if (!with_bounds) return r;
  r.lambda3 = lambda3(h);
  const double G = integrate(*g, h.values().array().pow(p).matrix());
  const Mat z = boundary_points(h);
  for (int l = 0; l <= n; ++l) {
    const Vec dir = h.values().cwiseProduct(z.col(l));
    const Vec perp = project_components(dir, h).perp;
    DecreaseBoundRow row;
    row.component = l;
    row.lhs = std::pow(G, (n + 1) / p) * (F(dir, eps) - r.F);
    const double mass = integrate(*g, h.values().array().pow(p - 2).matrix().cwiseProduct(perp.cwiseAbs2()));
    row.rhs = -(r.lambda3 + p - 1) / 2 * eps * eps * mass;
    // o(eps^2) remainder: allow a cubic-order slack.
    row.holds = row.lhs <= row.rhs + eps * eps * eps * (1 + std::abs(mass)) * 10;
    r.decrease_bounds.push_back(row);
  }
  return r;
}

AprioriConstants apriori_constants(const SupportFunction& h, double p) {
  require(p < 0, ErrorCode::invalid_argument, "a-priori bounds need p < 0");
  const GeometryReport geo = geometry_report(h);
  const int n = h.grid().dim();
  const double m = geo.m, M = geo.M, vol = geo.volume;
  AprioriConstants c;
  c.max_vs_min = std::pow(M / std::pow(m, p - n), 1 / (2 - p));
  c.vol_vs_min = std::pow(vol / std::pow(m, p), 1 / (1 - p));
  c.min_vs_max = std::pow(m, p + n) / (std::pow(-p, n) * std::pow(M, 2 * n + 1));
  c.vol_vs_max = vol / std::pow(M, n + 1);
  const double mu1 = moment_ellipsoid(h).ellipsoid.mu.minCoeff();
  c.axis_quotient = vol / std::pow(mu1, (p + n + 1) / 2);
  return c;
}

}  // namespace lpm
