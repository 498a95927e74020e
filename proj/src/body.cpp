#include "lpmlab/body.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>

namespace lpm {

SupportFunction::SupportFunction(GridPtr grid, Vec h) : grid_(std::move(grid)), h_(std::move(h)) {
  require(grid_ != nullptr, ErrorCode::invalid_argument, "support function without grid");
  require(h_.size() == grid_->size(), ErrorCode::grid_mismatch,
          "support values do not match grid node count");
  require(h_.allFinite(), ErrorCode::invalid_argument, "support function has non-finite values");
  require(h_.minCoeff() > 0, ErrorCode::origin_outside,
          "support function must be positive (origin inside the body)");
  d_ = differentials(ScalarField(grid_, h_));
  a11_ = d_.h11 + h_;
  if (grid_->dim() == 1) {
    det_ = a11_;
    min_eig_ = a11_.minCoeff();
    max_abs_a_ = a11_.cwiseAbs().maxCoeff();
  } else {
    a12_ = d_.h12;
    a22_ = d_.h22 + h_;
    det_ = a11_.cwiseProduct(a22_) - a12_.cwiseProduct(a12_);
    min_eig_ = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < h_.size(); ++i) {
      const double tr = a11_[i] + a22_[i];
      const double disc = std::hypot(a11_[i] - a22_[i], 2 * a12_[i]);
      min_eig_ = std::min(min_eig_, 0.5 * (tr - disc));
      max_abs_a_ = std::max({max_abs_a_, std::abs(a11_[i]), std::abs(a22_[i]), std::abs(a12_[i])});
    }
  }
  convex_ = min_eig_ > -1e-8 * max_abs_a_;
}

Ellipsoid make_ellipsoid(Vec mu, Vec center) {
  require(mu.size() == center.size(), ErrorCode::invalid_argument, "ellipsoid axes and center differ in dimension");
  require(mu.size() == 2 || mu.size() == 3, ErrorCode::invalid_argument, "ellipsoid must live in R^2 or R^3");
  require((mu.array() > 0).all(), ErrorCode::invalid_argument, "ellipsoid semi-axes must be positive");
  for (Index i = 1; i < mu.size(); ++i)
    require(mu[i] >= mu[i - 1], ErrorCode::invalid_argument, "ellipsoid semi-axes must be sorted ascending");
  return {std::move(mu), std::move(center)};
}

SupportFunction sphere(const GridPtr& g, double radius) {
  return SupportFunction(g, Vec::Constant(g->size(), radius));
}

SupportFunction ellipsoid_support(const Ellipsoid& e, const GridPtr& g) {
  require(e.mu.size() == g->ambient(), ErrorCode::invalid_argument, "ellipsoid dimension does not match grid");
  const Mat& x = g->points();
  Vec h(g->size());
  for (Index i = 0; i < g->size(); ++i) {
    const Eigen::VectorXd xi = x.row(i).transpose();
    h[i] = std::sqrt(e.mu.cwiseProduct(e.mu).dot(xi.cwiseProduct(xi))) + e.center.dot(xi);
  }
  require(h.minCoeff() > 0, ErrorCode::origin_outside, "origin lies outside the ellipsoid");
  return SupportFunction(g, std::move(h));
}

Vec monge_ampere(const SupportFunction& h) { return h.det_a(); }

Residual lp_residual(const SupportFunction& h, double p) {
  Residual r;
  r.field = h.det_a() - h.values().array().pow(p - 1).matrix();
  r.sup = r.field.cwiseAbs().maxCoeff();
  r.l2 = std::sqrt(integrate(h.grid(), r.field.cwiseProduct(r.field)));
  return r;
}

Mat boundary_points(const SupportFunction& h) {
  const Grid& g = h.grid();
  Mat z = g.points().array().colwise() * h.values().array();
  z.array() += g.frame(0).array().colwise() * h.hessian().g1.array();
  if (g.dim() == 2) z.array() += g.frame(1).array().colwise() * h.hessian().g2.array();
  return z;
}

GeometryReport geometry_report(const SupportFunction& h) {
  require(h.convex(), ErrorCode::nonconvex, "geometry report needs a convex body");
  const Grid& g = h.grid();
  const int n = g.dim();
  GeometryReport r;
  r.dv = h.values().cwiseProduct(h.det_a()).cwiseProduct(g.weights());
  r.total_dv = r.dv.sum();
  r.volume = r.total_dv / (n + 1);
  r.m = h.min();
  r.M = h.max();
  r.gamma = r.M / r.m;
  r.z = boundary_points(h);
  // x / h dV = x detA w
  const Vec wd = h.det_a().cwiseProduct(g.weights());
  r.kw = g.points().transpose() * wd;
  return r;
}

Convexity convexity_check(const SupportFunction& h) { return {h.convex(), h.min_eig()}; }

double ellipsoid_identity_residual(const Ellipsoid& e, const GridPtr& g) {
  const SupportFunction h = ellipsoid_support(e, g);
  const int n = g->dim();
  const double prod = e.mu.cwiseProduct(e.mu).prod();
  const Vec centered = h.values() - g->points() * e.center;
  double sup = 0;
  for (Index i = 0; i < g->size(); ++i)
    sup = std::max(sup, std::abs(h.det_a()[i] - prod * std::pow(centered[i], -n - 2)));
  return sup;
}

double unit_ball_volume(int d) {
  return std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1);
}

MomentEllipsoid moment_ellipsoid(const SupportFunction& h) {
  const GeometryReport geo = geometry_report(h);
  const int n = h.grid().dim();
  const int d = n + 1;
  // Solid moments from boundary integrals with cone weights:
  //   int_K y dy = (1/(n+2)) int Z dV,  int_K y y^T dy = (1/(n+3)) int Z Z^T dV.
  const Vec first = geo.z.transpose() * geo.dv / (n + 2);
  const Mat second = geo.z.transpose() * geo.dv.asDiagonal() * geo.z / (n + 3);
  const Vec c = first / geo.volume;
  const Mat central = second - geo.volume * c * c.transpose();
  Eigen::SelfAdjointEigenSolver<Mat> es(central);
  // For a solid ellipsoid the central second moment is proportional to mu_i^2.
  Vec mu = es.eigenvalues().cwiseMax(0).cwiseSqrt();
  const double scale = std::pow(geo.volume / (unit_ball_volume(d) * mu.prod()), 1.0 / d);
  mu *= scale;
  MomentEllipsoid out;
  out.ellipsoid.mu = mu;
  out.ellipsoid.center = c;
  out.axes = es.eigenvectors();
  return out;
}

void write_body(const std::string& prefix, const SupportFunction& h, const std::string& description) {
  const Grid& g = h.grid();
  write_field_csv(prefix + ".csv", g, h.values());
  nlohmann::ordered_json side;
  side["n"] = g.dim();
  side["resolution"] = g.dim() == 1 ? nlohmann::ordered_json::array({g.n_theta()})
                                    : nlohmann::ordered_json::array({g.n_theta(), g.n_phi()});
  side["description"] = description;
  std::ofstream os(prefix + ".json");
  require(static_cast<bool>(os), ErrorCode::io, "cannot write " + prefix + ".json");
  os << side.dump(2) << '\n';
}

}  // namespace lpm
