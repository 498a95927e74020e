#include "lpmlab/random_body.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace lpm {

namespace {

double angle_harmonic(int n, int l, int m, const Vec& x) {
  if (n == 1) {
    const double t = std::atan2(x[1], x[0]);
    return m < 0 ? std::sin(l * t) : std::cos(l * t);
  }
  const double ct = std::clamp(x[2], -1.0, 1.0);
  const double ph = std::atan2(x[1], x[0]);
  const int am = std::abs(m);
  const double leg = std::assoc_legendre(static_cast<unsigned>(l), static_cast<unsigned>(am), ct);
  if (m > 0) return leg * std::cos(am * ph);
  if (m < 0) return leg * std::sin(am * ph);
  return leg;
}

struct Perturbation {
  std::vector<SphereFunction> modes;
  std::vector<double> coef;
  double operator()(const Vec& x) const {
    double s = 0;
    for (size_t i = 0; i < modes.size(); ++i) s += coef[i] * modes[i](x);
    return s;
  }
};

struct RandomParts {
  Mat quad;   // R diag(mu^2) R^T
  Vec center;
  Perturbation pert;
};

RandomParts draw(int n, std::uint64_t seed, const RandomBodyRecipe& recipe) {
  require(n == 1 || n == 2, ErrorCode::invalid_argument, "random bodies support n = 1, 2");
  require(recipe.axis_spread >= 0 && recipe.axis_spread < 1, ErrorCode::invalid_argument,
          "axis spread must lie in [0, 1)");
  require(recipe.max_degree >= 2 || recipe.amplitude == 0, ErrorCode::invalid_argument,
          "harmonic perturbation needs degree >= 2");
  const int d = n + 1;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Vec mu(d);
  for (int i = 0; i < d; ++i) mu[i] = 1 + recipe.axis_spread * unit(rng);
  Mat a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = unit(rng);
  const Mat r = Eigen::HouseholderQR<Mat>(a).householderQ();
  RandomParts out;
  out.quad = r * mu.cwiseAbs2().asDiagonal() * r.transpose();
  out.center.resize(d);
  for (int i = 0; i < d; ++i) out.center[i] = recipe.center_spread * unit(rng);
  double total = 0;
  for (int l = 2; l <= recipe.max_degree; ++l) {
    const int lo = n == 1 ? -1 : -l, hi = n == 1 ? 1 : l;
    for (int m = lo; m <= hi; ++m) {
      if (n == 1 && m == 0) continue;
      out.pert.modes.push_back(harmonic(n, l, m));
      const double c = unit(rng);
      out.pert.coef.push_back(c);
      total += std::abs(c);
    }
  }
  if (total > 0)
    for (double& c : out.pert.coef) c *= recipe.amplitude / total;
  return out;
}

}  // namespace

SphereFunction harmonic(int n, int l, int m) {
  require(n == 1 || n == 2, ErrorCode::invalid_argument, "harmonics support n = 1, 2");
  require(l >= 0 && std::abs(m) <= (n == 1 ? 1 : l), ErrorCode::invalid_argument, "invalid harmonic index");
  double peak = 1;
  if (n == 2) {
    peak = 0;
    // Longitude factor peaks at 1, so the max over colatitude is enough.
    for (int i = 0; i <= 4000; ++i) {
      const double ct = -1 + 2.0 * i / 4000;
      peak = std::max(peak, std::abs(std::assoc_legendre(static_cast<unsigned>(l),
                                                         static_cast<unsigned>(std::abs(m)), ct)));
    }
  }
  return [n, l, m, peak](const Vec& x) { return angle_harmonic(n, l, m, x) / peak; };
}

SphereFunction random_body_function(int n, std::uint64_t seed, const RandomBodyRecipe& recipe) {
  RandomParts parts = draw(n, seed, recipe);
  return [parts](const Vec& x) {
    return std::sqrt(x.dot(parts.quad * x)) + parts.center.dot(x) + parts.pert(x);
  };
}

Vec sample(const Grid& g, const SphereFunction& f) {
  Vec out(g.size());
  for (Index i = 0; i < g.size(); ++i) out[i] = f(g.points().row(i).transpose());
  return out;
}

Vec group_average(const Grid& g, const SphereFunction& f, const SymmetryGroup& group) {
  require(group.n == g.dim(), ErrorCode::invalid_argument, "symmetry group dimension does not match grid");
  Vec out = Vec::Zero(g.size());
  for (Index i = 0; i < g.size(); ++i) {
    const Vec x = g.points().row(i).transpose();
    double s = 0;
    for (const Mat& m : group.elements) s += f(m * x);
    out[i] = s / static_cast<double>(group.order());
  }
  return out;
}

SupportFunction random_convex_body(const GridPtr& g, std::uint64_t seed, const RandomBodyRecipe& recipe,
                                   const SymmetryGroup* group) {
  RandomBodyRecipe s = recipe;
  for (int attempt = 0; attempt <= 20; ++attempt, s.amplitude *= 0.5) {
    const SphereFunction f = random_body_function(g->dim(), seed, s);
    Vec h = group ? group_average(*g, f, *group) : sample(*g, f);
    if (h.minCoeff() <= 0) continue;
    SupportFunction body(g, std::move(h));
    if (body.convex()) return body;
  }
  fail(ErrorCode::nonconvex, "random body stayed nonconvex after 20 amplitude halvings (seed " +
                                 std::to_string(seed) + ")");
}

}  // namespace lpm
