#include "lpmlab/flow.hpp"
#include "lpmlab/functional.hpp"
#include "lpmlab/pipeline.hpp"
#include "lpmlab/random_body.hpp"
#include "lpmlab/spectral.hpp"

#include <cmath>
#include <numbers>

namespace lpm {

namespace {

constexpr double kPi = std::numbers::pi;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

Vec coord_power(const Grid& g, int a, int b, int c) {
  const Mat& x = g.points();
  Vec f(g.size());
  for (Index i = 0; i < g.size(); ++i) f[i] = std::pow(x(i, 0), a) * std::pow(x(i, 1), b) * std::pow(x(i, 2), c);
  return f;
}

double laplacian_error(int nt) {
  const GridPtr g = Grid::make(2, nt, 2 * nt);
  const Vec f = sample(*g, harmonic(2, 3, 2));
  const FrameHessian d = differentials(ScalarField(g, f));
  return (d.laplacian + 12 * f).cwiseAbs().maxCoeff();
}

std::vector<Check> grid_suite() {
  std::vector<Check> out;
  const GridPtr g1 = Grid::make(1, 256);
  const GridPtr g2 = Grid::make(2, 32, 64);
  out.push_back(check_le("n1_weight_sum_rel_error", rel(g1->weights().sum(), 2 * kPi), 1e-12, "|S^1| = 2 pi"));
  out.push_back(check_le("n2_weight_sum_rel_error", rel(g2->weights().sum(), 4 * kPi), 1e-6, "|S^2| = 4 pi"));
  out.push_back(check_le("node_norm_error", (g2->points().rowwise().norm().array() - 1).abs().maxCoeff(), 1e-14,
                         "nodes on the unit sphere"));
  double odd = 0;
  for (const auto& f : {coord_power(*g2, 1, 0, 0), coord_power(*g2, 1, 1, 1), coord_power(*g2, 0, 0, 3)})
    odd = std::max(odd, std::abs(integrate(*g2, f)));
  out.push_back(check_le("odd_monomial_quadrature", odd, 1e-10, "odd integrands vanish"));
  out.push_back(check_le("x3_squared_integral_rel_error", rel(integrate(*g2, coord_power(*g2, 0, 0, 2)), 4 * kPi / 3),
                         1e-6, "int x3^2 = 4 pi / 3"));
  Vec c2(g1->size()), c2tt(g1->size());
  for (Index i = 0; i < g1->size(); ++i) {
    c2[i] = std::cos(2 * g1->theta()[i]);
    c2tt[i] = -4 * c2[i];
  }
  out.push_back(check_le("cos2theta_second_derivative", (differentials(ScalarField(g1, c2)).h11 - c2tt).cwiseAbs().maxCoeff(),
                         1e-8, "(cos 2t)'' = -4 cos 2t"));
  out.push_back(check_ge("laplacian_refinement_ratio", laplacian_error(16) / laplacian_error(32), 3.5,
                         "degree-3 harmonic eigenfunction of the Laplacian"));
  const Vec f = sample(*g2, harmonic(2, 2, 1));
  const Vec x0 = g2->points().row(77).transpose();
  out.push_back(check_le("interpolation_at_node", std::abs(interpolate(ScalarField(g2, f), x0) - f[77]), 1e-15,
                         "interpolation reproduces nodes"));
  return out;
}

std::vector<Check> body_suite() {
  std::vector<Check> out;
  const Ellipsoid e3 = make_ellipsoid((Vec(3) << 1, 1.5, 2).finished(), Vec::Zero(3));
  const double r32 = ellipsoid_identity_residual(e3, Grid::make(2, 32, 64));
  const double r64 = ellipsoid_identity_residual(e3, Grid::make(2, 64, 128));
  out.push_back(check_ge("ellipsoid_identity_refinement_ratio", r32 / r64, 3.5,
                         "det A = prod mu_i^2 (h - z0.x)^(-n-2) for ellipsoids"));
  const GridPtr g1 = Grid::make(1, 256);
  const SupportFunction e2 = ellipsoid_support(make_ellipsoid((Vec(2) << 1, 2).finished(), Vec::Zero(2)), g1);
  out.push_back(check_le("ellipse_inverse_square_integral", std::abs(integrate(*g1, e2.values().array().pow(-2).matrix()) - kPi),
                         1e-8, "int h^(-2) = (n+1) Vol(B1) / prod mu"));
  const GridPtr g2 = Grid::make(2, 32, 64);
  const SupportFunction h3 = ellipsoid_support(e3, g2);
  out.push_back(check_le("ellipsoid_inverse_cube_integral_rel",
                         rel(integrate(*g2, h3.values().array().pow(-3).matrix()), 4 * kPi / 3.0), 1e-4,
                         "int h^(-3) = (n+1) Vol(B1) / prod mu"));
  out.push_back(check_le("ellipse_area_rel_error", rel(geometry_report(e2).volume, 2 * kPi), 1e-6, "area pi mu1 mu2"));
  const SupportFunction off =
      ellipsoid_support(make_ellipsoid((Vec(3) << 1, 1.5, 2).finished(), (Vec(3) << 0.1, -0.2, 0.3).finished()), g2);
  const GeometryReport geo = geometry_report(off);
  out.push_back(check_le("kazdan_warner_relative", geo.kw.norm() / geo.total_dv, 1e-6, "Kazdan-Warner: int x/h dV = 0"));
  out.push_back(check_le("sphere_residual", lp_residual(sphere(g2), -5).sup, 1e-9, "h = 1 solves every p"));
  const AprioriConstants a = apriori_constants(sphere(g2), -5);
  out.push_back(check_info("apriori_max_vs_min", a.max_vs_min, "M <= C^(2-p) m^(p-n)"));
  out.push_back(check_info("apriori_vol_vs_min", a.vol_vs_min, "Vol <= C^(1-p) m^p"));
  out.push_back(check_info("apriori_min_vs_max", a.min_vs_max, "m^(p+n) <= C (-p)^n M^(2n+1)"));
  out.push_back(check_info("apriori_vol_vs_max", a.vol_vs_max, "Vol <= C M^(n+1)"));
  return out;
}

std::vector<Check> symmetry_suite() {
  std::vector<Check> out;
  const std::pair<int, size_t> orders[] = {{4, 24}, {6, 48}, {8, 48}, {12, 120}, {20, 120}};
  for (const auto& [k, ord] : orders) {
    const Polytope p = good_position_polytope(2, k);
    out.push_back(check_le(p.name + "_group_order_error",
                           std::abs(static_cast<double>(symmetry_group(p).order()) - static_cast<double>(ord)), 0,
                           "rotation-reflection group order"));
  }
  out.push_back(check_le("hexagon_group_order_error",
                         std::abs(static_cast<double>(symmetry_group(good_position_polytope(1, 6)).order()) - 12), 0,
                         "dihedral group order 2k"));
  const GridPtr g = Grid::make(2, 64, 128);
  const SymmetryGroup ico = symmetry_group(good_position_polytope(2, 12));
  const SupportFunction h = random_convex_body(g, 7, {}, &ico);
  const Orthonormality on = orthonormality_check(h);
  const double tr = on.m.trace();
  double off = 0, spread = 0, dev = 0;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b)
      if (a != b) off = std::max(off, std::abs(on.m(a, b)));
    spread = std::max(spread, rel(on.m(a, a), tr / 3));
    dev = std::max(dev, rel(on.m(a, a), on.expected));
  }
  out.push_back(check_le("orthonormality_offdiag_over_trace", off / tr, 1e-6, "int x_a x_b h^-2 dV diagonal"));
  out.push_back(check_le("orthonormality_diag_spread", spread, 1e-5, "equal diagonal"));
  out.push_back(check_le("orthonormality_diag_vs_expected", dev, 1e-5, "diagonal = int h^-2 dV / (n+1)"));
  out.push_back(check_info("invariance_defect_interpolated", invariance_defect(h, ico), "interpolated pullback"));
  return out;
}

std::vector<Check> spectral_suite() {
  std::vector<Check> out;
  for (int n : {1, 2}) {
    const GridPtr g = n == 1 ? Grid::make(1, 256) : Grid::make(2, 32, 64);
    const int count = n == 1 ? 7 : 16;
    auto pair = assemble_linearized(sphere(g));
    spectrum(pair, count);
    const auto exact = sphere_spectrum(n, count);
    double r = 0, z = 0;
    for (int i = 0; i < count; ++i) {
      const double e = exact[static_cast<size_t>(i)];
      if (e == 0)
        z = std::max(z, std::abs(pair.eigenvalues[i]));
      else
        r = std::max(r, rel(pair.eigenvalues[i], e));
    }
    const std::string tag = "n" + std::to_string(n) + "_sphere_";
    out.push_back(check_le(tag + "spectrum_rel_error", r, n == 1 ? 5e-3 : 1e-2, "sphere eigenvalues l(l+n-1)-n"));
    out.push_back(check_le(tag + "zero_cluster", z, 0.05, "translation kernel"));
  }
  const KernelCheck kc = kernel_check(sphere(Grid::make(2, 32, 64)), -3);
  out.push_back(check_le("sphere_kernel_dimension_error_p=-3", std::abs(kc.dimension - 5), 0,
                         "eigenvalue 1-p = 4 has multiplicity 5 at the sphere"));
  return out;
}

std::vector<Check> functional_suite() {
  std::vector<Check> out;
  const GridPtr g = Grid::make(2, 32, 64);
  const Vec v = (Vec(3) << 0.1, -0.05, 0.2).finished();
  const SupportFunction shifted(g, Vec::Ones(g->size()) + g->points() * v);
  out.push_back(check_le("santalo_center_of_shifted_ball", (santalo_center(shifted, -5).center - v).norm(), 1e-8,
                         "center of a ball is its Santalo point"));
  const SupportFunction s = sphere(g);
  const double F = bs_functional(s, -5, true);
  out.push_back(check_le("F_scale_invariance", rel(bs_functional(SupportFunction(g, 1.7 * s.values()), -5, true), F), 1e-12,
                         "F is invariant under dilation"));
  double first = 0, second = 0;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    RandomBodyRecipe recipe;
    recipe.axis_spread = 0;
    recipe.center_spread = 0;
    recipe.amplitude = 1;
    const Vec phi = sample(*g, random_body_function(2, seed, recipe)) - Vec::Ones(g->size());
    const VariationReport r = variation_check(s, -5, phi, 1e-3, false);
    first = std::max(first, std::abs(r.first) / r.F);
    second = std::max(second, r.rel_error);
  }
  out.push_back(check_le("first_variation_over_F", first, 1e-6, "sphere is critical for F"));
  out.push_back(check_le("second_variation_rel_error", second, 1e-3, "finite difference vs quadratic form"));
  return out;
}

std::vector<Check> flow_suite() {
  std::vector<Check> out;
  const GridPtr g = Grid::make(2, 16, 32);
  FlowConfig raw;
  raw.alpha = 1.0 / 6;
  raw.mode = FlowMode::raw;
  raw.dt_max = 1e-4;
  const FlowTrajectory tr = run_flow(sphere(g), raw);
  const double q = 1 + 2 * raw.alpha;
  double law = 0;
  for (const auto& s : tr.samples) law = std::max(law, std::abs(std::pow(s.M, q) - (1 - q * s.t)));
  out.push_back(check_le("ball_law_error", law, 1e-6, "h^(1+n alpha) decreases linearly"));
  const BlowupResult b = classify_blowup(tr);
  out.push_back(check_le("ball_type_I", b.type == BlowupType::type_I ? 0 : 1, 0, "ball blows up at type I rate"));
  out.push_back(check_le("ball_L_hat_rel_error", rel(b.L_hat, b.reference), 1e-2, "L = beta^(-beta)"));
  out.push_back(check_le("ball_U_hat_rel_error", rel(b.U_hat, b.reference), 1e-2, "U = beta^(-beta)"));
  const SymmetryGroup ico = symmetry_group(good_position_polytope(2, 12));
  const Vec pert = group_average(*g, harmonic(2, 6, 0), ico);
  FlowConfig nf;
  nf.alpha = 1.0 / 6;
  nf.t_end = 0.5;
  const FlowTrajectory nt = run_flow(SupportFunction(g, Vec::Ones(g->size()) + 0.01 * pert / pert.cwiseAbs().maxCoeff()), nf);
  out.push_back(check_le("normalized_F_worst_drop", nt.envelopes.worst_f_drop, 1e-8, "F monotone along the flow"));
  const StepResult st = flow_step(sphere(g), nf, 1e-3);
  out.push_back(check_le("sphere_fixed_point", (st.h.values().array() - 1).abs().maxCoeff(), 1e-10,
                         "h = 1 is stationary for the normalized flow"));
  return out;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"grid", "body", "symmetry", "spectral", "functional", "flow"};
  return names;
}

std::vector<Check> run_suite(const std::string& name) {
  if (name == "all") {
    std::vector<Check> all;
    for (const auto& s : suite_names())
      for (auto& c : run_suite(s)) {
        c.name = s + "." + c.name;
        all.push_back(std::move(c));
      }
    return all;
  }
  if (name == "grid") return grid_suite();
  if (name == "body") return body_suite();
  if (name == "symmetry") return symmetry_suite();
  if (name == "spectral") return spectral_suite();
  if (name == "functional") return functional_suite();
  if (name == "flow") return flow_suite();
  fail(ErrorCode::invalid_argument, "unknown suite " + name + " (grid|body|symmetry|spectral|functional|flow|all)");
}

}  // namespace lpm
