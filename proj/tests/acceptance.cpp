// Acceptance runner: one PASS/FAIL line per criterion with the measured
// quantities and wall time. Exit status is the number of failed criteria.
#include "lpmlab/flow.hpp"
#include "lpmlab/functional.hpp"
#include "lpmlab/random_body.hpp"
#include "lpmlab/spectral.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace lpm;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Eigenvalues of -(Laplacian + n) on degree-l harmonics, with multiplicity.
std::vector<double> harmonic_eigenvalues(int n, int count) {
  std::vector<double> out;
  for (int l = 0; static_cast<int>(out.size()) < count; ++l) {
    const int mult = n == 1 ? (l == 0 ? 1 : 2) : 2 * l + 1;
    for (int m = 0; m < mult && static_cast<int>(out.size()) < count; ++m) out.push_back(l * (l + n - 1.0) - n);
  }
  return out;
}

// Worst deviation of the computed low spectrum from the harmonic eigenvalues:
// relative for nonzero values, absolute for zeros.
std::pair<double, double> sphere_spectrum_error(const GridPtr& g, int count) {
  GeneralizedEigenPair pair = assemble_linearized(sphere(g));
  spectrum(pair, count);
  const auto exact = harmonic_eigenvalues(g->dim(), count);
  double nonzero = 0, zero = 0;
  for (int i = 0; i < count; ++i) {
    if (exact[i] == 0)
      zero = std::max(zero, std::abs(pair.eigenvalues[i]));
    else
      nonzero = std::max(nonzero, rel(pair.eigenvalues[i], exact[i]));
  }
  return {nonzero, zero};
}

Outcome sphere_spectrum_criterion() {
  const auto [nz2, z2] = sphere_spectrum_error(Grid::make(2, 32, 64), 16);
  const auto [nz1, z1] = sphere_spectrum_error(Grid::make(1, 256), 7);
  const bool pass = nz2 < 1e-2 && z2 < 0.05 && nz1 < 5e-3 && z1 < 5e-3;
  return {pass, "n=2 rel " + fmt(nz2) + ", zero " + fmt(z2) + "; n=1 rel " + fmt(nz1) + ", zero " + fmt(z1)};
}

// Sup of detA - (mu1...mu_{n+1})^2 / (h - z0.x)^(n+2) for the ellipsoid support function.
double ellipsoid_curvature_residual(const GridPtr& g, const Vec& mu, const Vec& z0) {
  const Mat& x = g->points();
  Vec h(g->size()), h0(g->size());
  for (Index i = 0; i < g->size(); ++i) {
    double q = 0;
    for (int a = 0; a < g->ambient(); ++a) q += mu[a] * mu[a] * x(i, a) * x(i, a);
    h0[i] = std::sqrt(q);
    h[i] = h0[i] + x.row(i).dot(z0);
  }
  const double prod2 = std::pow(mu.prod(), 2);
  const Vec det = SupportFunction(g, h).det_a();
  double sup = 0;
  for (Index i = 0; i < g->size(); ++i)
    sup = std::max(sup, std::abs(det[i] - prod2 / std::pow(h0[i], g->dim() + 2)));
  return sup;
}

Outcome ellipsoid_identity_criterion() {
  const Vec mu = (Vec(3) << 1, 1.5, 2).finished();
  const Vec z0 = (Vec(3) << 0.1, 0, 0).finished();
  const double coarse = ellipsoid_curvature_residual(Grid::make(2, 32, 64), mu, z0);
  const double fine = ellipsoid_curvature_residual(Grid::make(2, 64, 128), mu, z0);
  return {coarse / fine >= 3.5,
          "sup residual " + fmt(coarse) + " -> " + fmt(fine) + ", ratio " + fmt(coarse / fine)};
}

Outcome integral_identity_criterion() {
  const GridPtr g1 = Grid::make(1, 256);
  const Vec h1 = ellipsoid_support(make_ellipsoid((Vec(2) << 1, 2).finished(), Vec::Zero(2)), g1).values();
  const double e1 = std::abs(integrate(*g1, h1.array().pow(-2).matrix()) - pi);
  const GridPtr g2 = Grid::make(2, 64, 128);
  const Vec h2 = ellipsoid_support(make_ellipsoid((Vec(3) << 1, 1.5, 2).finished(), Vec::Zero(3)), g2).values();
  const double e2 = rel(integrate(*g2, h2.array().pow(-3).matrix()), 4 * pi / (1 * 1.5 * 2));
  return {e1 < 1e-8 && e2 < 1e-4, "n=1 abs " + fmt(e1) + "; n=2 rel " + fmt(e2)};
}

Outcome orthonormality_criterion() {
  const GridPtr g = Grid::make(2, 32, 64);
  double off = 0, spread = 0, vs_expected = 0, gamma_max = 1;
  for (int k : {6, 12}) {
    const SymmetryGroup grp = symmetry_group(good_position_polytope(2, k));
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      RandomBodyRecipe r;
      r.max_degree = 8;
      r.amplitude = 0.1;
      const SupportFunction h = random_convex_body(g, 100 + seed, r, &grp);
      const Orthonormality o = orthonormality_check(h);
      const double tr = o.m.trace();
      Mat od = o.m;
      od.diagonal().setZero();
      off = std::max(off, od.cwiseAbs().maxCoeff() / tr);
      const Vec d = o.m.diagonal();
      spread = std::max(spread, (d.maxCoeff() - d.minCoeff()) / d.mean());
      for (int a = 0; a < 3; ++a) vs_expected = std::max(vs_expected, rel(d[a], o.expected));
      gamma_max = std::max(gamma_max, h.max() / h.min());
    }
  }
  return {off < 1e-6 && spread < 1e-5 && vs_expected < 1e-5,
          "offdiag/trace " + fmt(off) + ", diag spread " + fmt(spread) + ", vs expected " + fmt(vs_expected) +
              ", max gamma " + fmt(gamma_max)};
}

Outcome kazdan_warner_criterion() {
  const GridPtr g = Grid::make(2, 32, 64);
  double worst = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const GeometryReport r = geometry_report(random_convex_body(g, 200 + seed));
    worst = std::max(worst, r.kw.norm() / r.total_dv);
  }
  return {worst < 1e-6, "max |KW| / int dV " + fmt(worst)};
}

Outcome uniqueness_criterion() {
  const GridPtr g = Grid::make(2, 24, 48);
  const SymmetryGroup grp = symmetry_group(good_position_polytope(2, 12));
  SolveOptions o;
  o.symmetrizer = std::make_shared<Symmetrizer>(g, grp);
  auto invariant = [&](int l) {
    Vec f = group_average(*g, harmonic(2, l, 0), grp);
    f.array() -= f.mean();
    return Vec(f / f.cwiseAbs().maxCoeff());
  };
  const Vec p6 = invariant(6), p10 = invariant(10), one = Vec::Ones(g->size());
  const std::vector<Vec> starts = {one + 0.02 * p6, 1.5 * (one - 0.015 * p6), 0.7 * (one + 0.004 * p10 + 0.01 * p6)};
  double dev = 0, gamma0 = 1;
  for (const Vec& v : starts) {
    const SupportFunction h0(g, v);
    gamma0 = std::max(gamma0, h0.max() / h0.min());
    const SolveReport r = solve_minkowski(-5, h0, o);
    dev = std::max(dev, (r.h->values().array() - 1).abs().maxCoeff());
  }
  return {dev < 1e-4, "max sup|h-1| " + fmt(dev) + " from starts with gamma up to " + fmt(gamma0)};
}

std::vector<BranchPoint> planar_branch;

Outcome planar_bifurcation_criterion() {
  const BranchPoint round = bifurcation_search(1, -6.5, 3, 0.05);
  planar_branch = branch_sweep(1, 3, 0.05, {-8, -7.5, -7.2});
  const BranchPoint &b8 = planar_branch[0], &b75 = planar_branch[1], &b72 = planar_branch[2];
  const bool nonround = b8.residual < 1e-8 && b75.residual < 1e-8 && b8.amplitude > 1e-2 && b75.amplitude > 1e-2;
  const bool monotone = b8.amplitude > b75.amplitude && b75.amplitude > b72.amplitude;
  return {round.amplitude < 1e-4 && nonround && monotone,
          "p=-6.5 gamma-1 " + fmt(round.amplitude) + "; gamma-1 at -8/-7.5/-7.2: " + fmt(b8.amplitude) + "/" +
              fmt(b75.amplitude) + "/" + fmt(b72.amplitude) + "; residuals " + fmt(b8.residual) + ", " +
              fmt(b75.residual)};
}

Outcome kernel_criterion() {
  if (planar_branch.empty() || !planar_branch[0].h) return {false, "no p=-8 solution available"};
  const KernelCheck planar = kernel_check(*planar_branch[0].h, -8);
  const KernelCheck round = kernel_check(sphere(Grid::make(2, 32, 64)), -3);
  return {planar.dimension == 1 && planar.defect_deg < 5 && round.dimension == 5,
          "n=1 p=-8: dim " + std::to_string(planar.dimension) + ", angle " + fmt(planar.defect_deg) +
              " deg; n=2 sphere p=-3: dim " + std::to_string(round.dimension)};
}

double worst_f_drop(const FlowTrajectory& tr) {
  double worst = 0;
  for (size_t i = 1; i < tr.samples.size(); ++i)
    worst = std::max(worst, (tr.samples[i - 1].F - tr.samples[i].F) / tr.samples[i - 1].F);
  return worst;
}

Outcome flow_criterion() {
  // Normalized-flow benchmarks: symmetric, generic and planar starts.
  const GridPtr g = Grid::make(2, 16, 32);
  const GridPtr c = Grid::make(1, 64);
  const Polytope ico = good_position_polytope(2, 12);
  FlowConfig nf;
  nf.alpha = 1.0 / 6;
  nf.t_end = 0.5;
  std::vector<std::pair<SupportFunction, double>> bench = {
      {SupportFunction(g, Vec::Ones(g->size()) + 0.01 * symmetric_perturbation(g, ico)), 1.0 / 6},
      {random_convex_body(g, 31), 1.0 / 6},
      {random_convex_body(g, 32), 0.25},
      {ellipsoid_support(make_ellipsoid((Vec(2) << 1, 1.4).finished(), Vec::Zero(2)), c), 0.25},
      {ellipsoid_support(make_ellipsoid((Vec(2) << 0.8, 1.1).finished(), (Vec(2) << 0.1, 0).finished()), c), 0.5}};
  double drop = 0;
  for (auto& [h, alpha] : bench) {
    nf.alpha = alpha;
    drop = std::max(drop, worst_f_drop(run_flow(h, nf)));
  }
  FlowConfig raw;
  raw.alpha = 1.0 / 6;
  raw.mode = FlowMode::raw;
  raw.dt_max = 1e-4;
  const FlowTrajectory ball = run_flow(sphere(g), raw);
  const double q = 1 + 2 * raw.alpha;
  double law = 0;
  for (const auto& s : ball.samples) law = std::max(law, std::abs(std::pow(s.M, q) - (1 - q * s.t)));
  const BlowupResult b = classify_blowup(ball);
  const double le = rel(b.L_hat, b.reference), ue = rel(b.U_hat, b.reference);
  return {drop <= 1e-8 && law < 1e-6 && b.type == BlowupType::type_I && le < 1e-2 && ue < 1e-2,
          "worst F drop " + fmt(drop) + "; ball law " + fmt(law) + ", type " + to_string(b.type) + ", L/U rel " +
              fmt(le) + "/" + fmt(ue)};
}

Outcome blowup_criterion() {
  const GridPtr g = Grid::make(2, 16, 32);
  struct Start {
    int k;
    double amplitude, radius;
  };
  const std::vector<Start> starts = {{4, 0.04, 1.0}, {6, 0.03, 1.2}, {8, 0.02, 0.8}, {12, 0.015, 1.0}, {20, 0.01, 1.1}};
  int type2 = 0, type3 = 0, runs = 0, declared = 0;
  std::ostringstream types;
  for (const Start& s : starts) {
    const Polytope poly = good_position_polytope(2, s.k);
    const SymmetryGroup grp = symmetry_group(poly);
    const SupportFunction h0(g, s.radius * (Vec::Ones(g->size()) + s.amplitude * symmetric_perturbation(g, poly)));
    FlowConfig fc;
    fc.alpha = 1.0 / 6;
    fc.mode = FlowMode::raw;
    fc.symmetrizer = std::make_shared<Symmetrizer>(g, grp);
    const double beta = fc.beta(2);
    // Declared T with inner radius above (T / beta)^beta.
    BlowupConfig bc;
    bc.horizon = 0.5 * beta * std::pow(h0.min(), 1 / beta);
    FlowConfig until = fc;
    until.t_end = *bc.horizon;
    const BlowupResult d = classify_blowup(run_flow(h0, until), bc);
    const BlowupResult e = classify_blowup(run_flow(h0, fc));
    ++declared;
    runs += 2;
    type2 += d.type == BlowupType::type_II;
    type3 += (d.type == BlowupType::type_III) + (e.type == BlowupType::type_III);
    types << " k=" << s.k << ":" << to_string(d.type) << "/" << to_string(e.type);
  }
  return {type2 == declared && type3 == 0,
          std::to_string(type2) + "/" + std::to_string(declared) + " declared-T runs type II, " +
              std::to_string(type3) + "/" + std::to_string(runs) + " runs type III;" + types.str()};
}

Outcome variation_criterion() {
  const GridPtr g = Grid::make(2, 32, 64);
  const SupportFunction s = sphere(g);
  double first = 0, second = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    RandomBodyRecipe r;
    r.axis_spread = 0;
    r.center_spread = 0;
    r.amplitude = 1;
    const Vec phi = sample(*g, random_body_function(2, 500 + seed, r)) - Vec::Ones(g->size());
    const VariationReport v = variation_check(s, -5, phi, 1e-4, false);
    first = std::max(first, std::abs(v.first) / v.F);
    second = std::max(second, v.rel_error);
  }
  return {first < 1e-6 && second < 1e-3, "first/F " + fmt(first) + ", second rel " + fmt(second)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> all = {
      {1, "sphere spectrum", 60, sphere_spectrum_criterion},
      {2, "ellipsoid Monge-Ampere identity", 30, ellipsoid_identity_criterion},
      {3, "ellipsoid integral identity", 10, integral_identity_criterion},
      {4, "orthonormality of symmetric bodies", 120, orthonormality_criterion},
      {5, "Kazdan-Warner identity", 60, kazdan_warner_criterion},
      {6, "uniqueness at p=-5 (icosahedral)", 600, uniqueness_criterion},
      {7, "planar bifurcation boundary", 300, planar_bifurcation_criterion},
      {8, "kernel dimension", 120, kernel_criterion},
      {9, "flow monotonicity and ball law", 120, flow_criterion},
      {10, "blow-up dichotomy", 600, blowup_criterion},
      {11, "variational formulas", 60, variation_criterion},
  };
  int failed = 0;
  for (const Criterion& c : all) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.budget_s;
    const bool pass = o.pass && in_time;
    failed += pass ? 0 : 1;
    std::printf("%s  %2d  %-38s %7.1fs (budget %.0fs%s)  %s\n", pass ? "PASS" : "FAIL", c.id, c.name, secs,
                c.budget_s, in_time ? "" : ", exceeded", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
  return failed;
}
