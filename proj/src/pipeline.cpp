#include "lpmlab/pipeline.hpp"

#include "json.hpp"
#include "lpmlab/flow.hpp"
#include "lpmlab/functional.hpp"
#include "lpmlab/random_body.hpp"
#include "lpmlab/spectral.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#ifndef LPMLAB_VERSION
#define LPMLAB_VERSION "0.0.0"
#endif

namespace lpm {

namespace fs = std::filesystem;
using nlohmann::json;
using ojson = nlohmann::ordered_json;

Check check_le(std::string name, double value, double tol, std::string source) {
  return {std::move(name), value, tol, "<=", value <= tol, std::move(source)};
}

Check check_ge(std::string name, double value, double bound, std::string source) {
  return {std::move(name), value, bound, ">=", value >= bound, std::move(source)};
}

Check check_info(std::string name, double value, std::string source) {
  return {std::move(name), value, 0, "info", true, std::move(source)};
}

namespace {

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

void print_checks(std::ostream& os, const std::vector<Check>& checks) {
  size_t w = 5;
  for (const auto& c : checks) w = std::max(w, c.name.size());
  os << std::left << std::setw(static_cast<int>(w)) << "check" << "  " << std::setw(6) << "status" << "  "
     << std::setw(14) << "value" << "  " << "bound" << "\n";
  for (const auto& c : checks) {
    os << std::setw(static_cast<int>(w)) << c.name << "  " << std::setw(6)
       << (c.relation == "info" ? "info" : c.passed ? "PASS" : "FAIL") << "  " << std::setw(14)
       << short_number(c.value) << "  ";
    if (c.relation != "info") os << c.relation << " " << short_number(c.tolerance);
    os << "\n";
  }
}

namespace {

// ---- schema helpers ----

[[noreturn]] void schema(const std::string& what) { fail(ErrorCode::schema, "config: " + what); }

void allow_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) schema(where + " must be an object");
  const std::set<std::string> ok(keys.begin(), keys.end());
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!ok.count(it.key())) schema("unknown key '" + it.key() + "' in " + where);
}

double num(const json& obj, const char* key, double def) {
  if (!obj.contains(key)) return def;
  if (!obj[key].is_number()) schema(std::string("'") + key + "' must be a number");
  return obj[key].get<double>();
}

long integer(const json& obj, const char* key, long def) {
  if (!obj.contains(key)) return def;
  if (!obj[key].is_number_integer()) schema(std::string("'") + key + "' must be an integer");
  return obj[key].get<long>();
}

bool boolean(const json& obj, const char* key, bool def) {
  if (!obj.contains(key)) return def;
  if (!obj[key].is_boolean()) schema(std::string("'") + key + "' must be a boolean");
  return obj[key].get<bool>();
}

std::string text(const json& obj, const char* key, const std::string& def) {
  if (!obj.contains(key)) return def;
  if (!obj[key].is_string()) schema(std::string("'") + key + "' must be a string");
  return obj[key].get<std::string>();
}

Vec vector_of(const json& v, const std::string& what) {
  if (!v.is_array()) schema(what + " must be an array of numbers");
  Vec out(static_cast<Index>(v.size()));
  for (size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) schema(what + " must be an array of numbers");
    out[static_cast<Index>(i)] = v[i].get<double>();
  }
  return out;
}

json section(const json& cfg, const char* key) {
  if (!cfg.contains(key) || cfg[key].is_null()) return json::object();
  if (!cfg[key].is_object()) schema(std::string("'") + key + "' must be an object");
  return cfg[key];
}

const std::set<std::string> kCommands = {"solve", "flow", "spectrum", "bifurcate", "quotient", "verify"};

struct RunConfig {
  json raw;
  std::string command;
  int n = 0;
  int nt = 0, np = 0;
  std::optional<double> p, alpha;
  json body, flow, solver, spectrum, bifurcation, verify;
  std::optional<int> sym_k;
  std::string output_dir;
  std::uint64_t seed = 0;
};

RunConfig parse_config(const json& j) {
  allow_keys(j, "config", {"command", "dimension", "resolution", "p", "alpha", "body", "symmetry", "flow", "solver",
                           "spectrum", "bifurcation", "verify", "output_dir", "seed", "description"});
  RunConfig c;
  c.raw = j;
  c.command = text(j, "command", "");
  if (!kCommands.count(c.command)) schema("'command' must be one of solve|flow|spectrum|bifurcate|quotient|verify");
  c.seed = static_cast<std::uint64_t>(integer(j, "seed", 0));
  c.output_dir = text(j, "output_dir", "");
  c.verify = section(j, "verify");
  allow_keys(c.verify, "verify", {"suite"});
  if (c.command == "verify") {
    const std::string s = text(c.verify, "suite", "all");
    const auto& names = suite_names();
    if (s != "all" && std::find(names.begin(), names.end(), s) == names.end()) schema("unknown verify suite " + s);
    return c;
  }
  c.n = static_cast<int>(integer(j, "dimension", 0));
  if (c.n != 1 && c.n != 2) schema("'dimension' must be 1 or 2");
  if (!j.contains("resolution")) {
    c.nt = c.n == 1 ? 256 : 32;
    c.np = c.n == 1 ? 0 : 64;
  } else if (c.n == 1) {
    if (!j["resolution"].is_number_integer()) schema("'resolution' must be an integer node count for dimension 1");
    c.nt = j["resolution"].get<int>();
  } else {
    const json& r = j["resolution"];
    if (!r.is_array() || r.size() != 2 || !r[0].is_number_integer() || !r[1].is_number_integer())
      schema("'resolution' must be [J, L] for dimension 2");
    c.nt = r[0].get<int>();
    c.np = r[1].get<int>();
  }
  if (j.contains("p")) c.p = num(j, "p", 0);
  if (j.contains("alpha")) c.alpha = num(j, "alpha", 0);
  if (c.p && c.alpha && std::abs(*c.p - (1 - 1 / *c.alpha)) > 1e-12) schema("'p' and 'alpha' disagree");
  if (c.alpha && !c.p) c.p = 1 - 1 / *c.alpha;
  if (c.p && !c.alpha && *c.p < 1) c.alpha = 1 / (1 - *c.p);
  c.body = j.contains("body") ? j["body"] : json{{"type", "sphere"}};
  if (!c.body.is_object()) schema("'body' must be an object");
  if (j.contains("symmetry") && !j["symmetry"].is_null()) {
    const json& s = j["symmetry"];
    allow_keys(s, "symmetry", {"n", "k"});
    if (s.contains("n") && integer(s, "n", 0) != c.n) schema("symmetry dimension does not match 'dimension'");
    if (!s.contains("k")) schema("symmetry needs 'k'");
    c.sym_k = static_cast<int>(integer(s, "k", 0));
  }
  c.flow = section(j, "flow");
  allow_keys(c.flow, "flow", {"mode", "stepper", "c_dt", "dt_max", "stability", "max_steps", "t_end", "residual_tol",
                              "m_stop", "sample_every", "symmetrize_every", "pin_scale", "recenter", "horizon"});
  c.solver = section(j, "solver");
  allow_keys(c.solver, "solver", {"flow_tol", "flow_max_time", "flow_chunk", "flow_chunk_steps", "c_dt", "dt_max", "handoff_tol",
                                  "newton_tol", "required_tol", "newton_max_iter", "recenter", "skip_flow"});
  c.spectrum = section(j, "spectrum");
  allow_keys(c.spectrum, "spectrum", {"count", "cluster_tol"});
  c.bifurcation = section(j, "bifurcation");
  allow_keys(c.bifurcation, "bifurcation", {"k", "epsilon", "p_values"});
  if ((c.command == "solve" || c.command == "bifurcate") && !c.p && !c.bifurcation.contains("p_values"))
    schema(c.command + " needs 'p'");
  if (c.command == "flow" && !c.alpha) schema("flow needs 'alpha' or 'p' < 1");
  if (c.command == "bifurcate" && !c.bifurcation.contains("k") && !c.sym_k) schema("bifurcate needs a vertex count k");
  const std::string bt = text(c.body, "type", "");
  if (bt == "sphere")
    allow_keys(c.body, "body", {"type", "radius"});
  else if (bt == "ellipsoid")
    allow_keys(c.body, "body", {"type", "mu", "center"});
  else if (bt == "perturbed_sphere")
    allow_keys(c.body, "body", {"type", "radius", "modes"});
  else if (bt == "random")
    allow_keys(c.body, "body", {"type", "axis_spread", "center_spread", "max_degree", "amplitude"});
  else if (bt == "file")
    allow_keys(c.body, "body", {"type", "path"});
  else
    schema("body 'type' must be sphere|ellipsoid|perturbed_sphere|random|file");
  return c;
}

SolveOptions solve_options(const json& s) {
  SolveOptions o;
  o.flow_tol = num(s, "flow_tol", o.flow_tol);
  o.flow_max_time = num(s, "flow_max_time", o.flow_max_time);
  o.flow_chunk = num(s, "flow_chunk", o.flow_chunk);
  o.flow_chunk_steps = integer(s, "flow_chunk_steps", o.flow_chunk_steps);
  o.c_dt = num(s, "c_dt", o.c_dt);
  o.dt_max = num(s, "dt_max", o.dt_max);
  o.handoff_tol = num(s, "handoff_tol", o.handoff_tol);
  o.newton_tol = num(s, "newton_tol", o.newton_tol);
  o.required_tol = num(s, "required_tol", o.required_tol);
  o.newton_max_iter = static_cast<int>(integer(s, "newton_max_iter", o.newton_max_iter));
  if (s.contains("recenter")) o.recenter = boolean(s, "recenter", false);
  o.skip_flow = boolean(s, "skip_flow", false);
  return o;
}

FlowConfig flow_config(const RunConfig& c) {
  const json& f = c.flow;
  FlowConfig fc;
  fc.alpha = *c.alpha;
  const std::string mode = text(f, "mode", "normalized");
  if (mode != "raw" && mode != "normalized") schema("flow 'mode' must be raw|normalized");
  fc.mode = mode == "raw" ? FlowMode::raw : FlowMode::normalized;
  const std::string st = text(f, "stepper", "heun");
  if (st != "heun" && st != "euler") schema("flow 'stepper' must be heun|euler");
  fc.stepper = st == "heun" ? Stepper::heun : Stepper::euler;
  fc.c_dt = num(f, "c_dt", fc.c_dt);
  fc.dt_max = num(f, "dt_max", fc.dt_max);
  fc.stability = num(f, "stability", fc.stability);
  fc.max_steps = integer(f, "max_steps", fc.max_steps);
  fc.t_end = num(f, "t_end", fc.t_end);
  fc.residual_tol = num(f, "residual_tol", fc.residual_tol);
  fc.m_stop = num(f, "m_stop", fc.m_stop);
  fc.sample_every = static_cast<int>(integer(f, "sample_every", fc.sample_every));
  fc.symmetrize_every = static_cast<int>(integer(f, "symmetrize_every", fc.symmetrize_every));
  fc.pin_scale = boolean(f, "pin_scale", false);
  fc.recenter = boolean(f, "recenter", false);
  try {
    fc.validate();
  } catch (const Error& e) {
    schema(e.what());
  }
  return fc;
}

SupportFunction make_body(const RunConfig& c, const GridPtr& g, const SymmetryGroup* group) {
  const json& b = c.body;
  const std::string type = text(b, "type", "sphere");
  if (type == "sphere") return sphere(g, num(b, "radius", 1.0));
  if (type == "ellipsoid") {
    if (!b.contains("mu")) schema("ellipsoid needs 'mu'");
    Vec mu = vector_of(b["mu"], "'mu'");
    Vec center = b.contains("center") ? vector_of(b["center"], "'center'") : Vec::Zero(mu.size());
    if (mu.size() != g->ambient() || center.size() != g->ambient()) schema("ellipsoid size must be dimension + 1");
    return ellipsoid_support(make_ellipsoid(mu, center), g);
  }
  if (type == "perturbed_sphere") {
    Vec h = Vec::Constant(g->size(), num(b, "radius", 1.0));
    if (b.contains("modes")) {
      if (!b["modes"].is_array()) schema("'modes' must be an array");
      for (const json& m : b["modes"]) {
        allow_keys(m, "mode", {"l", "m", "amplitude"});
        const int l = static_cast<int>(integer(m, "l", -1));
        const int mm = static_cast<int>(integer(m, "m", 0));
        if (l < 0 || std::abs(mm) > (c.n == 1 ? 1 : l)) schema("invalid harmonic mode index");
        h += num(m, "amplitude", 0) * sample(*g, harmonic(c.n, l, mm));
      }
    }
    return SupportFunction(g, h);
  }
  if (type == "random") {
    RandomBodyRecipe recipe;
    recipe.axis_spread = num(b, "axis_spread", recipe.axis_spread);
    recipe.center_spread = num(b, "center_spread", recipe.center_spread);
    recipe.max_degree = static_cast<int>(integer(b, "max_degree", recipe.max_degree));
    recipe.amplitude = num(b, "amplitude", recipe.amplitude);
    return random_convex_body(g, c.seed, recipe, group);
  }
  const std::string path = text(b, "path", "");
  if (path.empty()) schema("file body needs 'path'");
  return SupportFunction(g, read_field_csv(path, *g));
}

// ---- run directory and outputs ----

struct RunContext {
  fs::path dir;
  std::vector<Check> checks;
  ojson extra = ojson::object();
};

void write_text(const fs::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary);
  require(out.good(), ErrorCode::io, "cannot write " + p.string());
  out << s;
}

std::string csv_row(std::initializer_list<std::string> cols) {
  std::string s;
  bool first = true;
  for (const auto& c : cols) {
    if (!first) s += ',';
    s += c;
    first = false;
  }
  return s + "\n";
}

std::string fnum(double v) { return format_number(v); }

void write_trajectory(const fs::path& p, const FlowTrajectory& tr) {
  std::string s = "t,m,M,gamma,volume,F,residual,clamps\n";
  for (const auto& x : tr.samples)
    s += csv_row({fnum(x.t), fnum(x.m), fnum(x.M), fnum(x.gamma), fnum(x.volume), fnum(x.F), fnum(x.residual),
                  std::to_string(x.clamps)});
  write_text(p, s);
}

void run_spectrum(const RunConfig& c, const GridPtr& g, const SupportFunction& h, RunContext& ctx) {
  const int count = static_cast<int>(integer(c.spectrum, "count", 16));
  if (count < 1) schema("spectrum 'count' must be positive");
  const double ctol = num(c.spectrum, "cluster_tol", 0.1);
  auto pair = assemble_linearized(h);
  spectrum(pair, count);
  const auto lab = cluster_labels(pair.eigenvalues, ctol);
  std::string s = "index,eigenvalue,multiplicity_cluster\n";
  for (Index i = 0; i < pair.eigenvalues.size(); ++i)
    s += csv_row({std::to_string(i), fnum(pair.eigenvalues[i]), std::to_string(lab[static_cast<size_t>(i)])});
  write_text(ctx.dir / "spectrum.csv", s);
  write_body((ctx.dir / "body").string(), h, "spectrum body");
  ctx.checks.push_back(check_info("raw_asymmetry", pair.raw_asymmetry, "symmetry of the weighted operator"));
  if (h.max() - h.min() < 1e-14 * h.max()) {
    // Round body of radius r: eigenvalues scale by r^(n-1) relative to the unit sphere.
    const double r = h.max();
    const auto exact = sphere_spectrum(g->dim(), count);
    double rel = 0, zero = 0;
    for (int i = 0; i < count; ++i) {
      const double e = exact[static_cast<size_t>(i)] * std::pow(r, g->dim() - 1);
      const double v = pair.eigenvalues[i];
      if (e == 0)
        zero = std::max(zero, std::abs(v));
      else
        rel = std::max(rel, std::abs(v - e) / std::abs(e));
    }
    ctx.checks.push_back(check_le("sphere_spectrum_rel_error", rel, g->dim() == 1 ? 5e-3 : 1e-2,
                                  "sphere eigenvalues l(l+n-1)-n"));
    ctx.checks.push_back(check_le("sphere_spectrum_zero_cluster", zero, 0.05, "translation kernel"));
  }
}

void run_solve(const RunConfig& c, const GridPtr& g, const SupportFunction& h0,
               const std::shared_ptr<const Symmetrizer>& sym, RunContext& ctx) {
  SolveOptions o = solve_options(c.solver);
  o.symmetrizer = sym;
  const double p = *c.p;
  SolveReport rep;
  try {
    rep = solve_minkowski(p, h0, o);
  } catch (const Error& e) {
    ctx.extra["solve_error"] = e.what();
    throw;
  }
  write_body((ctx.dir / "solution").string(), *rep.h, "solution at p=" + fnum(p));
  write_field_csv((ctx.dir / "residual.csv").string(), *g, rep.residual.field);
  const GeometryReport geo = geometry_report(*rep.h);
  ojson r;
  r["p"] = p;
  r["residual_sup"] = rep.residual.sup;
  r["residual_l2"] = rep.residual.l2;
  r["gamma"] = geo.gamma;
  r["volume"] = geo.volume;
  r["flow_time"] = rep.flow_time;
  r["flow_steps"] = rep.flow_steps;
  r["flow_residual"] = rep.flow_residual;
  r["newton_iterations"] = rep.newton_iterations;
  r["newton_history"] = rep.newton_history;
  r["deflated_directions"] = rep.deflated;
  r["note"] = rep.note;
  write_text(ctx.dir / "solve.json", r.dump(2) + "\n");
  ctx.checks.push_back(check_le("residual_sup", rep.residual.sup, o.required_tol, "det(Hess h + h I) = h^(p-1)"));
  ctx.checks.push_back(check_info("gamma_minus_1", geo.gamma - 1, "roundness of the solution"));
}

void run_flow_cmd(const RunConfig& c, const SupportFunction& h0, const std::shared_ptr<const Symmetrizer>& sym,
                  RunContext& ctx) {
  FlowConfig fc = flow_config(c);
  fc.symmetrizer = sym;
  const SupportFunction start = sym ? sym->apply(h0) : h0;
  FlowTrajectory tr = run_flow(start, fc);
  write_trajectory(ctx.dir / "trajectory.csv", tr);
  if (tr.final) write_body((ctx.dir / "final").string(), *tr.final, "flow state at t=" + fnum(tr.samples.back().t));
  ojson f;
  f["status"] = tr.status;
  f["message"] = tr.message;
  f["steps"] = tr.steps;
  f["total_clamps"] = tr.total_clamps;
  f["envelopes"] = {{"checked", tr.envelopes.checked},
                    {"F_monotone", tr.envelopes.f_monotone},
                    {"worst_F_drop", tr.envelopes.worst_f_drop},
                    {"upper_M", tr.envelopes.upper_M},
                    {"lower_m", tr.envelopes.lower_m},
                    {"M_stays_above_one", tr.envelopes.M_stays_above_one},
                    {"calibrated_M", tr.envelopes.calibrated_M},
                    {"calibrated_m", tr.envelopes.calibrated_m},
                    {"gamma_hat", tr.envelopes.gamma_hat}};
  if (fc.mode == FlowMode::raw && tr.samples.size() >= 10) {
    BlowupConfig bc;
    if (c.flow.contains("horizon")) bc.horizon = num(c.flow, "horizon", 0);
    const BlowupResult b = classify_blowup(tr, bc);
    f["classification"] = {{"type", to_string(b.type)}, {"T", b.T},           {"T_estimated", b.T_estimated},
                           {"L_hat", b.L_hat},          {"U_hat", b.U_hat},   {"beta_pow", b.reference},
                           {"beta", b.beta},            {"note", b.note}};
  }
  ctx.extra["flow"] = f;
  if (tr.envelopes.checked) {
    ctx.checks.push_back(check_le("F_worst_relative_drop", tr.envelopes.worst_f_drop, 1e-8, "F monotone along the flow"));
    if (fc.mode == FlowMode::normalized && !fc.pin_scale) {
      ctx.checks.push_back(check_ge("upper_M_envelope", tr.envelopes.upper_M, 1, "dM/dt <= -M^(-n alpha) + M"));
      ctx.checks.push_back(check_ge("lower_m_envelope", tr.envelopes.lower_m, 1, "dm/dt >= -m^(-n alpha) + m"));
      ctx.checks.push_back(check_ge("M_stays_above_one", tr.envelopes.M_stays_above_one, 1, "M >= 1 persists"));
      if (sym) {
        ctx.checks.push_back(check_info("calibrated_M_envelope", tr.envelopes.calibrated_M, "calibrated with max gamma"));
        ctx.checks.push_back(check_info("calibrated_m_envelope", tr.envelopes.calibrated_m, "calibrated with max gamma"));
      }
    }
  }
  if (tr.status == "aborted") fail(ErrorCode::nonconvex, tr.message);
}

void run_bifurcate(const RunConfig& c, RunContext& ctx) {
  const json& b = c.bifurcation;
  const int k = static_cast<int>(b.contains("k") ? integer(b, "k", 0) : *c.sym_k);
  const double eps = num(b, "epsilon", 0.1);
  std::vector<double> ps;
  if (b.contains("p_values")) {
    const Vec v = vector_of(b["p_values"], "'p_values'");
    ps.assign(v.data(), v.data() + v.size());
  } else {
    ps.push_back(*c.p);
  }
  if (ps.empty()) schema("'p_values' must not be empty");
  BifurcationOptions o;
  o.resolution_theta = c.nt;
  o.resolution_phi = c.np;
  o.solve = solve_options(c.solver);
  const double thr = bifurcation_threshold(c.n, k);
  const auto pts = branch_sweep(c.n, k, eps, ps, o);
  std::string s = "p,gamma,amplitude,residual,nonround\n";
  for (size_t i = 0; i < pts.size(); ++i) {
    const auto& q = pts[i];
    s += csv_row({fnum(q.p), fnum(q.gamma), fnum(q.amplitude), fnum(q.residual), q.nonround ? "1" : "0"});
    write_body((ctx.dir / ("branch_" + std::to_string(i))).string(), *q.h, "branch solution at p=" + fnum(q.p));
    ctx.checks.push_back(check_le("residual_p=" + fnum(q.p), q.residual, o.solve.required_tol,
                                  "det(Hess h + h I) = h^(p-1)"));
  }
  write_text(ctx.dir / "sweep.csv", s);
  ctx.checks.push_back(check_info("threshold_p", thr, "1 - p meets the lowest invariant sphere eigenvalue"));
}

void run_quotient(const RunConfig& c, const SupportFunction& h, RunContext& ctx) {
  const GeometryReport geo = geometry_report(h);
  const QuotientReport q = combined_quotient(h);
  const MomentEllipsoid me = moment_ellipsoid(h);
  const Orthonormality on = orthonormality_check(h);
  ojson r;
  r["volume"] = geo.volume;
  r["m"] = geo.m;
  r["M"] = geo.M;
  r["gamma"] = geo.gamma;
  r["kazdan_warner"] = std::vector<double>(geo.kw.data(), geo.kw.data() + geo.kw.size());
  r["z_perp2"] = q.z_perp2;
  r["grad2"] = q.grad2;
  r["lambda3"] = q.lambda3;
  r["near_round"] = q.near_round;
  if (!q.near_round) {
    r["q"] = q.q;
    r["Q"] = q.Q;
  }
  r["moment_ellipsoid"] = {{"mu", std::vector<double>(me.ellipsoid.mu.data(), me.ellipsoid.mu.data() + me.ellipsoid.mu.size())},
                           {"center", std::vector<double>(me.ellipsoid.center.data(),
                                                          me.ellipsoid.center.data() + me.ellipsoid.center.size())},
                           {"approximate", true}};
  ojson rows = ojson::array();
  for (Index i = 0; i < on.m.rows(); ++i) {
    std::vector<double> row;
    for (Index j = 0; j < on.m.cols(); ++j) row.push_back(on.m(i, j));
    rows.push_back(row);
  }
  r["orthonormality"] = {{"M", rows}, {"expected_diagonal", on.expected}};
  if (c.p && *c.p < 0) {
    const AprioriConstants a = apriori_constants(h, *c.p);
    r["apriori_constants"] = {{"max_vs_min", a.max_vs_min},
                              {"vol_vs_min", a.vol_vs_min},
                              {"min_vs_max", a.min_vs_max},
                              {"vol_vs_max", a.vol_vs_max},
                              {"axis_quotient", a.axis_quotient},
                              {"approximate_axis", true}};
  }
  write_text(ctx.dir / "quotient.json", r.dump(2) + "\n");
  write_body((ctx.dir / "body").string(), h, "quotient body");
  ctx.checks.push_back(check_le("kazdan_warner_relative", geo.kw.norm() / geo.total_dv, 1e-6,
                                "Kazdan-Warner: int x/h dV = 0"));
  if (!q.near_round) ctx.checks.push_back(check_info("Q", q.Q, "lambda3 * |Z_perp|^2 / |grad h|^2"));
}

fs::path output_root() {
  const char* env = std::getenv("LPMLAB_OUTPUT_ROOT");
  return env && *env ? fs::path(env) : fs::path("runs");
}

void write_manifest(const RunContext& ctx, const RunConfig& c, double seconds, const RunOutcome& out) {
  ojson m;
  m["tool"] = "lpmlab";
  m["version"] = LPMLAB_VERSION;
  m["command"] = c.command;
  m["config"] = ojson::parse(c.raw.dump());
  m["wall_clock_seconds"] = seconds;
  m["exit_code"] = out.exit_code;
  m["message"] = out.message;
  m["checks"] = ojson::array();
  for (const auto& k : ctx.checks)
    m["checks"].push_back({{"name", k.name},
                           {"value", k.value},
                           {"tolerance", k.tolerance},
                           {"relation", k.relation},
                           {"passed", k.passed},
                           {"source", k.source}});
  for (auto it = ctx.extra.begin(); it != ctx.extra.end(); ++it) m[it.key()] = it.value();
  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(ctx.dir))
    if (e.is_regular_file() && e.path().filename() != "manifest.json") names.push_back(e.path().filename().string());
  std::sort(names.begin(), names.end());
  m["files"] = ojson::array();
  for (const auto& nm : names)
    m["files"].push_back({{"path", nm},
                          {"sha256", sha256_file((ctx.dir / nm).string())},
                          {"bytes", fs::file_size(ctx.dir / nm)}});
  write_text(ctx.dir / "manifest.json", m.dump(2) + "\n");
}

RunOutcome execute(const json& j) {
  RunOutcome out;
  RunConfig c;
  GridPtr g;
  std::optional<SymmetryGroup> group;
  std::shared_ptr<const Symmetrizer> sym;
  std::optional<SupportFunction> body;
  // Everything that can be rejected from the config alone happens before the
  // run directory exists.
  try {
    c = parse_config(j);
    if (c.command != "verify" && c.command != "bifurcate") {
      try {
        g = Grid::make(c.n, c.nt, c.np);
        if (c.sym_k) {
          group = symmetry_group(good_position_polytope(c.n, *c.sym_k));
          sym = std::make_shared<const Symmetrizer>(g, *group);
        }
      } catch (const Error& e) {
        schema(e.what());
      }
    }
    if (c.command == "bifurcate") {
      try {
        bifurcation_threshold(c.n, c.bifurcation.contains("k") ? static_cast<int>(integer(c.bifurcation, "k", 0))
                                                                : *c.sym_k);
        Grid::make(c.n, c.nt, c.np);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::schema) throw;
        schema(e.what());
      }
    }
    if (c.command == "flow") flow_config(c);
    if (c.command == "solve" || c.command == "bifurcate") solve_options(c.solver);
  } catch (const Error& e) {
    out.exit_code = exit_schema;
    out.message = e.what();
    return out;
  }
  RunContext ctx;
  ctx.dir = c.output_dir.empty() ? output_root() / (c.command + "_" + sha256_hex(j.dump()).substr(0, 8))
                                 : fs::path(c.output_dir);
  std::error_code ec;
  fs::create_directories(ctx.dir, ec);
  if (ec) {
    out.exit_code = exit_numerical;
    out.message = "cannot create run directory " + ctx.dir.string() + ": " + ec.message();
    return out;
  }
  out.run_dir = ctx.dir.string();
  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (c.command == "verify") {
      ctx.checks = run_suite(text(c.verify, "suite", "all"));
      std::string s = "name,value,relation,tolerance,passed,source\n";
      for (const auto& k : ctx.checks)
        s += csv_row({k.name, fnum(k.value), k.relation, fnum(k.tolerance), k.passed ? "1" : "0", k.source});
      write_text(ctx.dir / "checks.csv", s);
    } else if (c.command == "bifurcate") {
      run_bifurcate(c, ctx);
    } else {
      try {
        body = make_body(c, g, group ? &*group : nullptr);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::schema) throw;
        fail(e.code(), std::string("initial body: ") + e.what());
      }
      if (c.command == "spectrum" || c.command == "quotient") {
        const SupportFunction h = sym && text(c.body, "type", "") != "random" ? sym->apply(*body) : *body;
        if (c.command == "spectrum")
          run_spectrum(c, g, h, ctx);
        else
          run_quotient(c, h, ctx);
      } else if (c.command == "solve") {
        run_solve(c, g, *body, sym, ctx);
      } else {
        run_flow_cmd(c, *body, sym, ctx);
      }
    }
    const bool ok = std::all_of(ctx.checks.begin(), ctx.checks.end(), [](const Check& k) { return k.passed; });
    out.exit_code = ok ? exit_ok : exit_check_failed;
    if (!ok) {
      out.message = "failed checks:";
      for (const auto& k : ctx.checks)
        if (!k.passed) out.message += " " + k.name;
    }
  } catch (const Error& e) {
    out.exit_code = e.code() == ErrorCode::schema ? exit_schema : exit_numerical;
    out.message = e.what();
  } catch (const std::exception& e) {
    out.exit_code = exit_numerical;
    out.message = e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out.checks = ctx.checks;
  write_manifest(ctx, c, secs, out);
  return out;
}

// ---- report ----

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::ifstream in(p);
  require(in.good(), ErrorCode::io, "cannot read " + p.string());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cols.push_back(cell);
    rows.push_back(std::move(cols));
  }
  return rows;
}

size_t column(const std::vector<std::string>& header, const std::string& name, const fs::path& p) {
  auto it = std::find(header.begin(), header.end(), name);
  require(it != header.end(), ErrorCode::io, p.string() + " lacks column " + name);
  return static_cast<size_t>(it - header.begin());
}

}  // namespace

RunOutcome run_config_text(const std::string& text_in) {
  json j;
  try {
    j = json::parse(text_in);
  } catch (const json::parse_error& e) {
    RunOutcome out;
    out.exit_code = exit_schema;
    out.message = std::string("config: malformed JSON: ") + e.what();
    return out;
  }
  return execute(j);
}

RunOutcome run_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) {
    RunOutcome out;
    out.exit_code = exit_schema;
    out.message = "config: cannot read " + path;
    return out;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return run_config_text(ss.str());
}

std::vector<std::string> report(const std::string& dir_in) {
  const fs::path dir(dir_in);
  require(fs::is_directory(dir), ErrorCode::io, "not a run directory: " + dir_in);
  require(!fs::is_empty(dir), ErrorCode::io, "empty run directory: " + dir_in);
  require(fs::exists(dir / "manifest.json"), ErrorCode::io, "missing manifest.json in " + dir_in);
  ojson man;
  try {
    std::ifstream in(dir / "manifest.json");
    man = ojson::parse(in);
  } catch (const std::exception& e) {
    fail(ErrorCode::io, std::string("unreadable manifest: ") + e.what());
  }
  std::vector<std::string> written;
  auto emit = [&](const std::string& name, const std::string& body) {
    write_text(dir / name, body);
    written.push_back((dir / name).string());
  };
  if (fs::exists(dir / "trajectory.csv")) {
    const auto rows = read_csv(dir / "trajectory.csv");
    require(!rows.empty(), ErrorCode::io, "empty trajectory.csv");
    const auto& h = rows[0];
    const size_t tc = column(h, "t", dir / "trajectory.csv");
    std::string s = "t,quantity,value\n";
    for (size_t r = 1; r < rows.size(); ++r)
      for (size_t k = 0; k < h.size(); ++k)
        if (k != tc && k < rows[r].size()) s += csv_row({rows[r][tc], h[k], rows[r][k]});
    emit("trajectory_tidy.csv", s);
  }
  if (fs::exists(dir / "spectrum.csv")) {
    const auto rows = read_csv(dir / "spectrum.csv");
    require(!rows.empty(), ErrorCode::io, "empty spectrum.csv");
    const size_t ic = column(rows[0], "index", dir / "spectrum.csv");
    const size_t ec = column(rows[0], "eigenvalue", dir / "spectrum.csv");
    const size_t cc = column(rows[0], "multiplicity_cluster", dir / "spectrum.csv");
    std::string s = "index,cluster,eigenvalue\n";
    for (size_t r = 1; r < rows.size(); ++r) s += csv_row({rows[r][ic], rows[r][cc], rows[r][ec]});
    emit("spectrum_tidy.csv", s);
  }
  if (fs::exists(dir / "sweep.csv")) {
    const auto rows = read_csv(dir / "sweep.csv");
    require(!rows.empty(), ErrorCode::io, "empty sweep.csv");
    const size_t pc = column(rows[0], "p", dir / "sweep.csv");
    const size_t gc = column(rows[0], "gamma", dir / "sweep.csv");
    const size_t rc = column(rows[0], "residual", dir / "sweep.csv");
    std::string s = "p,gamma,residual\n";
    for (size_t r = 1; r < rows.size(); ++r) s += csv_row({rows[r][pc], rows[r][gc], rows[r][rc]});
    emit("branch.csv", s);
  }
  std::string s = "name,value,tolerance,relation,passed\n";
  if (man.contains("checks"))
    for (const auto& k : man["checks"])
      s += csv_row({k.value("name", ""), format_number(k.value("value", 0.0)), format_number(k.value("tolerance", 0.0)),
                    k.value("relation", ""), k.value("passed", false) ? "1" : "0"});
  emit("checks_tidy.csv", s);
  return written;
}

}  // namespace lpm
