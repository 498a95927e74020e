#include "lpmlab/lpmlab.h"

#include "lpmlab/flow.hpp"
#include "lpmlab/functional.hpp"
#include "lpmlab/pipeline.hpp"
#include "lpmlab/random_body.hpp"
#include "lpmlab/spectral.hpp"

#include <cstring>
#include <map>
#include <iostream>

#ifndef LPMLAB_VERSION
#define LPMLAB_VERSION "0.0.0"
#endif

struct lpm_grid {
  lpm::GridPtr g;
};
struct lpm_body {
  lpm::SupportFunction h;
};
struct lpm_group {
  lpm::SymmetryGroup group;
  mutable std::map<const lpm::Grid*, std::shared_ptr<const lpm::Symmetrizer>> cache;
  std::shared_ptr<const lpm::Symmetrizer> symmetrizer(const lpm::GridPtr& g) const {
    auto it = cache.find(g.get());
    if (it != cache.end() && it->second->grid_ptr() == g) return it->second;
    auto s = std::make_shared<const lpm::Symmetrizer>(g, group);
    cache[g.get()] = s;
    return s;
  }
};
struct lpm_trajectory {
  lpm::FlowTrajectory tr;
};

namespace {

thread_local std::string last_error;

lpm_status to_status(lpm::ErrorCode c) {
  using E = lpm::ErrorCode;
  switch (c) {
    case E::invalid_argument: return LPM_ERR_INVALID_ARGUMENT;
    case E::grid_mismatch: return LPM_ERR_GRID_MISMATCH;
    case E::nonconvex: return LPM_ERR_NONCONVEX;
    case E::origin_outside: return LPM_ERR_ORIGIN_OUTSIDE;
    case E::not_converged: return LPM_ERR_NOT_CONVERGED;
    case E::solver_failure: return LPM_ERR_SOLVER;
    case E::precondition: return LPM_ERR_PRECONDITION;
    case E::io: return LPM_ERR_IO;
    case E::schema: return LPM_ERR_SCHEMA;
  }
  return LPM_ERR_INTERNAL;
}

template <class F>
lpm_status guard(F&& f) {
  try {
    last_error.clear();
    f();
    return LPM_OK;
  } catch (const lpm::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::exception& e) {
    last_error = e.what();
    return LPM_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown exception";
    return LPM_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) lpm::fail(lpm::ErrorCode::invalid_argument, std::string("null ") + what);
}

void copy(const lpm::Vec& v, double* out) { std::memcpy(out, v.data(), sizeof(double) * static_cast<size_t>(v.size())); }

void copy_row_major(const lpm::Mat& m, double* out) {
  for (lpm::Index i = 0; i < m.rows(); ++i)
    for (lpm::Index j = 0; j < m.cols(); ++j) out[i * m.cols() + j] = m(i, j);
}

lpm::Vec view(const lpm::Grid& g, const double* f) {
  return Eigen::Map<const lpm::Vec>(f, g.size());
}

lpm_body* wrap(lpm::SupportFunction h) { return new lpm_body{std::move(h)}; }

}  // namespace

extern "C" {

const char* lpm_version(void) { return LPMLAB_VERSION; }
const char* lpm_last_error(void) { return last_error.c_str(); }

const char* lpm_status_name(lpm_status s) {
  switch (s) {
    case LPM_OK: return "ok";
    case LPM_ERR_INVALID_ARGUMENT: return "invalid argument";
    case LPM_ERR_GRID_MISMATCH: return "grid mismatch";
    case LPM_ERR_NONCONVEX: return "nonconvex";
    case LPM_ERR_ORIGIN_OUTSIDE: return "origin outside";
    case LPM_ERR_NOT_CONVERGED: return "not converged";
    case LPM_ERR_SOLVER: return "solver failure";
    case LPM_ERR_PRECONDITION: return "precondition";
    case LPM_ERR_IO: return "io";
    case LPM_ERR_SCHEMA: return "schema";
    case LPM_ERR_CHECK_FAILED: return "check failed";
    case LPM_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

lpm_status lpm_grid_create(int n, int n_theta, int n_phi, lpm_grid** out) {
  return guard([&] {
    need(out, "output");
    *out = new lpm_grid{lpm::Grid::make(n, n_theta, n_phi)};
  });
}

void lpm_grid_free(lpm_grid* g) { delete g; }

lpm_status lpm_grid_info(const lpm_grid* g, int* n, size_t* size) {
  return guard([&] {
    need(g, "grid");
    if (n) *n = g->g->dim();
    if (size) *size = static_cast<size_t>(g->g->size());
  });
}

lpm_status lpm_grid_points(const lpm_grid* g, double* out) {
  return guard([&] {
    need(g, "grid");
    need(out, "output");
    copy_row_major(g->g->points(), out);
  });
}

lpm_status lpm_grid_weights(const lpm_grid* g, double* out) {
  return guard([&] {
    need(g, "grid");
    need(out, "output");
    copy(g->g->weights(), out);
  });
}

lpm_status lpm_integrate(const lpm_grid* g, const double* f, double* out) {
  return guard([&] {
    need(g, "grid");
    need(f, "field");
    need(out, "output");
    *out = lpm::integrate(lpm::ScalarField(g->g, view(*g->g, f)), *g->g);
  });
}

lpm_status lpm_body_create(const lpm_grid* g, const double* h, lpm_body** out) {
  return guard([&] {
    need(g, "grid");
    need(h, "values");
    need(out, "output");
    *out = wrap(lpm::SupportFunction(g->g, view(*g->g, h)));
  });
}

lpm_status lpm_body_ellipsoid(const lpm_grid* g, const double* mu, const double* center, lpm_body** out) {
  return guard([&] {
    need(g, "grid");
    need(mu, "semi-axes");
    need(out, "output");
    const int d = g->g->ambient();
    lpm::Vec m = Eigen::Map<const lpm::Vec>(mu, d);
    lpm::Vec c = center ? lpm::Vec(Eigen::Map<const lpm::Vec>(center, d)) : lpm::Vec::Zero(d);
    *out = wrap(lpm::ellipsoid_support(lpm::make_ellipsoid(m, c), g->g));
  });
}

lpm_status lpm_body_random(const lpm_grid* g, unsigned long long seed, const lpm_group* group, lpm_body** out) {
  return guard([&] {
    need(g, "grid");
    need(out, "output");
    *out = wrap(lpm::random_convex_body(g->g, seed, {}, group ? &group->group : nullptr));
  });
}

void lpm_body_free(lpm_body* b) { delete b; }

lpm_status lpm_body_values(const lpm_body* b, double* out) {
  return guard([&] {
    need(b, "body");
    need(out, "output");
    copy(b->h.values(), out);
  });
}

lpm_status lpm_monge_ampere(const lpm_body* b, double* out) {
  return guard([&] {
    need(b, "body");
    need(out, "output");
    copy(lpm::monge_ampere(b->h), out);
  });
}

lpm_status lpm_lp_residual(const lpm_body* b, double p, double* sup, double* l2) {
  return guard([&] {
    need(b, "body");
    const lpm::Residual r = lpm::lp_residual(b->h, p);
    if (sup) *sup = r.sup;
    if (l2) *l2 = r.l2;
  });
}

lpm_status lpm_geometry_report(const lpm_body* b, lpm_geometry* out) {
  return guard([&] {
    need(b, "body");
    need(out, "output");
    const lpm::GeometryReport r = lpm::geometry_report(b->h);
    *out = lpm_geometry{};
    out->volume = r.volume;
    out->m = r.m;
    out->M = r.M;
    out->gamma = r.gamma;
    for (lpm::Index i = 0; i < r.kw.size(); ++i) out->kazdan_warner[i] = r.kw[i];
    out->total_dv = r.total_dv;
    out->convex = b->h.convex() ? 1 : 0;
    out->min_eig = b->h.min_eig();
  });
}

lpm_status lpm_group_create(int n, int k, size_t cap, lpm_group** out) {
  return guard([&] {
    need(out, "output");
    *out = new lpm_group{lpm::symmetry_group(lpm::good_position_polytope(n, k), cap ? cap : lpm::kGroupCap), {}};
  });
}

void lpm_group_free(lpm_group* g) { delete g; }

lpm_status lpm_group_order(const lpm_group* g, size_t* out) {
  return guard([&] {
    need(g, "group");
    need(out, "output");
    *out = g->group.order();
  });
}

lpm_status lpm_group_element(const lpm_group* g, size_t i, double* out) {
  return guard([&] {
    need(g, "group");
    need(out, "output");
    lpm::require(i < g->group.order(), lpm::ErrorCode::invalid_argument, "group element index out of range");
    copy_row_major(g->group.elements[i], out);
  });
}

lpm_status lpm_symmetrize(const lpm_body* b, const lpm_group* g, lpm_body** out) {
  return guard([&] {
    need(b, "body");
    need(g, "group");
    need(out, "output");
    *out = wrap(g->symmetrizer(b->h.grid_ptr())->apply(b->h));
  });
}

lpm_status lpm_invariance_defect(const lpm_body* b, const lpm_group* g, double* out) {
  return guard([&] {
    need(b, "body");
    need(g, "group");
    need(out, "output");
    *out = lpm::invariance_defect(b->h, g->group);
  });
}

lpm_status lpm_orthonormality(const lpm_body* b, double* matrix, double* expected) {
  return guard([&] {
    need(b, "body");
    const lpm::Orthonormality o = lpm::orthonormality_check(b->h);
    if (matrix) copy_row_major(o.m, matrix);
    if (expected) *expected = o.expected;
  });
}

lpm_status lpm_spectrum(const lpm_body* b, int count, double* out) {
  return guard([&] {
    need(b, "body");
    need(out, "output");
    auto pair = lpm::assemble_linearized(b->h);
    lpm::spectrum(pair, count);
    lpm::require(pair.eigenvalues.size() == count, lpm::ErrorCode::invalid_argument,
                 "requested more eigenvalues than grid nodes");
    copy(pair.eigenvalues, out);
  });
}

lpm_status lpm_lambda3(const lpm_body* b, double* out) {
  return guard([&] {
    need(b, "body");
    need(out, "output");
    *out = lpm::lambda3(b->h);
  });
}

lpm_status lpm_kernel_check(const lpm_body* b, double p, lpm_kernel_report* out) {
  return guard([&] {
    need(b, "body");
    need(out, "output");
    const lpm::KernelCheck k = lpm::kernel_check(b->h, p);
    *out = lpm_kernel_report{k.target, k.tol, k.grid_error, k.defect_deg, k.dimension, k.tangent_dimension};
  });
}

lpm_status lpm_santalo_center(const lpm_body* b, double p, double* center, double* value) {
  return guard([&] {
    need(b, "body");
    const lpm::SantaloResult r = lpm::santalo_center(b->h, p);
    if (center) copy(r.center, center);
    if (value) *value = r.value;
  });
}

lpm_status lpm_bs_functional(const lpm_body* b, double p, int centered, double* out) {
  return guard([&] {
    need(b, "body");
    need(out, "output");
    *out = lpm::bs_functional(b->h, p, centered != 0);
  });
}

lpm_status lpm_combined_quotient(const lpm_body* b, lpm_quotient* out) {
  return guard([&] {
    need(b, "body");
    need(out, "output");
    const lpm::QuotientReport q = lpm::combined_quotient(b->h);
    *out = lpm_quotient{q.z_perp2, q.grad2, q.q, q.lambda3, q.Q, q.near_round ? 1 : 0};
  });
}

void lpm_solve_options_default(lpm_solve_options* o) {
  if (!o) return;
  const lpm::SolveOptions d;
  *o = lpm_solve_options{nullptr, d.flow_tol, d.flow_max_time, d.handoff_tol, d.newton_tol, d.required_tol,
                         d.newton_max_iter};
}

lpm_status lpm_solve_minkowski(const lpm_body* start, double p, const lpm_solve_options* o, lpm_body** out,
                               double* residual) {
  return guard([&] {
    need(start, "start body");
    need(out, "output");
    lpm::SolveOptions so;
    if (o) {
      if (o->group) so.symmetrizer = o->group->symmetrizer(start->h.grid_ptr());
      so.flow_tol = o->flow_tol;
      so.flow_max_time = o->flow_max_time;
      so.handoff_tol = o->handoff_tol;
      so.newton_tol = o->newton_tol;
      so.required_tol = o->required_tol;
      so.newton_max_iter = o->newton_max_iter;
    }
    lpm::SolveReport r = lpm::solve_minkowski(p, start->h, so);
    if (residual) *residual = r.residual.sup;
    *out = wrap(*r.h);
  });
}

void lpm_flow_config_default(lpm_flow_config* c) {
  if (!c) return;
  const lpm::FlowConfig d;
  *c = lpm_flow_config{0, 1, 1, d.c_dt, d.dt_max, d.t_end, d.residual_tol, d.m_stop, d.max_steps, d.sample_every, 0,
                       nullptr};
}

lpm_status lpm_run_flow(const lpm_body* start, const lpm_flow_config* c, lpm_trajectory** out) {
  return guard([&] {
    need(start, "start body");
    need(c, "config");
    need(out, "output");
    lpm::FlowConfig fc;
    fc.alpha = c->alpha;
    fc.mode = c->normalized ? lpm::FlowMode::normalized : lpm::FlowMode::raw;
    fc.stepper = c->heun ? lpm::Stepper::heun : lpm::Stepper::euler;
    fc.c_dt = c->c_dt;
    fc.dt_max = c->dt_max;
    fc.t_end = c->t_end;
    fc.residual_tol = c->residual_tol;
    fc.m_stop = c->m_stop;
    fc.max_steps = c->max_steps;
    fc.sample_every = c->sample_every;
    fc.pin_scale = c->pin_scale != 0;
    if (c->group) fc.symmetrizer = c->group->symmetrizer(start->h.grid_ptr());
    *out = new lpm_trajectory{lpm::run_flow(start->h, fc)};
  });
}

void lpm_trajectory_free(lpm_trajectory* t) { delete t; }

lpm_status lpm_trajectory_size(const lpm_trajectory* t, size_t* out) {
  return guard([&] {
    need(t, "trajectory");
    need(out, "output");
    *out = t->tr.samples.size();
  });
}

lpm_status lpm_trajectory_sample(const lpm_trajectory* t, size_t i, lpm_flow_sample* out) {
  return guard([&] {
    need(t, "trajectory");
    need(out, "output");
    lpm::require(i < t->tr.samples.size(), lpm::ErrorCode::invalid_argument, "sample index out of range");
    const auto& s = t->tr.samples[i];
    *out = lpm_flow_sample{s.t, s.m, s.M, s.gamma, s.volume, s.F, s.residual, s.clamps};
  });
}

const char* lpm_trajectory_status(const lpm_trajectory* t) { return t ? t->tr.status.c_str() : ""; }

lpm_status lpm_trajectory_final(const lpm_trajectory* t, lpm_body** out) {
  return guard([&] {
    need(t, "trajectory");
    need(out, "output");
    lpm::require(t->tr.final.has_value(), lpm::ErrorCode::invalid_argument, "trajectory has no final state");
    *out = wrap(*t->tr.final);
  });
}

lpm_status lpm_classify_blowup(const lpm_trajectory* t, double horizon, lpm_blowup* out) {
  return guard([&] {
    need(t, "trajectory");
    need(out, "output");
    lpm::BlowupConfig bc;
    if (horizon > 0) bc.horizon = horizon;
    const lpm::BlowupResult r = lpm::classify_blowup(t->tr, bc);
    lpm_blowup_type type = LPM_BLOWUP_INCONCLUSIVE;
    if (r.type == lpm::BlowupType::type_I) type = LPM_BLOWUP_I;
    if (r.type == lpm::BlowupType::type_II) type = LPM_BLOWUP_II;
    if (r.type == lpm::BlowupType::type_III) type = LPM_BLOWUP_III;
    *out = lpm_blowup{type, r.T, r.L_hat, r.U_hat, r.reference, r.beta, r.T_estimated ? 1 : 0};
  });
}

lpm_status lpm_run_config(const char* path, int* exit_code, char* run_dir, size_t run_dir_cap) {
  return guard([&] {
    need(path, "config path");
    need(exit_code, "exit code");
    const lpm::RunOutcome r = lpm::run_config_file(path);
    *exit_code = r.exit_code;
    if (run_dir && run_dir_cap > 0) {
      std::strncpy(run_dir, r.run_dir.c_str(), run_dir_cap - 1);
      run_dir[run_dir_cap - 1] = '\0';
    }
    last_error = r.message;
  });
}

lpm_status lpm_verify(const char* suite, int* failures) {
  return guard([&] {
    need(suite, "suite");
    const auto checks = lpm::run_suite(suite);
    lpm::print_checks(std::cout, checks);
    int bad = 0;
    for (const auto& c : checks) bad += c.passed ? 0 : 1;
    if (failures) *failures = bad;
  });
}

lpm_status lpm_report(const char* dir) {
  return guard([&] {
    need(dir, "directory");
    for (const auto& f : lpm::report(dir)) std::cout << f << "\n";
  });
}

}  // extern "C"
