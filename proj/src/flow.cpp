#include "lpmlab/flow.hpp"

#include "lpmlab/spectral.hpp"

#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>

namespace lpm {

namespace {

constexpr double kDetFloor = 1e-12;

struct Velocity {
  Vec v;
  long clamps = 0;
};

Velocity velocity(const SupportFunction& h, const FlowConfig& cfg) {
  Velocity out;
  out.v.resize(h.size());
  const Vec& det = h.det_a();
  for (Index i = 0; i < h.size(); ++i) {
    double d = det[i];
    if (d < kDetFloor) {
      d = kDetFloor;
      ++out.clamps;
    }
    out.v[i] = -std::pow(d, -cfg.alpha);
  }
  if (cfg.mode == FlowMode::normalized) out.v += h.values();
  return out;
}

SupportFunction checked_state(const GridPtr& g, Vec h, const std::string& stage) {
  if (!h.allFinite() || h.minCoeff() <= 0)
    throw ConvexityLost(stage + ": support values left the positive cone", std::move(h));
  SupportFunction s(g, h);
  if (!s.convex())
    throw ConvexityLost(stage + ": convexity lost (min eigenvalue " + fmt_g(s.min_eig()) + ")",
                        std::move(h));
  return s;
}

double power_integral(const SupportFunction& h, double p) {
  return integrate(h.grid(), h.values().array().pow(p).matrix());
}

// h <- c h with int (c h)^p = int (c h) det(c A).
SupportFunction pin_scale(const SupportFunction& h, double p) {
  const int n = h.grid().dim();
  const double ip = power_integral(h, p);
  const double iv = integrate(h.grid(), h.values().cwiseProduct(h.det_a()));
  const double c = std::pow(ip / iv, 1 / (n + 1 - p));
  return SupportFunction(h.grid_ptr(), c * h.values());
}

// h <- h - x.xi, with xi cancelling int x h^(p-1) to first order.
SupportFunction recenter(const SupportFunction& h, double p) {
  const Grid& g = h.grid();
  const Mat& x = g.points();
  const Vec w1 = g.weights().cwiseProduct(h.values().array().pow(p - 1).matrix());
  const Vec w2 = g.weights().cwiseProduct(h.values().array().pow(p - 2).matrix());
  const Mat m = x.transpose() * w2.asDiagonal() * x;
  const Vec xi = m.ldlt().solve(x.transpose() * w1) / (p - 1);
  return SupportFunction(h.grid_ptr(), h.values() - x * xi);
}

FlowSample sample_of(const SupportFunction& h, const FlowConfig& cfg, double t) {
  const int n = h.grid().dim();
  const GeometryReport geo = geometry_report(h);
  FlowSample s;
  s.t = t;
  s.m = geo.m;
  s.M = geo.M;
  s.gamma = geo.gamma;
  s.volume = geo.volume;
  const double p = cfg.p();
  s.F = p != 0 ? geo.volume * std::pow(power_integral(h, p), -(n + 1) / p) : std::nan("");
  s.residual = cfg.mode == FlowMode::normalized ? lp_residual(h, p).sup : std::nan("");
  return s;
}

void check_envelopes(FlowTrajectory& tr, const FlowConfig& cfg) {
  EnvelopeFlags& e = tr.envelopes;
  e.checked = true;
  const auto& s = tr.samples;
  const double na = tr.n * cfg.alpha;
  for (const auto& x : s) e.gamma_hat = std::max(e.gamma_hat, x.gamma);
  bool above = false;
  for (size_t i = 1; i < s.size(); ++i) {
    const FlowSample &a = s[i - 1], &b = s[i];
    const double dt = b.t - a.t;
    if (std::isfinite(a.F) && std::isfinite(b.F)) {
      const double drop = (a.F - b.F) / a.F;
      e.worst_f_drop = std::max(e.worst_f_drop, drop);
      if (drop > 1e-8) e.f_monotone = false;
    }
    if (a.M >= 1) above = true;
    if (above && b.M < 1 - 10 * b.dt) e.M_stays_above_one = false;
    if (tr.mode != FlowMode::normalized || dt <= 0) continue;
    const double dM = (b.M - a.M) / dt, dm = (b.m - a.m) / dt;
    const double Mm = 0.5 * (a.M + b.M), mm = 0.5 * (a.m + b.m);
    const double rM = -std::pow(Mm, -na) + Mm, rm = -std::pow(mm, -na) + mm;
    const double tolM = 10 * dt * std::max({1.0, std::abs(rM), std::abs(dM)});
    const double tolm = 10 * dt * std::max({1.0, std::abs(rm), std::abs(dm)});
    if (dM > rM + tolM) e.upper_M = false;
    if (dm < rm - tolm) e.lower_m = false;
    const double g = e.gamma_hat;
    if (dM < -std::pow(g, na) * std::pow(Mm, -na) + Mm - tolM) e.calibrated_M = false;
    if (dm > -std::pow(g, -na) * std::pow(mm, -na) + mm + tolm) e.calibrated_m = false;
  }
}

}  // namespace

void FlowConfig::validate() const {
  require(alpha > 0 && std::isfinite(alpha), ErrorCode::invalid_argument, "flow exponent alpha must be positive");
  require(c_dt > 0 && c_dt <= 0.5, ErrorCode::invalid_argument, "step safety factor must lie in (0, 0.5]");
  require(dt_max > 0, ErrorCode::invalid_argument, "dt_max must be positive");
  require(stability > 0, ErrorCode::invalid_argument, "stability factor must be positive");
  require(max_steps > 0, ErrorCode::invalid_argument, "step cap must be positive");
  require(sample_every >= 1 && symmetrize_every >= 1, ErrorCode::invalid_argument,
          "sampling and symmetrization periods must be positive");
}

StepResult flow_step(const SupportFunction& h, const FlowConfig& cfg, double dt, bool project) {
  require(dt > 0, ErrorCode::invalid_argument, "time step must be positive");
  require(h.convex(), ErrorCode::nonconvex, "flow step needs a convex body");
  const GridPtr& g = h.grid_ptr();
  Velocity v0 = velocity(h, cfg);
  StepResult out{h, v0.clamps};
  Vec next = h.values() + dt * v0.v;
  if (cfg.stepper == Stepper::heun) {
    const SupportFunction mid = checked_state(g, next, "predictor");
    const Velocity v1 = velocity(mid, cfg);
    out.clamps += v1.clamps;
    next = h.values() + 0.5 * dt * (v0.v + v1.v);
  }
  if (project && cfg.symmetrizer) next = cfg.symmetrizer->apply(next);
  out.h = checked_state(g, std::move(next), "update");
  return out;
}

double flow_dt(const SupportFunction& h, const FlowConfig& cfg) {
  const Grid& g = h.grid();
  const auto& o = g.ops();
  const Vec& det = h.det_a();
  double proxy = std::numeric_limits<double>::infinity();
  double rho = 0;
  for (Index i = 0; i < h.size(); ++i) {
    const double d = std::max(det[i], kDetFloor);
    proxy = std::min(proxy, h.values()[i] * std::pow(d, cfg.alpha));
    // Row bound of alpha detA^(-alpha-1) U^{ij}(d_ij + delta_ij).
    double row = g.dim() == 1 ? o.abs_h11[i] + 1
                              : std::abs(h.a22()[i]) * (o.abs_h11[i] + 1) + 2 * std::abs(h.a12()[i]) * o.abs_h12[i] +
                                    std::abs(h.a11()[i]) * (o.abs_h22[i] + 1);
    rho = std::max(rho, cfg.alpha * std::pow(d, -cfg.alpha - 1) * row);
  }
  if (cfg.mode == FlowMode::normalized) rho += 1;
  return std::min({cfg.dt_max, cfg.c_dt * proxy, cfg.stability / rho});
}

FlowTrajectory run_flow(const SupportFunction& h0, const FlowConfig& cfg) {
  cfg.validate();
  require(h0.convex(), ErrorCode::nonconvex, "flow needs a convex initial body");
  const double p = cfg.p();
  FlowTrajectory tr;
  tr.n = h0.grid().dim();
  tr.alpha = cfg.alpha;
  tr.mode = cfg.mode;
  SupportFunction h = h0;
  double t = 0;
  tr.samples.push_back(sample_of(h, cfg, t));
  long since_sample = 0;
  for (;;) {
    const double res = cfg.mode == FlowMode::normalized ? lp_residual(h, p).sup : 0;
    if (cfg.mode == FlowMode::raw && h.min() < cfg.m_stop) {
      tr.status = "extinct";
      break;
    }
    if (cfg.mode == FlowMode::normalized) {
      if (res < cfg.residual_tol) {
        tr.status = "converged";
        break;
      }
      if (h.min() < cfg.m_floor) {
        tr.status = "collapsed";
        break;
      }
      if (h.max() > cfg.M_ceiling) {
        tr.status = "expanded";
        break;
      }
    }
    if (t >= cfg.t_end * (1 - 1e-14)) {
      tr.status = "horizon";
      break;
    }
    if (tr.steps >= cfg.max_steps) {
      tr.status = "step_cap";
      break;
    }
    double dt = std::min(flow_dt(h, cfg), cfg.t_end - t);
    std::optional<StepResult> step;
    for (int attempt = 0; attempt <= 3; ++attempt) {
      try {
        const bool project = cfg.symmetrizer && (tr.steps + 1) % cfg.symmetrize_every == 0;
        step = flow_step(h, cfg, dt, project);
        break;
      } catch (const ConvexityLost& e) {
        tr.message = e.what();
        dt *= 0.5;
      }
    }
    if (!step) {
      tr.status = "aborted";
      tr.message = "convexity lost after 3 step halvings at t=" + fmt_g(t) + ": " + tr.message;
      break;
    }
    tr.message.clear();
    h = std::move(step->h);
    if (cfg.pin_scale) h = pin_scale(h, p);
    if (cfg.recenter) h = recenter(h, p);
    t += dt;
    ++tr.steps;
    tr.total_clamps += step->clamps;
    ++since_sample;
    if (since_sample >= cfg.sample_every) {
      FlowSample s = sample_of(h, cfg, t);
      s.clamps = step->clamps;
      s.dt = dt;
      tr.samples.push_back(s);
      since_sample = 0;
    }
  }
  if (tr.samples.back().t < t) {
    FlowSample s = sample_of(h, cfg, t);
    s.dt = t - tr.samples.back().t;
    tr.samples.push_back(s);
  }
  tr.final = h;
  if (!cfg.recenter) {
    check_envelopes(tr, cfg);
    // Scale pinning and re-projection break the ODE comparison; only F survives.
    if (cfg.pin_scale || tr.mode != FlowMode::normalized) {
      tr.envelopes.upper_M = tr.envelopes.lower_m = true;
      tr.envelopes.calibrated_M = tr.envelopes.calibrated_m = true;
      tr.envelopes.M_stays_above_one = tr.mode != FlowMode::normalized || tr.envelopes.M_stays_above_one;
    }
    if (!cfg.symmetrizer) tr.envelopes.calibrated_M = tr.envelopes.calibrated_m = true;
  }
  return tr;
}

std::string to_string(BlowupType t) {
  switch (t) {
    case BlowupType::type_I: return "I";
    case BlowupType::type_II: return "II";
    case BlowupType::type_III: return "III";
    default: return "inconclusive";
  }
}

BlowupResult classify_blowup(const FlowTrajectory& tr, const BlowupConfig& cfg) {
  require(tr.mode == FlowMode::raw, ErrorCode::invalid_argument, "blow-up classification needs a raw flow");
  const auto& s = tr.samples;
  require(s.size() >= 10, ErrorCode::invalid_argument, "trajectory too short for blow-up classification");
  require(cfg.window_fraction > 0 && cfg.window_fraction <= 1, ErrorCode::invalid_argument,
          "window fraction must lie in (0, 1]");
  BlowupResult r;
  r.beta = 1 / (1 + tr.n * tr.alpha);
  r.reference = std::pow(r.beta, -r.beta);
  // Window: final fraction of elapsed time (adaptive dt packs samples near extinction), at least 5 samples.
  auto window_start = [&](double fraction) {
    const double t_cut = s.back().t - fraction * (s.back().t - s.front().t);
    size_t first = s.size() - 5;
    while (first > 0 && s[first - 1].t >= t_cut) --first;
    return first;
  };
  size_t first = window_start(cfg.window_fraction);
  double t_resolution = 0;  // uncertainty of the extrapolated T
  if (cfg.horizon) {
    r.T = *cfg.horizon;
    r.T_estimated = false;
  } else {
    // Least-squares line through (t, M^(1/beta)); the window is halved until the
    // fit is linear to 1e-3 of its range and extrapolates past the last sample.
    bool consistent = false;
    for (double fraction = cfg.window_fraction;; fraction *= 0.5) {
      first = window_start(fraction);
      double st = 0, sy = 0, stt = 0, sty = 0, y_max = 0;
      const double cnt = static_cast<double>(s.size() - first);
      for (size_t i = first; i < s.size(); ++i) {
        const double y = std::pow(s[i].M, 1 / r.beta);
        st += s[i].t;
        sy += y;
        stt += s[i].t * s[i].t;
        sty += s[i].t * y;
        y_max = std::max(y_max, y);
      }
      const double den = cnt * stt - st * st;
      const double slope = den != 0 ? (cnt * sty - st * sy) / den : 0;
      const double icpt = (sy - slope * st) / cnt;
      double misfit = 0;
      for (size_t i = first; i < s.size(); ++i)
        misfit = std::max(misfit, std::abs(std::pow(s[i].M, 1 / r.beta) - (icpt + slope * s[i].t)));
      if (slope < 0) {
        r.T = -icpt / slope;
        if (r.T > s.back().t && misfit <= 1e-3 * y_max) {
          t_resolution = misfit / -slope;
          consistent = true;
          break;
        }
      }
      if (s.size() - first <= 5) break;
    }
    if (!consistent) {
      r.note = "no window gives a consistent linear extrapolation of M^(1/beta)";
      return r;
    }
  }
  r.L_hat = std::numeric_limits<double>::infinity();
  int used = 0;
  for (size_t i = first; i < s.size(); ++i) {
    // Samples closer to T than its uncertainty carry no rate information.
    const double gap = r.T - s[i].t;
    if (gap <= 1e3 * t_resolution) continue;
    const double f = std::pow(gap, -r.beta);
    r.L_hat = std::min(r.L_hat, f * s[i].m);
    r.U_hat = std::max(r.U_hat, f * s[i].M);
    ++used;
  }
  if (used < 3) {
    r.note = "fewer than 3 window samples precede T";
    return r;
  }
  if (r.U_hat > cfg.type2_factor * r.reference)
    r.type = BlowupType::type_II;
  else if (r.L_hat < cfg.type3_factor * r.reference)
    r.type = BlowupType::type_III;
  else
    r.type = BlowupType::type_I;
  return r;
}

SolveReport newton_minkowski(double p, const SupportFunction& h0, const SolveOptions& opts) {
  require(p < 1, ErrorCode::invalid_argument, "solver needs p < 1");
  require(h0.convex(), ErrorCode::nonconvex, "solver needs a convex start");
  const GridPtr& g = h0.grid_ptr();
  const Index N = g->size();
  const Vec& w = g->weights();
  SupportFunction h = h0;
  SolveReport rep;
  Residual res = lp_residual(h, p);
  for (int it = 0; it < opts.newton_max_iter; ++it) {
    rep.newton_history.push_back(res.sup);
    if (res.sup < opts.newton_tol) break;
    SpMat jac = linearized_operator(h);
    const Vec shift = (p - 1) * h.values().array().pow(p - 2).matrix();
    for (Index i = 0; i < N; ++i) jac.coeffRef(i, i) -= shift[i];
    const double gamma = h.max() / h.min();
    std::vector<Vec> tan;
    if (gamma - 1 > 1e-3) tan = rotational_tangent_basis(h);
    const Index k = static_cast<Index>(tan.size());
    rep.deflated = static_cast<int>(k);
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<size_t>(jac.nonZeros() + 2 * k * N));
    for (Index i = 0; i < N; ++i)
      for (SpMat::InnerIterator itr(jac, i); itr; ++itr) trips.emplace_back(i, itr.col(), itr.value());
    for (Index c = 0; c < k; ++c) {
      const Vec& f = tan[static_cast<size_t>(c)];
      const double s = 1 / std::sqrt(f.cwiseAbs2().dot(w));
      for (Index i = 0; i < N; ++i) {
        trips.emplace_back(i, N + c, s * f[i]);
        trips.emplace_back(N + c, i, s * f[i] * w[i]);
      }
    }
    Eigen::SparseMatrix<double> big(N + k, N + k);
    big.setFromTriplets(trips.begin(), trips.end());
    big.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(big);
    require(lu.info() == Eigen::Success, ErrorCode::solver_failure, "Newton system factorization failed");
    Vec rhs = Vec::Zero(N + k);
    rhs.head(N) = -res.field;
    const Vec sol = lu.solve(rhs);
    require(sol.allFinite(), ErrorCode::solver_failure, "Newton system solve produced non-finite values");
    const Vec delta = sol.head(N);
    bool moved = false;
    double step = 1;
    for (int ls = 0; ls < 30; ++ls, step *= 0.5) {
      Vec trial = h.values() + step * delta;
      if (!trial.allFinite() || trial.minCoeff() <= 0) continue;
      if (opts.symmetrizer && res.sup > 1e-6) trial = opts.symmetrizer->apply(trial);
      SupportFunction cand(g, trial);
      if (!cand.convex()) continue;
      Residual r2 = lp_residual(cand, p);
      if (r2.sup < res.sup) {
        h = std::move(cand);
        res = std::move(r2);
        moved = true;
        break;
      }
    }
    ++rep.newton_iterations;
    if (!moved) {
      rep.note = "Newton line search stalled";
      break;
    }
  }
  if (rep.newton_history.back() != res.sup) rep.newton_history.push_back(res.sup);
  rep.residual = res;
  rep.converged = res.sup < opts.required_tol;
  rep.h = h;
  return rep;
}

SolveReport solve_minkowski(double p, const SupportFunction& h0, const SolveOptions& opts) {
  require(p < 1, ErrorCode::invalid_argument, "solver needs p < 1");
  require(h0.convex(), ErrorCode::nonconvex, "solver needs a convex start");
  const int n = h0.grid().dim();
  require(std::abs(p + n + 1) > 1e-12, ErrorCode::invalid_argument,
          "Newton stage is rank-deficient at p = -n-1 (affine kernel)");
  if (opts.symmetrizer)
    require(opts.symmetrizer->grid_ptr() == h0.grid_ptr(), ErrorCode::grid_mismatch,
            "symmetrizer built on a different grid");
  SupportFunction h = opts.symmetrizer ? opts.symmetrizer->apply(h0) : h0;
  SolveReport rep;
  double res = lp_residual(h, p).sup;
  if (!opts.skip_flow) {
    FlowConfig fc;
    fc.alpha = 1 / (1 - p);
    fc.mode = FlowMode::normalized;
    fc.c_dt = opts.c_dt;
    fc.dt_max = opts.dt_max;
    fc.residual_tol = opts.flow_tol;
    fc.sample_every = 1000000;
    fc.symmetrizer = opts.symmetrizer;
    fc.pin_scale = true;
    fc.recenter = opts.recenter.value_or(opts.symmetrizer == nullptr);
    fc.max_steps = opts.flow_chunk_steps;
    const double res0 = res;
    // Stalled: no new best below 0.9x the previous best for kPatience chunks
    // (the residual may rise transiently while the flow leaves the sphere).
    constexpr int kPatience = 4;
    double best = std::numeric_limits<double>::infinity();
    int idle = 0;
    while (rep.flow_time < opts.flow_max_time && res >= opts.flow_tol) {
      fc.t_end = std::min(opts.flow_chunk, opts.flow_max_time - rep.flow_time);
      FlowTrajectory tr = run_flow(h, fc);
      if (tr.status == "aborted") fail(ErrorCode::nonconvex, "flow stage: " + tr.message);
      h = *tr.final;
      rep.flow_time += tr.samples.back().t;
      rep.flow_steps += tr.steps;
      res = lp_residual(h, p).sup;
      // Low harmonics with l(l+n-1) < 1-p+n grow under the flow unless a symmetry group removes them.
      require(res < 10 * std::min(best, res0), ErrorCode::not_converged,
              "flow stage diverging (residual " + fmt_g(res) + ", gamma " + fmt_g(geometry_report(h).gamma) +
                  "); unstable low modes at this p need a symmetry group");
      if (res < 0.9 * best) {
        best = res;
        idle = 0;
      } else if (++idle >= kPatience) {
        rep.note = "flow stalled";
        break;
      }
    }
    rep.flow_residual = res;
    require(res < opts.handoff_tol, ErrorCode::not_converged,
            "flow stage stalled at residual " + fmt_g(res) +
                (res > res0 ? "; unstable low modes at this p need a symmetry group" : ""));
  }
  SolveReport nr = newton_minkowski(p, h, opts);
  nr.flow_time = rep.flow_time;
  nr.flow_steps = rep.flow_steps;
  nr.flow_residual = opts.skip_flow ? res : rep.flow_residual;
  if (!rep.note.empty()) nr.note = rep.note + (nr.note.empty() ? "" : "; " + nr.note);
  require(nr.converged, ErrorCode::not_converged,
          "Newton stage ended at residual " + fmt_g(nr.residual.sup) + " (required " +
              fmt_g(opts.required_tol) + ")");
  return nr;
}

Vec symmetric_perturbation(const GridPtr& g, const Polytope& poly) {
  require(poly.n == g->dim(), ErrorCode::invalid_argument, "polytope dimension does not match grid");
  const Mat& x = g->points();
  Vec f(g->size());
  if (g->dim() == 1) {
    for (Index i = 0; i < g->size(); ++i) f[i] = std::cos(poly.k * std::atan2(x(i, 1), x(i, 0)));
  } else {
    // Power sum of vertex projections at the lowest invariant degree.
    const int deg = poly.k == 4 ? 3 : (poly.k == 6 || poly.k == 8) ? 4 : 6;
    f.setZero();
    for (const Vec& v : poly.vertices) f += (x * v.normalized()).array().pow(deg).matrix();
  }
  f.array() -= integrate(*g, f) / g->weights().sum();
  return f / f.cwiseAbs().maxCoeff();
}

double bifurcation_threshold(int n, int k) {
  if (n == 1) {
    require(k >= 3, ErrorCode::invalid_argument, "planar bifurcation needs k >= 3");
    return 2.0 - static_cast<double>(k) * k;
  }
  require(n == 2, ErrorCode::invalid_argument, "bifurcation search supports n = 1, 2");
  int l = 0;
  switch (k) {
    case 4: l = 3; break;
    case 6:
    case 8: l = 4; break;
    case 12:
    case 20: l = 6; break;
    default: fail(ErrorCode::invalid_argument, "no regular polytope with " + std::to_string(k) + " vertices");
  }
  return 1.0 - (static_cast<double>(l) * (l + 1) - 2);
}

namespace {

struct BranchSetup {
  GridPtr grid;
  Polytope poly;
  std::shared_ptr<const Symmetrizer> sym;
  SupportFunction start;
};

BranchSetup branch_setup(int n, int k, double eps0, const BifurcationOptions& opts) {
  require(eps0 > 0 && eps0 <= 0.3, ErrorCode::invalid_argument, "perturbation size must lie in (0, 0.3]");
  require(n == 1 ? k >= 3 : n == 2, ErrorCode::invalid_argument, "bifurcation search needs n=1 with k>=3 or n=2");
  const int nt = opts.resolution_theta > 0 ? opts.resolution_theta : (n == 1 ? 192 : 24);
  const int np = n == 1 ? 0 : (opts.resolution_phi > 0 ? opts.resolution_phi : 2 * nt);
  GridPtr g = Grid::make(n, nt, np);
  Polytope poly = good_position_polytope(n, k);
  auto sym = std::make_shared<const Symmetrizer>(g, symmetry_group(poly));
  Vec h0 = Vec::Ones(g->size()) + eps0 * symmetric_perturbation(g, poly);
  return {g, poly, sym, SupportFunction(g, h0)};
}

BranchPoint branch_point(double p, const SupportFunction& start, const BifurcationOptions& opts,
                         const std::shared_ptr<const Symmetrizer>& sym) {
  SolveOptions so = opts.solve;
  so.symmetrizer = sym;
  SolveReport rep = solve_minkowski(p, start, so);
  BranchPoint bp;
  bp.p = p;
  bp.converged = rep.converged;
  bp.residual = rep.residual.sup;
  bp.gamma = rep.h->max() / rep.h->min();
  bp.amplitude = bp.gamma - 1;
  bp.nonround = bp.amplitude > 1e-3;
  bp.h = rep.h;
  return bp;
}

}  // namespace

BranchPoint bifurcation_search(int n, double p, int k, double eps0, const BifurcationOptions& opts) {
  BranchSetup s = branch_setup(n, k, eps0, opts);
  return branch_point(p, s.start, opts, s.sym);
}

std::vector<BranchPoint> branch_sweep(int n, int k, double eps0, const std::vector<double>& ps,
                                      const BifurcationOptions& opts) {
  BranchSetup s = branch_setup(n, k, eps0, opts);
  std::vector<BranchPoint> out;
  for (double p : ps) {
    const bool cont = !out.empty() && out.back().nonround;
    out.push_back(branch_point(p, cont ? *out.back().h : s.start, opts, s.sym));
  }
  return out;
}

}  // namespace lpm
