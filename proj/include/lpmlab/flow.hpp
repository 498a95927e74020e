#pragma once

#include "lpmlab/body.hpp"
#include "lpmlab/symmetry.hpp"

#include <limits>
#include <optional>
#include <vector>

namespace lpm {

enum class FlowMode { raw, normalized };
enum class Stepper { euler, heun };

struct FlowConfig {
  double alpha = 0;
  FlowMode mode = FlowMode::normalized;
  Stepper stepper = Stepper::heun;
  double c_dt = 0.1;       // dt <= c_dt * min(h / G^alpha)
  double dt_max = 1e-2;
  double stability = 1.0;  // dt <= stability / (Gershgorin bound of the linearized velocity)
  long max_steps = 1000000;
  double t_end = std::numeric_limits<double>::infinity();
  double residual_tol = 0;  // normalized mode: stop when sup residual falls below
  double m_stop = 1e-6;     // raw mode: extinction detector
  double m_floor = 1e-8;    // normalized mode: collapse detector
  double M_ceiling = 1e8;   // normalized mode: expansion detector
  int sample_every = 1;
  std::shared_ptr<const Symmetrizer> symmetrizer;
  int symmetrize_every = 1;
  // Steady-state helpers (off for pure flows): rescale onto the normalization
  // int h^p = int h detA each step, and cancel the drift of the center.
  bool pin_scale = false;
  bool recenter = false;

  double p() const { return 1 - 1 / alpha; }
  double beta(int n) const { return 1 / (1 + n * alpha); }
  void validate() const;
};

class ConvexityLost : public Error {
 public:
  ConvexityLost(const std::string& what, Vec state) : Error(ErrorCode::nonconvex, what), state_(std::move(state)) {}
  const Vec& state() const { return state_; }

 private:
  Vec state_;
};

struct StepResult {
  SupportFunction h;
  long clamps = 0;
};

// One explicit step; throws ConvexityLost when the update leaves the convex cone.
StepResult flow_step(const SupportFunction& h, const FlowConfig& cfg, double dt, bool project = true);

// Largest dt allowed by the controller at h.
double flow_dt(const SupportFunction& h, const FlowConfig& cfg);

struct FlowSample {
  double t = 0, m = 0, M = 0, gamma = 0, volume = 0, F = 0, residual = 0;
  long clamps = 0;
  double dt = 0;
};

struct EnvelopeFlags {
  bool checked = false;
  bool f_monotone = true;
  double worst_f_drop = 0;  // max relative decrease of F between samples
  bool upper_M = true;      // dM/dt <= -M^(-n alpha) + M + tol
  bool lower_m = true;      // dm/dt >= -m^(-n alpha) + m - tol
  bool M_stays_above_one = true;
  bool calibrated_M = true; // dM/dt >= -g^(n alpha) M^(-n alpha) + M - tol, g = max gamma
  bool calibrated_m = true; // dm/dt <= -g^(-n alpha) m^(-n alpha) + m + tol
  double gamma_hat = 1;
};

struct FlowTrajectory {
  int n = 0;
  double alpha = 0;
  FlowMode mode = FlowMode::normalized;
  std::vector<FlowSample> samples;
  std::optional<SupportFunction> final;
  long steps = 0;
  long total_clamps = 0;
  std::string status;  // converged | extinct | horizon | step_cap | collapsed | expanded | aborted
  std::string message;
  EnvelopeFlags envelopes;
};

FlowTrajectory run_flow(const SupportFunction& h0, const FlowConfig& cfg);

enum class BlowupType { type_I, type_II, type_III, inconclusive };
std::string to_string(BlowupType t);

struct BlowupConfig {
  double window_fraction = 0.1;  // share of elapsed time used for the fit (halved until consistent)
  double type2_factor = 10;
  double type3_factor = 0.1;
  std::optional<double> horizon;  // prescribed T; otherwise extrapolated
};

struct BlowupResult {
  BlowupType type = BlowupType::inconclusive;
  double T = 0;
  bool T_estimated = true;
  double L_hat = 0, U_hat = 0;
  double reference = 0;  // beta^(-beta)
  double beta = 0;
  std::string note;
};

BlowupResult classify_blowup(const FlowTrajectory& traj, const BlowupConfig& cfg = {});

struct SolveOptions {
  std::shared_ptr<const Symmetrizer> symmetrizer;
  double flow_tol = 1e-4;
  double flow_max_time = 400;
  double flow_chunk = 5;      // stall is judged per chunk of flow time
  long flow_chunk_steps = 20000;  // step budget per chunk
  double c_dt = 0.1;
  double dt_max = 0.05;
  double handoff_tol = 5e-2;  // Newton starts from a stalled flow below this residual
  double newton_tol = 1e-11;
  double required_tol = 1e-8;
  int newton_max_iter = 60;
  std::optional<bool> recenter;  // default: only without a symmetry group
  bool skip_flow = false;
};

struct SolveReport {
  std::optional<SupportFunction> h;
  Residual residual;
  double flow_time = 0;
  long flow_steps = 0;
  double flow_residual = 0;
  int newton_iterations = 0;
  std::vector<double> newton_history;
  int deflated = 0;  // rotational directions bordered out of the Newton system
  bool converged = false;
  std::string note;
};

SolveReport solve_minkowski(double p, const SupportFunction& h0, const SolveOptions& opts = {});

// Newton stage alone, usable from any close start.
SolveReport newton_minkowski(double p, const SupportFunction& h0, const SolveOptions& opts = {});

struct BranchPoint {
  double p = 0;
  bool nonround = false;
  double gamma = 1;
  double amplitude = 0;  // gamma - 1
  double residual = 0;
  bool converged = false;
  std::optional<SupportFunction> h;
};

struct BifurcationOptions {
  int resolution_theta = 0;  // 0: 192 for n=1, 24 for n=2
  int resolution_phi = 0;    // n=2 only, 0: 2 * theta
  SolveOptions solve;
};

// Lowest-degree invariant direction of the group (mean removed, max |f| = 1).
Vec symmetric_perturbation(const GridPtr& g, const Polytope& poly);

// Exponent where 1 - p meets the sphere eigenvalue of the lowest invariant degree.
double bifurcation_threshold(int n, int k);

BranchPoint bifurcation_search(int n, double p, int k, double eps0, const BifurcationOptions& opts = {});

// Continuation over p values in the given order, each solve starting from
// the previous solution (the first one from the perturbed sphere).
std::vector<BranchPoint> branch_sweep(int n, int k, double eps0, const std::vector<double>& ps,
                                      const BifurcationOptions& opts = {});

}  // namespace lpm
