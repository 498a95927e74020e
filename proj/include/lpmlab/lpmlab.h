#ifndef LPMLAB_H
#define LPMLAB_H

#include <stddef.h>

#if defined(LPM_BUILDING_LIBRARY)
#define LPM_API __attribute__((visibility("default")))
#else
#define LPM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct lpm_grid lpm_grid;
typedef struct lpm_body lpm_body;
typedef struct lpm_group lpm_group;
typedef struct lpm_trajectory lpm_trajectory;

typedef enum lpm_status {
  LPM_OK = 0,
  LPM_ERR_INVALID_ARGUMENT = 1,
  LPM_ERR_GRID_MISMATCH = 2,
  LPM_ERR_NONCONVEX = 3,
  LPM_ERR_ORIGIN_OUTSIDE = 4,
  LPM_ERR_NOT_CONVERGED = 5,
  LPM_ERR_SOLVER = 6,
  LPM_ERR_PRECONDITION = 7,
  LPM_ERR_IO = 8,
  LPM_ERR_SCHEMA = 9,
  LPM_ERR_CHECK_FAILED = 10,
  LPM_ERR_INTERNAL = 11
} lpm_status;

/* Version string "major.minor.patch". */
LPM_API const char* lpm_version(void);
/* Message of the last failing call on this thread ("" if none). */
LPM_API const char* lpm_last_error(void);
LPM_API const char* lpm_status_name(lpm_status s);

/* ---- grids ---- */
/* n = 1: n_theta nodes on the circle (n_phi ignored); n = 2: n_theta x n_phi. */
LPM_API lpm_status lpm_grid_create(int n, int n_theta, int n_phi, lpm_grid** out);
LPM_API void lpm_grid_free(lpm_grid* g);
LPM_API lpm_status lpm_grid_info(const lpm_grid* g, int* n, size_t* size);
/* Row-major size x (n+1) node coordinates. */
LPM_API lpm_status lpm_grid_points(const lpm_grid* g, double* out);
LPM_API lpm_status lpm_grid_weights(const lpm_grid* g, double* out);
LPM_API lpm_status lpm_integrate(const lpm_grid* g, const double* f, double* out);

/* ---- bodies ---- */
LPM_API lpm_status lpm_body_create(const lpm_grid* g, const double* h, lpm_body** out);
LPM_API lpm_status lpm_body_ellipsoid(const lpm_grid* g, const double* mu, const double* center, lpm_body** out);
LPM_API lpm_status lpm_body_random(const lpm_grid* g, unsigned long long seed, const lpm_group* group,
                                   lpm_body** out);
LPM_API void lpm_body_free(lpm_body* b);
LPM_API lpm_status lpm_body_values(const lpm_body* b, double* out);
LPM_API lpm_status lpm_monge_ampere(const lpm_body* b, double* out);
LPM_API lpm_status lpm_lp_residual(const lpm_body* b, double p, double* sup, double* l2);

typedef struct lpm_geometry {
  double volume, m, M, gamma;
  double kazdan_warner[3]; /* first n+1 entries used */
  double total_dv;
  int convex;
  double min_eig;
} lpm_geometry;
LPM_API lpm_status lpm_geometry_report(const lpm_body* b, lpm_geometry* out);

/* ---- symmetry ---- */
/* Group of the regular polytope with k vertices in R^(n+1); cap = 0 uses the default cap. */
LPM_API lpm_status lpm_group_create(int n, int k, size_t cap, lpm_group** out);
LPM_API void lpm_group_free(lpm_group* g);
LPM_API lpm_status lpm_group_order(const lpm_group* g, size_t* out);
/* Row-major (n+1) x (n+1) matrix of element i. */
LPM_API lpm_status lpm_group_element(const lpm_group* g, size_t i, double* out);
LPM_API lpm_status lpm_symmetrize(const lpm_body* b, const lpm_group* g, lpm_body** out);
LPM_API lpm_status lpm_invariance_defect(const lpm_body* b, const lpm_group* g, double* out);
/* Row-major (n+1) x (n+1) matrix int x_a x_b h^-2 dV and the expected diagonal. */
LPM_API lpm_status lpm_orthonormality(const lpm_body* b, double* matrix, double* expected);

/* ---- spectral ---- */
/* Smallest `count` eigenvalues of the linearized operator, ascending. */
LPM_API lpm_status lpm_spectrum(const lpm_body* b, int count, double* out);
LPM_API lpm_status lpm_lambda3(const lpm_body* b, double* out);

typedef struct lpm_kernel_report {
  double target, tol, grid_error, defect_deg;
  int dimension, tangent_dimension;
} lpm_kernel_report;
LPM_API lpm_status lpm_kernel_check(const lpm_body* b, double p, lpm_kernel_report* out);

/* ---- functional ---- */
LPM_API lpm_status lpm_santalo_center(const lpm_body* b, double p, double* center, double* value);
LPM_API lpm_status lpm_bs_functional(const lpm_body* b, double p, int centered, double* out);

typedef struct lpm_quotient {
  double z_perp2, grad2, q, lambda3, Q;
  int near_round;
} lpm_quotient;
LPM_API lpm_status lpm_combined_quotient(const lpm_body* b, lpm_quotient* out);

/* ---- solver and flow ---- */
typedef struct lpm_solve_options {
  const lpm_group* group; /* NULL: no re-projection */
  double flow_tol, flow_max_time, handoff_tol, newton_tol, required_tol;
  int newton_max_iter;
} lpm_solve_options;
LPM_API void lpm_solve_options_default(lpm_solve_options* o);
LPM_API lpm_status lpm_solve_minkowski(const lpm_body* start, double p, const lpm_solve_options* o, lpm_body** out,
                                       double* residual);

typedef struct lpm_flow_config {
  double alpha;
  int normalized;  /* 1: normalized flow, 0: raw flow */
  int heun;        /* 1: Heun, 0: explicit Euler */
  double c_dt, dt_max, t_end, residual_tol, m_stop;
  long max_steps;
  int sample_every;
  int pin_scale;
  const lpm_group* group;
} lpm_flow_config;
LPM_API void lpm_flow_config_default(lpm_flow_config* c);
LPM_API lpm_status lpm_run_flow(const lpm_body* start, const lpm_flow_config* c, lpm_trajectory** out);
LPM_API void lpm_trajectory_free(lpm_trajectory* t);

typedef struct lpm_flow_sample {
  double t, m, M, gamma, volume, F, residual;
  long clamps;
} lpm_flow_sample;
LPM_API lpm_status lpm_trajectory_size(const lpm_trajectory* t, size_t* out);
LPM_API lpm_status lpm_trajectory_sample(const lpm_trajectory* t, size_t i, lpm_flow_sample* out);
/* Stop reason: converged, extinct, horizon, step_cap, collapsed, expanded or aborted. */
LPM_API const char* lpm_trajectory_status(const lpm_trajectory* t);
LPM_API lpm_status lpm_trajectory_final(const lpm_trajectory* t, lpm_body** out);

typedef enum lpm_blowup_type { LPM_BLOWUP_I = 1, LPM_BLOWUP_II = 2, LPM_BLOWUP_III = 3, LPM_BLOWUP_INCONCLUSIVE = 0 } lpm_blowup_type;
typedef struct lpm_blowup {
  lpm_blowup_type type;
  double T, L_hat, U_hat, reference, beta;
  int T_estimated;
} lpm_blowup;
/* horizon <= 0 extrapolates T from the trajectory. */
LPM_API lpm_status lpm_classify_blowup(const lpm_trajectory* t, double horizon, lpm_blowup* out);

/* ---- batch front end ---- */
/* Executes a JSON run config; exit_code receives 0/1/2/3, run_dir the created directory ("" if none). */
LPM_API lpm_status lpm_run_config(const char* path, int* exit_code, char* run_dir, size_t run_dir_cap);
/* Runs a verification suite and prints its table to stdout; failures receives the failed check count. */
LPM_API lpm_status lpm_verify(const char* suite, int* failures);
/* Writes tidy CSVs into a run directory and prints their paths. */
LPM_API lpm_status lpm_report(const char* dir);

#ifdef __cplusplus
}
#endif

#endif
