#include "doctest.h"
#include "lpmlab/lpmlab.h"

#include <cmath>
#include <cstring>
#include <numbers>
#include <vector>

extern "C" int c_header_smoke(void);

using std::numbers::pi;

TEST_CASE("header compiles and works from C") { CHECK(c_header_smoke() == 1); }

TEST_CASE("version and status names") {
  CHECK(std::strcmp(lpm_version(), "0.1.0") == 0);
  CHECK(std::strcmp(lpm_status_name(LPM_ERR_NONCONVEX), "nonconvex") == 0);
}

TEST_CASE("grid queries and integration") {
  lpm_grid* g = nullptr;
  REQUIRE(lpm_grid_create(2, 16, 32, &g) == LPM_OK);
  int n = 0;
  size_t size = 0;
  REQUIRE(lpm_grid_info(g, &n, &size) == LPM_OK);
  CHECK(n == 2);
  CHECK(size == 512);
  std::vector<double> x(size * 3), f(size);
  REQUIRE(lpm_grid_points(g, x.data()) == LPM_OK);
  for (size_t i = 0; i < size; ++i) f[i] = x[3 * i + 2] * x[3 * i + 2];
  double v = 0;
  REQUIRE(lpm_integrate(g, f.data(), &v) == LPM_OK);
  CHECK(v == doctest::Approx(4 * pi / 3).epsilon(1e-12));
  lpm_grid_free(g);
}

TEST_CASE("errors are reported through status codes and messages") {
  lpm_grid* g = nullptr;
  CHECK(lpm_grid_create(2, 16, 31, &g) == LPM_ERR_INVALID_ARGUMENT);
  CHECK(g == nullptr);
  CHECK(std::strlen(lpm_last_error()) > 0);
  CHECK(lpm_grid_info(nullptr, nullptr, nullptr) == LPM_ERR_INVALID_ARGUMENT);

  REQUIRE(lpm_grid_create(1, 64, 0, &g) == LPM_OK);
  std::vector<double> x(128), h(64);
  REQUIRE(lpm_grid_points(g, x.data()) == LPM_OK);
  for (int i = 0; i < 64; ++i) h[i] = 1 + 0.5 * std::cos(3 * std::atan2(x[2 * i + 1], x[2 * i]));
  lpm_body* b = nullptr;
  REQUIRE(lpm_body_create(g, h.data(), &b) == LPM_OK);
  double c[2];
  CHECK(lpm_santalo_center(b, -5, c, nullptr) == LPM_ERR_NONCONVEX);
  lpm_body_free(b);
  lpm_grid_free(g);
}

TEST_CASE("ellipsoid geometry through the C API") {
  lpm_grid* g = nullptr;
  REQUIRE(lpm_grid_create(2, 48, 96, &g) == LPM_OK);
  const double mu[3] = {1, 1.5, 2};
  const double center[3] = {0.1, 0, 0};
  lpm_body* b = nullptr;
  REQUIRE(lpm_body_ellipsoid(g, mu, center, &b) == LPM_OK);
  lpm_geometry geo{};
  REQUIRE(lpm_geometry_report(b, &geo) == LPM_OK);
  CHECK(geo.volume == doctest::Approx(4 * pi).epsilon(1e-6));
  CHECK(geo.convex == 1);
  CHECK(std::abs(geo.kazdan_warner[0]) < 1e-6 * geo.total_dv);
  lpm_body_free(b);
  lpm_grid_free(g);
}

TEST_CASE("groups, symmetrization and orthonormality") {
  lpm_group* grp = nullptr;
  REQUIRE(lpm_group_create(2, 6, 0, &grp) == LPM_OK);
  size_t order = 0;
  REQUIRE(lpm_group_order(grp, &order) == LPM_OK);
  CHECK(order == 48);
  double q[9];
  REQUIRE(lpm_group_element(grp, 0, q) == LPM_OK);
  CHECK(q[0] == 1.0);
  CHECK(q[4] == 1.0);
  CHECK(lpm_group_element(grp, order, q) == LPM_ERR_INVALID_ARGUMENT);

  lpm_grid* g = nullptr;
  REQUIRE(lpm_grid_create(2, 24, 48, &g) == LPM_OK);
  lpm_body *b = nullptr, *s = nullptr;
  REQUIRE(lpm_body_random(g, 3, grp, &b) == LPM_OK);
  REQUIRE(lpm_symmetrize(b, grp, &s) == LPM_OK);
  double defect = 1;
  REQUIRE(lpm_invariance_defect(s, grp, &defect) == LPM_OK);
  CHECK(defect < 1e-5);
  double m[9], expected = 0;
  REQUIRE(lpm_orthonormality(s, m, &expected) == LPM_OK);
  CHECK(std::abs(m[1]) < 1e-6 * (m[0] + m[4] + m[8]));
  CHECK(m[0] == doctest::Approx(expected).epsilon(1e-5));
  lpm_body_free(s);
  lpm_body_free(b);
  lpm_grid_free(g);
  lpm_group_free(grp);
}

TEST_CASE("spectrum, solver and flow through the C API") {
  lpm_grid* g = nullptr;
  REQUIRE(lpm_grid_create(1, 64, 0, &g) == LPM_OK);
  const double mu[2] = {1, 1};
  lpm_body* b = nullptr;
  REQUIRE(lpm_body_ellipsoid(g, mu, nullptr, &b) == LPM_OK);
  double ev[5];
  REQUIRE(lpm_spectrum(b, 5, ev) == LPM_OK);
  CHECK(ev[0] == doctest::Approx(-1).epsilon(1e-6));
  CHECK(ev[4] == doctest::Approx(3).epsilon(1e-6));

  lpm_solve_options so;
  lpm_solve_options_default(&so);
  lpm_body* sol = nullptr;
  double res = 1;
  REQUIRE(lpm_solve_minkowski(b, -5, &so, &sol, &res) == LPM_OK);
  CHECK(res < 1e-8);
  lpm_body_free(sol);

  lpm_flow_config fc;
  lpm_flow_config_default(&fc);
  fc.alpha = 0.5;
  fc.normalized = 0;
  fc.dt_max = 1e-3;
  lpm_trajectory* tr = nullptr;
  REQUIRE(lpm_run_flow(b, &fc, &tr) == LPM_OK);
  CHECK(std::strcmp(lpm_trajectory_status(tr), "extinct") == 0);
  size_t len = 0;
  REQUIRE(lpm_trajectory_size(tr, &len) == LPM_OK);
  CHECK(len > 10);
  lpm_blowup bl{};
  REQUIRE(lpm_classify_blowup(tr, 0, &bl) == LPM_OK);
  CHECK(bl.type == LPM_BLOWUP_I);
  CHECK(bl.T_estimated == 1);
  lpm_trajectory_free(tr);
  lpm_body_free(b);
  lpm_grid_free(g);
}
