#include "doctest.h"
#include "lpmlab/body.hpp"

#include <cmath>
#include <numbers>

using namespace lpm;
using std::numbers::pi;

TEST_CASE("sphere of radius r has detA = r^n") {
  for (double r : {0.5, 1.0, 2.0}) {
    const SupportFunction c = sphere(Grid::make(1, 64), r);
    CHECK((c.det_a().array() - r).abs().maxCoeff() < 1e-12);
    const SupportFunction s = sphere(Grid::make(2, 16, 32), r);
    CHECK((s.det_a().array() - r * r).abs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("unit sphere solves the Lp equation for every p") {
  const SupportFunction s = sphere(Grid::make(2, 16, 32));
  for (double p : {-9.0, -5.0, 0.5}) CHECK(lp_residual(s, p).sup < 1e-9);
}

TEST_CASE("translated sphere keeps its curvature and boundary") {
  const GridPtr g = Grid::make(2, 24, 48);
  Vec v(3);
  v << 0.1, -0.2, 0.15;
  const SupportFunction h(g, Vec::Ones(g->size()) + g->points() * v);
  CHECK((h.det_a().array() - 1).abs().maxCoeff() < 1e-6);
  const Mat z = boundary_points(h);
  CHECK((z - (g->points().rowwise() + v.transpose())).cwiseAbs().maxCoeff() < 1e-7);
  CHECK(geometry_report(h).volume == doctest::Approx(4 * pi / 3).epsilon(1e-8));
}

TEST_CASE("ellipse and ellipsoid volumes") {
  Vec mu1(2), mu2(3);
  mu1 << 1, 2;
  mu2 << 1, 1.5, 2;
  const auto e1 = ellipsoid_support(make_ellipsoid(mu1, Vec::Zero(2)), Grid::make(1, 256));
  CHECK(geometry_report(e1).volume == doctest::Approx(2 * pi).epsilon(1e-9));
  const auto e2 = ellipsoid_support(make_ellipsoid(mu2, Vec::Zero(3)), Grid::make(2, 64, 128));
  CHECK(geometry_report(e2).volume == doctest::Approx(4 * pi).epsilon(1e-6));
}

TEST_CASE("ellipsoid support values follow the closed form") {
  const GridPtr g = Grid::make(2, 8, 16);
  Vec mu(3), c(3);
  mu << 1, 1.5, 2;
  c << 0.1, 0, -0.1;
  const Ellipsoid e = make_ellipsoid(mu, c);
  const SupportFunction h = ellipsoid_support(e, g);
  const Mat& x = g->points();
  for (Index i = 0; i < g->size(); ++i) {
    double q = 0;
    for (int a = 0; a < 3; ++a) q += mu[a] * mu[a] * x(i, a) * x(i, a);
    CHECK(h.values()[i] == doctest::Approx(std::sqrt(q) + x.row(i).dot(c)).epsilon(1e-15));
  }
}

TEST_CASE("Monge-Ampere of 1 + eps cos 2t is 1 - 3 eps cos 2t") {
  const GridPtr g = Grid::make(1, 128);
  const Vec c2 = (2 * g->theta()).array().cos().matrix();
  const SupportFunction h(g, Vec::Ones(g->size()) + 0.1 * c2);
  CHECK((monge_ampere(h) - (Vec::Ones(g->size()) - 0.3 * c2)).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("convexity check flags a non-convex support function") {
  const GridPtr g = Grid::make(1, 128);
  const SupportFunction h(g, Vec::Ones(g->size()) + 0.5 * (3 * g->theta()).array().cos().matrix());
  CHECK_FALSE(h.convex());
  CHECK(h.min_eig() == doctest::Approx(-3.0).epsilon(1e-6));
  CHECK(sphere(g).convex());
}

TEST_CASE("Kazdan-Warner integral vanishes on an off-center ellipsoid") {
  Vec mu(3), c(3);
  mu << 1, 1.5, 2;
  c << 0.2, -0.1, 0.3;
  const auto h = ellipsoid_support(make_ellipsoid(mu, c), Grid::make(2, 48, 96));
  const GeometryReport r = geometry_report(h);
  CHECK(r.kw.norm() < 1e-6 * r.total_dv);
  CHECK(r.total_dv == doctest::Approx(3 * r.volume).epsilon(1e-8));
}

TEST_CASE("moment ellipsoid of an ellipsoid is the ellipsoid") {
  Vec mu(3), c(3);
  mu << 0.8, 1.2, 1.7;
  c << 0.1, 0.2, -0.05;
  const auto h = ellipsoid_support(make_ellipsoid(mu, c), Grid::make(2, 48, 96));
  const MomentEllipsoid m = moment_ellipsoid(h);
  CHECK((m.ellipsoid.mu - mu).norm() < 1e-5);
  CHECK((m.ellipsoid.center - c).norm() < 1e-6);
}

TEST_CASE("unit ball volumes") {
  CHECK(unit_ball_volume(2) == doctest::Approx(pi));
  CHECK(unit_ball_volume(3) == doctest::Approx(4 * pi / 3));
  CHECK(unit_ball_volume(4) == doctest::Approx(pi * pi / 2));
}

TEST_CASE("wrong value count is rejected") {
  const GridPtr g = Grid::make(1, 16);
  CHECK_THROWS_AS(SupportFunction(g, Vec::Ones(15)), Error);
}
