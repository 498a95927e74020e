#include "doctest.h"
#include "lpmlab/random_body.hpp"

#include <cmath>

using namespace lpm;

TEST_CASE("random bodies are reproducible by seed and differ across seeds") {
  const GridPtr g = Grid::make(2, 16, 32);
  const SupportFunction a = random_convex_body(g, 42);
  const SupportFunction b = random_convex_body(g, 42);
  const SupportFunction c = random_convex_body(g, 43);
  CHECK((a.values() - b.values()).norm() == 0.0);
  CHECK((a.values() - c.values()).norm() > 1e-3);
}

TEST_CASE("random bodies are convex and contain the origin") {
  const GridPtr g = Grid::make(2, 16, 32);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const SupportFunction h = random_convex_body(g, seed);
    CHECK(h.convex());
    CHECK(h.min() > 0);
  }
}

TEST_CASE("group-averaged random bodies are invariant") {
  const GridPtr g = Grid::make(2, 24, 48);
  const SymmetryGroup oct = symmetry_group(good_position_polytope(2, 6));
  const SupportFunction h = random_convex_body(g, 9, {}, &oct);
  CHECK(invariance_defect(h, oct) < 1e-5);
}

TEST_CASE("harmonics are Laplacian eigenfunctions with unit peak") {
  const GridPtr g = Grid::make(2, 48, 96);
  for (int l : {2, 3, 4}) {
    for (int m : {-l, 0, l - 1}) {
      CAPTURE(l);
      CAPTURE(m);
      const Vec f = sample(*g, harmonic(2, l, m));
      const FrameHessian d = differentials(ScalarField(g, f));
      CHECK((d.laplacian + l * (l + 1.0) * f).cwiseAbs().maxCoeff() < 1e-5 * l * (l + 1.0) * 50);
      CHECK(f.cwiseAbs().maxCoeff() <= 1 + 1e-9);
      CHECK(f.cwiseAbs().maxCoeff() > 0.95);
    }
  }
  const GridPtr c = Grid::make(1, 64);
  const Vec f = sample(*c, harmonic(1, 3, 1));
  CHECK((f - (3 * c->theta()).array().cos().matrix()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("group average of an invariant function is itself") {
  const GridPtr g = Grid::make(2, 8, 16);
  const SymmetryGroup ico = symmetry_group(good_position_polytope(2, 12));
  const SphereFunction radial = [](const Vec& x) { return 1 + x.squaredNorm(); };
  CHECK((group_average(*g, radial, ico).array() - 2).abs().maxCoeff() < 1e-14);
}
