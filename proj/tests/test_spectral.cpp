#include "doctest.h"
#include "lpmlab/spectral.hpp"

#include <cmath>

using namespace lpm;

namespace {

// Eigenvalues of -(Laplacian + n) on degree-l harmonics, with multiplicity.
std::vector<double> harmonic_eigenvalues(int n, int count) {
  std::vector<double> out;
  for (int l = 0; static_cast<int>(out.size()) < count; ++l) {
    const int mult = n == 1 ? (l == 0 ? 1 : 2) : 2 * l + 1;
    for (int m = 0; m < mult && static_cast<int>(out.size()) < count; ++m) out.push_back(l * (l + n - 1.0) - n);
  }
  return out;
}

}  // namespace

TEST_CASE("exact sphere spectrum matches harmonic eigenvalues") {
  for (int n : {1, 2}) {
    const auto a = sphere_spectrum(n, 16);
    const auto b = harmonic_eigenvalues(n, 16);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
  }
}

TEST_CASE("numerical circle spectrum") {
  const SupportFunction h = sphere(Grid::make(1, 96));
  GeneralizedEigenPair pair = assemble_linearized(h);
  spectrum(pair, 9);
  const auto exact = harmonic_eigenvalues(1, 9);
  for (int i = 0; i < 9; ++i) CHECK(std::abs(pair.eigenvalues[i] - exact[i]) < 1e-4);
}

TEST_CASE("linearized operator matches a central difference of detA") {
  const GridPtr g = Grid::make(2, 24, 48);
  Vec mu(3), c(3);
  mu << 1, 1.3, 1.6;
  c << 0.1, 0, 0.05;
  const SupportFunction h = ellipsoid_support(make_ellipsoid(mu, c), g);
  const Mat& x = g->points();
  const Vec phi = (x.col(0).cwiseProduct(x.col(2)) + x.col(1).array().cube().matrix()).eval();
  const double eps = 1e-5;
  const Vec fd = (SupportFunction(g, h.values() + eps * phi).det_a() -
                  SupportFunction(g, h.values() - eps * phi).det_a()) /
                 (2 * eps);
  const Vec lin = linearized_operator(h) * phi;
  CHECK((fd - lin).cwiseAbs().maxCoeff() < 1e-6 * lin.cwiseAbs().maxCoeff());
}

TEST_CASE("linear functions lie in the kernel of the linearized operator") {
  const GridPtr g = Grid::make(2, 24, 48);
  Vec mu(3);
  mu << 1, 1.4, 1.8;
  const SupportFunction h = ellipsoid_support(make_ellipsoid(mu, Vec::Zero(3)), g);
  const SpMat l = linearized_operator(h);
  for (int a = 0; a < 3; ++a) CHECK((l * g->points().col(a)).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("lambda3 at the sphere is n + 2") {
  CHECK(lambda3(sphere(Grid::make(1, 128))) == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(lambda3(sphere(Grid::make(2, 16, 32))) == doctest::Approx(4.0).epsilon(2e-2));
}

TEST_CASE("cluster labels split at gaps") {
  Vec e(6);
  e << -2, 0, 0.001, 4, 4.002, 10;
  const auto lab = cluster_labels(e, 0.01);
  CHECK(lab == std::vector<int>{0, 1, 1, 2, 2, 3});
}

TEST_CASE("containment angle of nested and orthogonal spans") {
  Mat a = Mat::Zero(4, 2), b = Mat::Zero(4, 1), c = Mat::Zero(4, 1);
  a(0, 0) = 1;
  a(1, 1) = 1;
  b(0, 0) = 1;
  b(1, 0) = 1;
  c(3, 0) = 1;
  const Vec w = Vec::Ones(4);
  CHECK(containment_angle(a, b, w) < 1e-5);
  CHECK(containment_angle(a, c, w) == doctest::Approx(90.0));
}

TEST_CASE("rotational tangent fields count broken rotations") {
  CHECK(rotational_tangent_basis(sphere(Grid::make(2, 16, 32))).empty());
  Vec mu(3), mu2(2);
  mu << 1, 1.3, 1.7;
  mu2 << 1, 1.5;
  CHECK(rotational_tangent_basis(ellipsoid_support(make_ellipsoid(mu, Vec::Zero(3)), Grid::make(2, 16, 32))).size() ==
        3);
  CHECK(rotational_tangent_basis(ellipsoid_support(make_ellipsoid(mu2, Vec::Zero(2)), Grid::make(1, 64))).size() == 1);
}

TEST_CASE("circle kernel at p = -2 holds the two degree-two harmonics") {
  const KernelCheck k = kernel_check(sphere(Grid::make(1, 128)), -2);
  CHECK(k.target == 3.0);
  CHECK(k.dimension == 2);
}
