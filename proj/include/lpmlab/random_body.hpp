#pragma once

#include "lpmlab/symmetry.hpp"

#include <cstdint>
#include <functional>

namespace lpm {

using SphereFunction = std::function<double(const Vec& x)>;

// Real harmonic of degree l and order m (|m| <= l, n=2; m in {-1, 0, 1}
// selecting sin/cos for n=1), scaled by its max over a fine sample.
SphereFunction harmonic(int n, int l, int m);

struct RandomBodyRecipe {
  double axis_spread = 0.3;    // semi-axes drawn from [1 - s, 1 + s]
  double center_spread = 0.2;  // center components drawn from [-c, c]
  int max_degree = 4;          // harmonic perturbation degrees 2..max_degree
  double amplitude = 0.03;     // total perturbation size before convexity backoff
};

// Rotated, shifted ellipsoid plus a small harmonic perturbation, all drawn from seed.
SphereFunction random_body_function(int n, std::uint64_t seed, const RandomBodyRecipe& recipe = {});

Vec sample(const Grid& g, const SphereFunction& f);

// Exact group average of an analytic function at the nodes: (1/|G|) sum f(g x).
Vec group_average(const Grid& g, const SphereFunction& f, const SymmetryGroup& group);

// Samples f (optionally group-averaged); halves the harmonic part until the
// result is convex, failing after 20 halvings.
SupportFunction random_convex_body(const GridPtr& g, std::uint64_t seed, const RandomBodyRecipe& recipe = {},
                                   const SymmetryGroup* group = nullptr);

}  // namespace lpm
