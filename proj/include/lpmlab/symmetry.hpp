#pragma once

#include "lpmlab/body.hpp"

#include <vector>

namespace lpm {

struct Polytope {
  int n = 0;  // sphere dimension; vertices live in R^(n+1)
  int k = 0;  // vertex count
  std::string name;
  std::vector<Vec> vertices;
  double circumradius() const;
};

// Regular polytope in its canonical position. n=1: any k >= 3;
// n=2: k in {4, 6, 8, 12, 20}; n=3 (group closure only): k in {5, 8, 16, 24, 120, 600}.
Polytope good_position_polytope(int n, int k);

struct SymmetryGroup {
  int n = 0;
  std::vector<Mat> elements;  // (n+1) x (n+1) orthogonal, identity first
  std::string provenance;     // generator description
  size_t order() const { return elements.size(); }
};

constexpr size_t kGroupCap = 10000;

// Closure of a generator set under multiplication, dedup at max-norm 1e-10.
SymmetryGroup close_group(int n, const std::vector<Mat>& generators, const std::string& provenance,
                          size_t cap = kGroupCap);
SymmetryGroup symmetry_group(const Polytope& p, size_t cap = kGroupCap);

// Group average over a fixed grid as a sparse operator; reused by flows.
class Symmetrizer {
 public:
  Symmetrizer(GridPtr grid, SymmetryGroup group);
  const SymmetryGroup& group() const { return group_; }
  const GridPtr& grid_ptr() const { return grid_; }
  // Average with the integral restored by a constant shift.
  Vec apply(const Vec& h) const;
  SupportFunction apply(const SupportFunction& h) const;

 private:
  GridPtr grid_;
  SymmetryGroup group_;
  SpMat avg_;
};

SupportFunction symmetrize(const SupportFunction& h, const SymmetryGroup& g);

// Values of f(g x) at every node, by interpolation.
Vec pullback(const Grid& grid, const Vec& f, const Mat& g);

double invariance_defect(const SupportFunction& h, const SymmetryGroup& g);

struct Orthonormality {
  Mat m;                 // int x_a x_b h^-2 dV
  Vec w;                 // int x_a h^-2 dV
  double h_minus2 = 0;   // int h^-2 dV
  double expected = 0;   // h_minus2 / (n+1)
};
Orthonormality orthonormality_check(const SupportFunction& h);

std::string group_json(const SymmetryGroup& g);
void write_vertices_csv(const std::string& path, const Polytope& p);

}  // namespace lpm
