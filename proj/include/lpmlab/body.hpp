#pragma once

#include "lpmlab/grid.hpp"

namespace lpm {

// Support function h > 0 on a grid with A = Hess h + h I, its determinant
// and cofactor evaluated once at construction.
class SupportFunction {
 public:
  SupportFunction(GridPtr grid, Vec h);

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  const Vec& values() const { return h_; }
  Index size() const { return h_.size(); }
  const FrameHessian& hessian() const { return d_; }
  // A entries; a12/a22 empty for n=1.
  const Vec& a11() const { return a11_; }
  const Vec& a12() const { return a12_; }
  const Vec& a22() const { return a22_; }
  const Vec& det_a() const { return det_; }
  // Smallest eigenvalue of A over nodes and the convexity verdict at
  // tolerance 1e-8 * max|A|.
  double min_eig() const { return min_eig_; }
  double max_abs_a() const { return max_abs_a_; }
  bool convex() const { return convex_; }
  double min() const { return h_.minCoeff(); }
  double max() const { return h_.maxCoeff(); }

 private:
  GridPtr grid_;
  Vec h_;
  FrameHessian d_;
  Vec a11_, a12_, a22_, det_;
  double min_eig_ = 0, max_abs_a_ = 0;
  bool convex_ = false;
};

struct Ellipsoid {
  Vec mu;      // semi-axes, ascending
  Vec center;  // z0
};

Ellipsoid make_ellipsoid(Vec mu, Vec center);

SupportFunction sphere(const GridPtr& g, double radius = 1.0);
SupportFunction ellipsoid_support(const Ellipsoid& e, const GridPtr& g);

Vec monge_ampere(const SupportFunction& h);

struct Residual {
  Vec field;
  double sup = 0;
  double l2 = 0;
};
Residual lp_residual(const SupportFunction& h, double p);

struct GeometryReport {
  double volume = 0;
  double m = 0, M = 0, gamma = 0;
  Vec dv;   // cone-volume weight h * detA * w per node
  Mat z;    // boundary point h x + grad h per node, size x (n+1)
  Vec kw;   // integral of x / h dV
  double total_dv = 0;
};
GeometryReport geometry_report(const SupportFunction& h);

struct Convexity {
  bool convex = false;
  double min_eig = 0;
};
Convexity convexity_check(const SupportFunction& h);

double ellipsoid_identity_residual(const Ellipsoid& e, const GridPtr& g);

struct MomentEllipsoid {
  Ellipsoid ellipsoid;  // centroid and volume-matched semi-axes
  Mat axes;             // columns: principal directions matching mu order
};
MomentEllipsoid moment_ellipsoid(const SupportFunction& h);

// Volume of the unit ball in R^d.
double unit_ball_volume(int d);

// Z = h x + sum_i (grad_i h) e_i at every node, size x (n+1).
Mat boundary_points(const SupportFunction& h);

void write_body(const std::string& prefix, const SupportFunction& h, const std::string& description);

}  // namespace lpm
