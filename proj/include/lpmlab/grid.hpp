#pragma once

#include "lpmlab/common.hpp"

#include <iosfwd>
#include <vector>

namespace lpm {

// Sparse derivative operators on grid nodes, 6th-order centered.
// n=1 uses only d_t and d_tt.
struct DerivativeOps {
  SpMat d_t, d_tt;           // d/dtheta, d2/dtheta2
  SpMat d_p, d_pp, d_tp;     // d/dphi, d2/dphi2, d2/dtheta dphi
  SpMat h11, h12, h22;       // frame Hessian of a field (linear maps)
  Vec abs_h11, abs_h12, abs_h22;  // row sums of |entries|, for stability bounds
};

// Node set on S^1 (N uniform angles) or S^2 (J x L colatitude/longitude grid,
// colatitudes offset by half a cell so no node sits on a pole).
// Nodes are stored row-major by (j, l).
class Grid {
 public:
  static std::shared_ptr<const Grid> make(int n, int n_theta, int n_phi = 0);

  int dim() const { return n_; }
  int ambient() const { return n_ + 1; }
  int n_theta() const { return nt_; }
  int n_phi() const { return np_; }
  Index size() const { return size_; }
  Index index(int j, int l) const { return static_cast<Index>(j) * np_ + l; }
  double d_theta() const { return dt_; }
  double d_phi() const { return dp_; }

  const Mat& points() const { return x_; }       // size x (n+1), unit vectors
  const Vec& weights() const { return w_; }
  const Vec& theta() const { return theta_; }
  const Vec& phi() const { return phi_; }        // zeros for n=1
  const Vec& sin_theta() const { return sin_; }  // n=2 only
  const Vec& cos_theta() const { return cos_; }  // n=2 only
  // Orthonormal frame vector e_i (i = 0, 1) at every node: size x (n+1).
  const Mat& frame(int i) const { return frame_[i]; }
  double area() const;
  const DerivativeOps& ops() const { return ops_; }

  // Node holding the value of the (possibly out-of-range) index pair.
  // Crossing a pole reflects j and shifts l by L/2: the point at colatitude
  // -t and longitude phi is the point at colatitude t and longitude phi + pi.
  // Scalars need no sign change under this identification.
  Index wrap(int j, int l) const;

  // Interpolation stencil (node indices, weights) at a unit direction:
  // cubic Lagrange per angle, tensor product for n=2.
  void stencil(const double* x, std::vector<Index>& idx, std::vector<double>& wt) const;

  std::string describe() const;

 private:
  Grid() = default;
  void build_ops();

  int n_ = 0, nt_ = 0, np_ = 1;
  Index size_ = 0;
  double dt_ = 0, dp_ = 0;
  Mat x_;
  Vec w_, theta_, phi_, sin_, cos_;
  Mat frame_[2];
  DerivativeOps ops_;
};

using GridPtr = std::shared_ptr<const Grid>;

// Fejer (first rule) weights for the integral of g(theta) sin(theta) over
// [0, pi] at the nodes (j + 1/2) pi / J.
Vec fejer_weights(int J);

class ScalarField {
 public:
  ScalarField(GridPtr grid, Vec values);
  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  const Vec& values() const { return v_; }
  double operator[](Index i) const { return v_[i]; }

 private:
  GridPtr grid_;
  Vec v_;
};

// Covariant derivatives in the frame {d_theta, (1/sin theta) d_phi}.
struct FrameHessian {
  Vec g1, g2;         // gradient components (g2 empty for n=1)
  Vec h11, h12, h22;  // Hessian components (h12, h22 empty for n=1)
  Vec laplacian;
};

double integrate(const ScalarField& f, const Grid& g);
double integrate(const Grid& g, const Vec& values);

FrameHessian differentials(const ScalarField& f);
// Direct stencil evaluation, independent of the sparse operators.
FrameHessian differentials_direct(const Grid& g, const Vec& f);

double interpolate(const ScalarField& f, const Eigen::Ref<const Eigen::VectorXd>& x);

// Field CSV: header `theta,phi,value` (n=2) or `theta,value` (n=1).
void write_field_csv(std::ostream& os, const Grid& g, const Vec& values);
void write_field_csv(const std::string& path, const Grid& g, const Vec& values);
Vec read_field_csv(const std::string& path, const Grid& g);

std::string format_number(double v);  // 17 significant digits

}  // namespace lpm
