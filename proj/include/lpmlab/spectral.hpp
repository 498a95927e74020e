#pragma once

#include "lpmlab/body.hpp"

#include <vector>

namespace lpm {

// Sparse map phi -> U^{ij} (phi_ij + phi delta_ij), U the cofactor of A.
SpMat linearized_operator(const SupportFunction& h);

struct GeneralizedEigenPair {
  Mat stiffness;         // symmetrized W * (-linearized operator)
  Vec weight;            // w * detA / h
  double raw_asymmetry = 0;  // max|S - S^T| / max|S| before symmetrization
  Vec eigenvalues;       // ascending
  Mat eigenvectors;      // columns, B-orthonormal
};

GeneralizedEigenPair assemble_linearized(const SupportFunction& h);

// Smallest m generalized eigenpairs of (stiffness, weight), stored in pair.
void spectrum(GeneralizedEigenPair& pair, int m);

double lambda3(const SupportFunction& h);

// Exact low spectrum of the round sphere, ascending with multiplicity.
std::vector<double> sphere_spectrum(int n, int count);

// Cluster label per eigenvalue: a new cluster starts at gaps larger than tol.
std::vector<int> cluster_labels(const Vec& eigenvalues, double tol);

// Max |computed - exact| over the sphere eigenvalues not above `upto` on this grid.
double sphere_grid_error(const GridPtr& g, double upto);

std::vector<Vec> rotational_tangent_basis(const SupportFunction& h);

struct KernelCheck {
  double target = 0;     // 1 - p
  double tol = 0;        // cluster half-width
  double grid_error = 0;
  int dimension = 0;
  int tangent_dimension = 0;
  double defect_deg = 0; // largest principal angle from span(T_O) into the eigenspace
  Vec nearby;            // eigenvalues inside the window
};
KernelCheck kernel_check(const SupportFunction& h, double p);

// Largest principal angle (degrees) of span(b) into span(a), inner product diag(weight).
double containment_angle(const Mat& a, const Mat& b, const Vec& weight);

}  // namespace lpm
