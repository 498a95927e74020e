#pragma once

#include "lpmlab/body.hpp"

#include <vector>

namespace lpm {

struct SantaloResult {
  Vec center;
  double grad_norm = 0;  // relative to |p| int (h - xi.x)^(p-1)
  int iterations = 0;
  double value = 0;      // H(center)
};

// Minimizer of H(xi) = int (h - xi.x)^p over the interior, p < 0.
SantaloResult santalo_center(const SupportFunction& h, double p);
double santalo_objective(const SupportFunction& h, double p, const Vec& xi);

// F_p = Vol * H^(-(n+1)/p), with H at the Santalo center or at xi = 0.
double bs_functional(const SupportFunction& h, double p, bool centered);

struct Components {
  Vec along_h, linear, perp;  // phi = along_h + linear + perp
  Mat basis;                  // orthonormal {h, x_1..x_{n+1}} span under h^-2 dV
};
Components project_components(const Vec& phi, const SupportFunction& h);

struct ZPerp {
  Mat field;          // size x (n+1)
  double norm2 = 0;   // int |Z_perp|^2 dV
  double z_norm2 = 0; // int |Z|^2 dV
};
ZPerp z_perp(const SupportFunction& h);

struct QuotientReport {
  double z_perp2 = 0;
  double grad2 = 0;
  double q = 0;
  double lambda3 = 0;
  double Q = 0;
  bool near_round = false;
};
QuotientReport combined_quotient(const SupportFunction& h);

struct DecreaseBoundRow {
  int component = 0;
  double lhs = 0;  // V^((n+1)/p) (F(h + eps phi) - F(h)), phi = h Z_l
  double rhs = 0;  // -(lambda3 + p - 1)/2 eps^2 int h^(p-2) phi_perp^2
  bool holds = false;
};

struct VariationReport {
  double F = 0;
  double first = 0;        // central difference dF/deps
  double second_fd = 0;    // central difference d2F/deps2
  double second_form = 0;  // assembled quadratic form on phi_perp
  double rel_error = 0;
  double lambda3 = 0;
  std::vector<DecreaseBoundRow> decrease_bounds;
};
VariationReport variation_check(const SupportFunction& h, double p, const Vec& phi, double eps,
                                bool with_bounds = true);

// G^(-(n+1)/p) [ int phi L phi - (p-1) int h^(p-2) phi^2 ] with G = int h^p.
double second_variation_form(const SupportFunction& h, double p, const Vec& phi);

// Smallest constants C making each a-priori bound hold for this body
// (n >= 2 bounds evaluated for any n), plus the volume-to-short-axis quotient
// Vol / mu1^((p+n+1)/2) with mu1 from the moment ellipsoid (approximate).
struct AprioriConstants {
  double max_vs_min = 0;     // M <= C^(2-p) m^(p-n)
  double vol_vs_min = 0;     // Vol <= C^(1-p) m^p
  double min_vs_max = 0;     // m^(p+n) <= C (-p)^n M^(2n+1)
  double vol_vs_max = 0;     // Vol <= C M^(n+1)
  double axis_quotient = 0;
};
AprioriConstants apriori_constants(const SupportFunction& h, double p);

}  // namespace lpm
