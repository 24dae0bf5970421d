#pragma once

#include <vector>

#include "kernellab/model.hpp"

namespace kernellab {

// h(r) = c r^beta / (1 + r^alpha), the coefficient ratio that drives the
// exponential decay scale.  Behaves like c r^(beta-alpha) at infinity.
double h_fun(const OperatorParams& p, double r);

// Agmon-type distance J(r) = integral_1^r sqrt(h(s)) ds, by adaptive
// quadrature with estimated relative error <= rel_tol.  Requires r >= 1 and
// rel_tol in (0, 1e-3].
double agmon_J(const OperatorParams& p, double r, double rel_tol = 1e-10);

// Cumulative J values over an ascending radius table (each >= 1); one
// adaptive pass per segment, so the whole table costs what a single call to
// the largest radius would.
std::vector<double> agmon_J_table(const OperatorParams& p,
                                  const std::vector<double>& radii,
                                  double rel_tol = 1e-10);

// Correction series v(r) = sum_{i=1..k} c_i r^-(i xi + 1) attached to a
// spectral parameter lambda.  coeffs stores c_0 .. c_k.
struct WkbModel {
  OperatorParams params;
  double lambda = 0.0;
  int k_terms = 0;
  std::vector<double> coeffs;
};

// Smallest admissible k (k >= 3, k xi + 2 - alpha > 0) with one extra unit of
// margin so the r^-alpha remainder dominates the truncated series remainder.
int default_k_terms(const OperatorParams& p);

// Coefficient recursion:
//   c_0 fixed by the parameters, 2 c_1 + c_0 = lambda, 2 c_1 xi + 2 c_2 = 0,
//   xi (i+1) c_i + 2 c_{i+1} + sum_{j+s=i} c_j c_s = 0   (i = 2 .. k-1).
// Requires k >= 3 and k xi + 2 - alpha > 0.
WkbModel wkb_coefficients(const OperatorParams& p, double lambda, int k);

// The constant term of the residual expansion (also the lambda for which the
// whole correction series vanishes).
double wkb_c0(const OperatorParams& p);

// Barrier profile
//   g(r) = r^-(N-1)/2 (1+r^alpha)^-(b/(2 alpha)) h(r)^-1/4
//          exp{ -J(r) - sum_j (c_j/(j xi)) (1 - r^-(j xi)) },
// valid for r >= 1.  log_barrier_g avoids underflow at large radii.
double barrier_g(const WkbModel& m, double r, double rel_tol = 1e-10);
double log_barrier_g(const WkbModel& m, double r, double rel_tol = 1e-10);

// Ground-state comparator
//   psi_hat(r) = r^(-(N-1)/2 - (beta-alpha)/4) (1+r^alpha)^-(b/(2 alpha)) e^-J(r).
double comparator_psi_hat(const OperatorParams& p, double r,
                          double rel_tol = 1e-10);
double log_comparator_psi_hat(const OperatorParams& p, double r,
                              double rel_tol = 1e-10);

// Relative residual g_1 = (A g)/g of the barrier under the full operator,
// computed from closed-form radial derivatives (no quadrature, no
// exponentials, hence stable at large r).  r^2 g_1(r) -> lambda with error
// O(r^-min(k xi, alpha)).
double wkb_residual_g1(const WkbModel& m, double r);

// Two-sided kernel comparison weight
//   B(rx, ry) = ((1+ry^a)/(1+rx^a))^(b/2a) (rx ry)^(-(N-1)/2 - (beta-alpha)/4)
//               / (1+ry^a) * exp(-J(rx) - J(ry)),      rx, ry >= 1.
double bound_B(const OperatorParams& p, double rx, double ry,
               double rel_tol = 1e-10);
double log_bound_B(const OperatorParams& p, double rx, double ry,
                   double rel_tol = 1e-10);

// Quadrature-free variant: J(r) is replaced through the pointwise inequality
// sqrt(2 h(r)) >= r^((beta-alpha)/2) (r >= 1) by the elementary exponent
// (sqrt2/(beta-alpha+2)) (r^xi - 1), anchored so the two variants agree at
// rx = ry = 1.  Dominates bound_B pointwise.
double simplified_bound_B_tilde(const OperatorParams& p, double rx, double ry);
double log_simplified_bound_B_tilde(const OperatorParams& p, double rx,
                                    double ry);

}  // namespace kernellab
