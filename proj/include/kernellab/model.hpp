#pragma once

#include <string>

namespace kernellab {

// Parameters of the radial operator
//   A u = (1 + r^alpha) (u'' + (N-1)/r u') + b r^(alpha-1) u' - c r^beta u
// on R^N, together with the derived exponents used throughout.
//
// Hypotheses: N > 2, alpha > 2, beta > alpha - 2, c > 0.  The drift strength
// b may take either sign.
struct OperatorParams {
  int dim_N = 3;
  double alpha = 3.0;
  double beta = 4.0;
  double b = 0.0;
  double c = 1.0;

  // xi = (beta - alpha)/2 + 1, the decay exponent of the correction series.
  double xi = 0.0;
  // gamma = (beta - alpha + 2)/(beta + alpha - 2), in (0,1) under the
  // hypotheses; controls the small-time blow-up rate of kernel bounds.
  double gamma = 0.0;
};

// Validates the standing hypotheses and fills in the derived exponents.
// Throws std::invalid_argument naming the violated hypothesis.
OperatorParams validate_params(int dim_N, double alpha, double beta, double b,
                               double c = 1.0);

// Potential of the symmetrized (weighted) picture,
//   U(r) = r^(alpha-2) (b/2) [ (r^alpha/(1+r^alpha)) (b/2 - alpha)
//                              + N + alpha - 2 ] + c r^beta.
// Bounded from below; grows like c r^beta.
double potential_U(const OperatorParams& p, double r);

// Conjugating weight phi(r) = (1 + r^alpha)^(b/(2 alpha)).
double weight_phi(const OperatorParams& p, double r);

// Density of the invariant-type measure, 1/(1 + r^alpha).
double mu_density(const OperatorParams& p, double r);

// Radial drift coefficient b r^(alpha-1).
double drift_coefficient(const OperatorParams& p, double r);

// Tagged scalar field over radii; keeps CLI/table plumbing generic.
struct ScalarField {
  enum class Kind { potential_u, weight_phi, mu_density, drift_coefficient };
  Kind kind = Kind::potential_u;
  OperatorParams params;

  double operator()(double r) const;
  static const char* name(Kind k);
};

}  // namespace kernellab
