#include "kernellab/model.hpp"

#include <cmath>
#include <stdexcept>

namespace kernellab {

OperatorParams validate_params(int dim_N, double alpha, double beta, double b,
                               double c) {
  if (!(dim_N > 2))
    throw std::invalid_argument("validate_params: hypothesis N > 2 violated");
  if (!(alpha > 2.0))
    throw std::invalid_argument("validate_params: hypothesis alpha > 2 violated");
  if (!(beta > alpha - 2.0))
    throw std::invalid_argument(
        "validate_params: hypothesis beta > alpha - 2 violated");
  if (!(c > 0.0))
    throw std::invalid_argument("validate_params: hypothesis c > 0 violated");
  if (!std::isfinite(alpha) || !std::isfinite(beta) || !std::isfinite(b) ||
      !std::isfinite(c))
    throw std::invalid_argument("validate_params: parameters must be finite");

  OperatorParams p;
  p.dim_N = dim_N;
  p.alpha = alpha;
  p.beta = beta;
  p.b = b;
  p.c = c;
  p.xi = (beta - alpha) / 2.0 + 1.0;
  p.gamma = (beta - alpha + 2.0) / (beta + alpha - 2.0);
  return p;
}

double potential_U(const OperatorParams& p, double r) {
  if (r < 0.0) throw std::invalid_argument("potential_U: r must be >= 0");
  if (r == 0.0) return 0.0;  // both terms vanish for alpha > 2, beta > 0
  const double ra = std::pow(r, p.alpha);
  const double bracket =
      (ra / (1.0 + ra)) * (p.b / 2.0 - p.alpha) + p.dim_N + p.alpha - 2.0;
  return std::pow(r, p.alpha - 2.0) * (p.b / 2.0) * bracket +
         p.c * std::pow(r, p.beta);
}

double weight_phi(const OperatorParams& p, double r) {
  if (r < 0.0) throw std::invalid_argument("weight_phi: r must be >= 0");
  return std::pow(1.0 + std::pow(r, p.alpha), p.b / (2.0 * p.alpha));
}

double mu_density(const OperatorParams& p, double r) {
  if (r < 0.0) throw std::invalid_argument("mu_density: r must be >= 0");
  return 1.0 / (1.0 + std::pow(r, p.alpha));
}

double drift_coefficient(const OperatorParams& p, double r) {
  if (r < 0.0) throw std::invalid_argument("drift_coefficient: r must be >= 0");
  if (r == 0.0) return 0.0;
  return p.b * std::pow(r, p.alpha - 1.0);
}

double ScalarField::operator()(double r) const {
  switch (kind) {
    case Kind::potential_u: return potential_U(params, r);
    case Kind::weight_phi: return weight_phi(params, r);
    case Kind::mu_density: return mu_density(params, r);
    case Kind::drift_coefficient: return drift_coefficient(params, r);
  }
  throw std::logic_error("ScalarField: bad kind");
}

const char* ScalarField::name(Kind k) {
  switch (k) {
    case Kind::potential_u: return "potential_u";
    case Kind::weight_phi: return "weight_phi";
    case Kind::mu_density: return "mu_density";
    case Kind::drift_coefficient: return "drift_coefficient";
  }
  return "?";
}

}  // namespace kernellab
