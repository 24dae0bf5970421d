#include "kernellab/asymptotics.hpp"

#include <cmath>
#include <stdexcept>

#include "kernellab/quadrature.hpp"

namespace kernellab {

namespace {

void check_rel_tol(double rel_tol) {
  if (!(rel_tol > 0.0) || rel_tol > 1e-3)
    throw std::invalid_argument("agmon_J: rel_tol must lie in (0, 1e-3]");
}

// Correction series and its derivative at r.
double v_series(const WkbModel& m, double r) {
  double v = 0.0;
  for (int i = 1; i <= m.k_terms; ++i)
    v += m.coeffs[i] * std::pow(r, -(i * m.params.xi + 1.0));
  return v;
}

double v_series_prime(const WkbModel& m, double r) {
  double vp = 0.0;
  for (int i = 1; i <= m.k_terms; ++i) {
    const double e = i * m.params.xi + 1.0;
    vp += m.coeffs[i] * (-e) * std::pow(r, -e - 1.0);
  }
  return vp;
}

// integral_1^r v(s) ds, closed form.
double v_integral(const WkbModel& m, double r) {
  double acc = 0.0;
  for (int j = 1; j <= m.k_terms; ++j) {
    const double jxi = j * m.params.xi;
    acc += m.coeffs[j] / jxi * (1.0 - std::pow(r, -jxi));
  }
  return acc;
}

}  // namespace

double h_fun(const OperatorParams& p, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("h_fun: r must be positive");
  return p.c * std::pow(r, p.beta) / (1.0 + std::pow(r, p.alpha));
}

double agmon_J(const OperatorParams& p, double r, double rel_tol) {
  check_rel_tol(rel_tol);
  if (!(r >= 1.0)) throw std::invalid_argument("agmon_J: r must be >= 1");
  if (r == 1.0) return 0.0;
  return integrate_adaptive([&](double s) { return std::sqrt(h_fun(p, s)); },
                            1.0, r, rel_tol);
}

std::vector<double> agmon_J_table(const OperatorParams& p,
                                  const std::vector<double>& radii,
                                  double rel_tol) {
  check_rel_tol(rel_tol);
  std::vector<double> out(radii.size());
  double prev_r = 1.0, prev_J = 0.0;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double r = radii[i];
    if (!(r >= 1.0))
      throw std::invalid_argument("agmon_J_table: radii must be >= 1");
    if (i > 0 && !(r >= prev_r))
      throw std::invalid_argument("agmon_J_table: radii must ascend");
    if (r > prev_r)
      prev_J += integrate_adaptive(
          [&](double s) { return std::sqrt(h_fun(p, s)); }, prev_r, r, rel_tol);
    prev_r = r;
    out[i] = prev_J;
  }
  return out;
}

double wkb_c0(const OperatorParams& p) {
  const double xi = p.xi;
  const double N = p.dim_N;
  const double t = (xi - 1.0) / 2.0;
  return t * t + t - (N - 1.0) * (N - 3.0) / 4.0 -
         (p.b / 2.0) * (N - 2.0 + p.alpha) -
         (p.b * p.alpha / 2.0) * (p.b / (2.0 * p.alpha) - 1.0);
}

int default_k_terms(const OperatorParams& p) {
  int k = 3;
  while (!(k * p.xi + 2.0 - p.alpha > 1.0)) ++k;
  return k;
}

WkbModel wkb_coefficients(const OperatorParams& p, double lambda, int k) {
  if (k < 3) throw std::invalid_argument("wkb_coefficients: k must be >= 3");
  if (!(k * p.xi + 2.0 - p.alpha > 0.0))
    throw std::invalid_argument(
        "wkb_coefficients: k xi + 2 - alpha must be positive");

  WkbModel m;
  m.params = p;
  m.lambda = lambda;
  m.k_terms = k;
  m.coeffs.assign(k + 1, 0.0);
  m.coeffs[0] = wkb_c0(p);
  m.coeffs[1] = (lambda - m.coeffs[0]) / 2.0;
  m.coeffs[2] = -m.coeffs[1] * p.xi;
  for (int i = 2; i < k; ++i) {
    double quad = 0.0;
    for (int j = 1; j < i; ++j) quad += m.coeffs[j] * m.coeffs[i - j];
    m.coeffs[i + 1] = -(p.xi * (i + 1) * m.coeffs[i] + quad) / 2.0;
  }
  return m;
}

double log_barrier_g(const WkbModel& m, double r, double rel_tol) {
  if (!(r >= 1.0)) throw std::invalid_argument("barrier_g: r must be >= 1");
  const OperatorParams& p = m.params;
  const double ra = std::pow(r, p.alpha);
  return -(p.dim_N - 1.0) / 2.0 * std::log(r) -
         p.b / (2.0 * p.alpha) * std::log1p(ra) -
         0.25 * std::log(h_fun(p, r)) - agmon_J(p, r, rel_tol) -
         v_integral(m, r);
}

double barrier_g(const WkbModel& m, double r, double rel_tol) {
  return std::exp(log_barrier_g(m, r, rel_tol));
}

double log_comparator_psi_hat(const OperatorParams& p, double r,
                              double rel_tol) {
  if (!(r >= 1.0))
    throw std::invalid_argument("comparator_psi_hat: r must be >= 1");
  const double ra = std::pow(r, p.alpha);
  return (-(p.dim_N - 1.0) / 2.0 - (p.beta - p.alpha) / 4.0) * std::log(r) -
         p.b / (2.0 * p.alpha) * std::log1p(ra) - agmon_J(p, r, rel_tol);
}

double comparator_psi_hat(const OperatorParams& p, double r, double rel_tol) {
  return std::exp(log_comparator_psi_hat(p, r, rel_tol));
}

double wkb_residual_g1(const WkbModel& m, double r) {
  if (!(r >= 1.0))
    throw std::invalid_argument("wkb_residual_g1: r must be >= 1");
  const OperatorParams& p = m.params;
  const double N = p.dim_N;
  const double ra = std::pow(r, p.alpha);
  const double onepra = 1.0 + ra;

  // w = r^(alpha-1)/(1+r^alpha) and its derivative.
  const double w = std::pow(r, p.alpha - 1.0) / onepra;
  const double wp =
      std::pow(r, p.alpha - 2.0) * ((p.alpha - 1.0) - ra) / (onepra * onepra);

  const double h = h_fun(p, r);
  const double sqrth = std::sqrt(h);
  // q = h'/h and its derivative.
  const double q = p.beta / r - p.alpha * w;
  const double qp = -p.beta / (r * r) - p.alpha * wp;

  const double v = v_series(m, r);
  const double vp = v_series_prime(m, r);

  // L = log g; the residual is L'' + L'^2 + ((N-1)/r + b w) L' - h.
  const double Lp =
      -(N - 1.0) / (2.0 * r) - (p.b / 2.0) * w - 0.25 * q - sqrth - v;
  const double Lpp = (N - 1.0) / (2.0 * r * r) - (p.b / 2.0) * wp -
                     0.25 * qp - 0.5 * q * sqrth - vp;

  return Lpp + Lp * Lp + ((N - 1.0) / r + p.b * w) * Lp - h;
}

double log_bound_B(const OperatorParams& p, double rx, double ry,
                   double rel_tol) {
  if (!(rx >= 1.0) || !(ry >= 1.0))
    throw std::invalid_argument("bound_B: radii must be >= 1");
  const double rxa = std::pow(rx, p.alpha);
  const double rya = std::pow(ry, p.alpha);
  const double kappa = -(p.dim_N - 1.0) / 2.0 - (p.beta - p.alpha) / 4.0;
  return p.b / (2.0 * p.alpha) * (std::log1p(rya) - std::log1p(rxa)) +
         kappa * (std::log(rx) + std::log(ry)) - std::log1p(rya) -
         agmon_J(p, rx, rel_tol) - agmon_J(p, ry, rel_tol);
}

double bound_B(const OperatorParams& p, double rx, double ry, double rel_tol) {
  return std::exp(log_bound_B(p, rx, ry, rel_tol));
}

double log_simplified_bound_B_tilde(const OperatorParams& p, double rx,
                                    double ry) {
  if (!(rx >= 1.0) || !(ry >= 1.0))
    throw std::invalid_argument("simplified_bound_B_tilde: radii must be >= 1");
  const double rxa = std::pow(rx, p.alpha);
  const double rya = std::pow(ry, p.alpha);
  const double kappa = -(p.dim_N - 1.0) / 2.0 - (p.beta - p.alpha) / 4.0;
  // Elementary lower bound for J: J(r) >= (sqrt2/(beta-alpha+2)) (r^xi - 1),
  // with equality at r = 1, from sqrt(2 h(s)) >= s^((beta-alpha)/2).
  const double slope = std::sqrt(2.0) / (p.beta - p.alpha + 2.0);
  const double jx = slope * (std::pow(rx, p.xi) - 1.0);
  const double jy = slope * (std::pow(ry, p.xi) - 1.0);
  return p.b / (2.0 * p.alpha) * (std::log1p(rya) - std::log1p(rxa)) +
         kappa * (std::log(rx) + std::log(ry)) - std::log1p(rya) - jx - jy;
}

double simplified_bound_B_tilde(const OperatorParams& p, double rx,
                                double ry) {
  return std::exp(log_simplified_bound_B_tilde(p, rx, ry));
}

}  // namespace kernellab
