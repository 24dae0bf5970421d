#include "kernellab/discretize.hpp"

#include <cmath>
#include <stdexcept>

#include "kernellab/asymptotics.hpp"
#include "kernellab/tridiag.hpp"

namespace kernellab {

std::vector<double> uniform_nodes(double R, int n) {
  if (n < 2) throw std::invalid_argument("uniform_nodes: n must be >= 2");
  if (!(R > 0.0)) throw std::invalid_argument("uniform_nodes: R must be > 0");
  const double r1 = R / (10.0 * n);
  std::vector<double> nodes(n);
  for (int i = 0; i < n; ++i)
    nodes[i] = r1 + (R - r1) * i / static_cast<double>(n - 1);
  nodes.back() = R;
  return nodes;
}

std::vector<double> geometric_nodes(double R, int n, double ratio) {
  if (n < 2) throw std::invalid_argument("geometric_nodes: n must be >= 2");
  if (!(R > 0.0)) throw std::invalid_argument("geometric_nodes: R must be > 0");
  if (!(ratio > 1.0))
    throw std::invalid_argument("geometric_nodes: ratio must exceed 1");
  // Cell widths s, s q, ..., s q^(n-1) starting at the virtual origin; the
  // first node sits at the end of the first cell.  Partial sums in closed
  // form keep the construction exact.
  const double qn = std::pow(ratio, n);
  const double s = R * (ratio - 1.0) / (qn - 1.0);
  std::vector<double> nodes(n);
  for (int i = 0; i < n; ++i)
    nodes[i] = s * (std::pow(ratio, i + 1) - 1.0) / (ratio - 1.0);
  nodes.back() = R;
  return nodes;
}

RadialGrid build_grid(const OperatorParams& p, double R, int n,
                      RadialGrid::Grading grading, double ratio) {
  if (!(R >= 10.0)) throw std::invalid_argument("build_grid: R must be >= 10");
  if (n < 100) throw std::invalid_argument("build_grid: n must be >= 100");

  RadialGrid g;
  g.grading = grading;
  g.R = R;
  if (grading == RadialGrid::Grading::uniform) {
    g.ratio = 1.0;
    g.nodes = uniform_nodes(R, n);
  } else {
    if (!(ratio > 1.0) || !(ratio <= 1.1))
      throw std::invalid_argument(
          "build_grid: geometric ratio must lie in (1, 1.1]");
    g.ratio = ratio;
    g.nodes = geometric_nodes(R, n, ratio);
  }
  if (!(g.nodes.front() > 0.0))
    throw std::runtime_error("build_grid: first node underflowed to zero");
  g.J_at_R = agmon_J(p, R, 1e-8);
  g.truncation_adequate = g.J_at_R >= 10.0 * std::log(10.0);
  return g;
}

RadialGrid extend_grid(const OperatorParams& p, const RadialGrid& g,
                       double R_new) {
  if (!(R_new > g.R))
    throw std::invalid_argument("extend_grid: R_new must exceed R");
  RadialGrid out = g;
  const int n = g.n();
  const double h = g.nodes[n - 1] - g.nodes[n - 2];
  const int extra = static_cast<int>(std::ceil((R_new - g.R) / h - 1e-12));
  for (int i = 1; i <= extra; ++i) out.nodes.push_back(g.R + i * h);
  out.nodes.back() = g.R + extra * h;  // actual end; may exceed R_new slightly
  out.R = out.nodes.back();
  out.J_at_R = agmon_J(p, out.R, 1e-8);
  out.truncation_adequate = out.J_at_R >= 10.0 * std::log(10.0);
  return out;
}

DiscreteSystem assemble_H_mu(const OperatorParams& p, const RadialGrid& grid) {
  const int n = grid.n();
  if (n < 3) throw std::invalid_argument("assemble_H_mu: grid too small");
  const int nf = n - 1;

  DiscreteSystem sys;
  sys.grid = grid;
  sys.params = p;
  sys.stiff_diag.assign(nf, 0.0);
  sys.stiff_off.assign(nf - 1, 0.0);
  sys.elem_k.assign(n - 1, 0.0);
  sys.pot_diag.assign(nf, 0.0);
  sys.mass_diag.assign(nf, 0.0);

  const double Nm1 = p.dim_N - 1.0;
  auto lebesgue_w = [&](double r) { return std::pow(r, Nm1); };
  auto mu_w = [&](double r) {
    return std::pow(r, Nm1) / (1.0 + std::pow(r, p.alpha));
  };

  // Virtual origin cell [0, r_1]: the first hat extends by the constant 1,
  // contributing mass and potential but no stiffness.
  {
    const double r1 = grid.nodes[0];
    const double mid = 0.5 * r1;
    sys.mass_diag[0] += r1 * mu_w(mid);
    sys.pot_diag[0] += r1 * potential_U(p, mid) * mu_w(mid);
  }

  const double gauss_off = 0.5 / std::sqrt(3.0);
  for (int e = 0; e + 1 < n; ++e) {
    const double a = grid.nodes[e], b = grid.nodes[e + 1];
    const double h = b - a;
    if (!(h > 0.0))
      throw std::runtime_error("assemble_H_mu: nonpositive cell width");
    const double mid = 0.5 * (a + b);

    // Two-point Gauss for the stiffness weight integral.
    const double x1 = mid - gauss_off * h, x2 = mid + gauss_off * h;
    const double ik = 0.5 * h * (lebesgue_w(x1) + lebesgue_w(x2));
    if (!(ik > 0.0))
      throw std::runtime_error("assemble_H_mu: nonpositive quadrature weight");
    const double k = ik / (h * h);

    const double mhalf = 0.5 * h * mu_w(mid);
    const double phalf = 0.5 * h * potential_U(p, mid) * mu_w(mid);

    sys.elem_k[e] = k;
    sys.stiff_diag[e] += k;
    sys.mass_diag[e] += mhalf;
    sys.pot_diag[e] += phalf;
    if (e + 1 < nf) {  // neighbor is a free node
      sys.stiff_diag[e + 1] += k;
      sys.stiff_off[e] = -k;
      sys.mass_diag[e + 1] += mhalf;
      sys.pot_diag[e + 1] += phalf;
    }
  }

  for (double m : sys.mass_diag)
    if (!(m > 0.0))
      throw std::runtime_error("assemble_H_mu: nonpositive lumped mass");
  return sys;
}

void assemble_A_radial(const OperatorParams& p, DiscreteSystem& sys) {
  const int n = sys.grid.n();
  const int nf = n - 1;
  sys.drift_sub.assign(nf, 0.0);
  sys.drift_diag.assign(nf, 0.0);
  sys.drift_sup.assign(nf, 0.0);

  const auto& r = sys.grid.nodes;
  for (int i = 0; i < nf; ++i) {
    const double ri = r[i];
    // Left neighbor: mirrored ghost at -r_1 for the first row (even radial
    // extension), otherwise the previous node.
    const double hm = (i == 0) ? 2.0 * r[0] : ri - r[i - 1];
    const double hp = r[i + 1] - ri;

    const double Am = 2.0 / (hm * (hm + hp));
    const double A0 = -2.0 / (hm * hp);
    const double Ap = 2.0 / (hp * (hm + hp));
    const double Bm = -hp / (hm * (hm + hp));
    const double B0 = (hp - hm) / (hm * hp);
    const double Bp = hm / (hp * (hm + hp));

    const double ra = std::pow(ri, p.alpha);
    const double diff = 1.0 + ra;
    const double conv = diff * (p.dim_N - 1.0) / ri + p.b * std::pow(ri, p.alpha - 1.0);

    double sub = diff * Am + conv * Bm;
    double diag = diff * A0 + conv * B0 - p.c * std::pow(ri, p.beta);
    double sup = diff * Ap + conv * Bp;

    if (i == 0) {  // fold the ghost column into the diagonal
      diag += sub;
      sub = 0.0;
    }
    if (i + 1 == nf) sup = 0.0;  // Dirichlet neighbor

    sys.drift_sub[i] = sub;
    sys.drift_diag[i] = diag;
    sys.drift_sup[i] = sup;
  }
  sys.has_drift = true;
}

double mass_dot(const DiscreteSystem& sys, const std::vector<double>& u,
                const std::vector<double>& v) {
  double s = 0.0;
  for (int i = 0; i < sys.n_free(); ++i) s += sys.mass_diag[i] * u[i] * v[i];
  return s;
}

double mass_norm(const DiscreteSystem& sys, const std::vector<double>& u) {
  return std::sqrt(mass_dot(sys, u, u));
}

double form_h(const DiscreteSystem& sys, const std::vector<double>& v,
              const std::vector<double>& w) {
  const int nf = sys.n_free();
  double s = 0.0;
  // Element energies (v_i - v_{i+1})(w_i - w_{i+1}); the last element sees
  // the Dirichlet zero.  Avoids the cancellation of forming (K v) . w.
  for (int e = 0; e < nf; ++e) {
    const double dv = (e + 1 < nf) ? v[e] - v[e + 1] : v[e];
    const double dw = (e + 1 < nf) ? w[e] - w[e + 1] : w[e];
    s += sys.elem_k[e] * dv * dw;
  }
  for (int i = 0; i < nf; ++i) s += sys.pot_diag[i] * v[i] * w[i];
  return s;
}

SymTridiagonal symmetrized_system(const DiscreteSystem& sys) {
  const int nf = sys.n_free();
  SymTridiagonal T;
  T.diag.resize(nf);
  T.off.resize(nf - 1);
  for (int i = 0; i < nf; ++i)
    T.diag[i] = (sys.stiff_diag[i] + sys.pot_diag[i]) / sys.mass_diag[i];
  for (int i = 0; i + 1 < nf; ++i)
    T.off[i] = sys.stiff_off[i] /
               std::sqrt(sys.mass_diag[i] * sys.mass_diag[i + 1]);
  return T;
}

SimilarityReport similarity_transform_check(const DiscreteSystem& sys, int m) {
  if (!sys.has_drift)
    throw std::invalid_argument(
        "similarity_transform_check: drift matrix not assembled");
  const int nf = sys.n_free();
  if (m < 1 || m > nf / 10)
    throw std::invalid_argument("similarity_transform_check: bad m");

  SimilarityReport rep;

  // Symmetric picture: eigenvalues of -(K+P) against M.
  const SymTridiagonal S = symmetrized_system(sys);
  const auto nu_sym = smallest_eigenvalues(S, m);

  // Drift picture: balance the nonsymmetric tridiagonal into symmetric form.
  // The diagonal scaling obeys d_{i+1}/d_i = sqrt(sub_{i+1}/sup_i); the
  // factors are accumulated in log space to dodge over/underflow across
  // thousands of nodes.
  SymTridiagonal D;
  D.diag.resize(nf);
  D.off.resize(nf - 1);
  std::vector<double> logd(nf, 0.0);
  for (int i = 0; i < nf; ++i) D.diag[i] = -sys.drift_diag[i];
  for (int i = 0; i + 1 < nf; ++i) {
    const double prod = sys.drift_sup[i] * sys.drift_sub[i + 1];
    if (!(prod > 0.0))
      throw std::runtime_error(
          "similarity_transform_check: drift matrix not symmetrizable "
          "(off-diagonal product sign)");
    D.off[i] = -std::sqrt(prod);
    logd[i + 1] = logd[i] + 0.5 * (std::log(sys.drift_sub[i + 1]) -
                                   std::log(sys.drift_sup[i]));
  }
  const auto nu_drift = smallest_eigenvalues(D, m);

  rep.sym_eigenvalues.resize(m);
  rep.drift_eigenvalues.resize(m);
  double worst = 0.0;
  for (int j = 0; j < m; ++j) {
    rep.sym_eigenvalues[j] = -nu_sym[j];
    rep.drift_eigenvalues[j] = -nu_drift[j];
    worst = std::max(worst, std::abs(nu_sym[j] - nu_drift[j]) /
                                std::max(std::abs(nu_sym[j]), 1e-300));
  }
  rep.max_eig_rel_mismatch = worst;

  // Ground vectors: psi from the symmetric picture, Phi from the drift
  // picture; the conjugation identity says phi * Phi should reproduce psi.
  auto y_sym = inverse_iteration(S, nu_sym[0], {});
  auto y_drift = inverse_iteration(D, nu_drift[0], {});

  std::vector<double> psi(nf), phiPhi(nf);
  for (int i = 0; i < nf; ++i)
    psi[i] = y_sym[i] / std::sqrt(sys.mass_diag[i]);
  double logd_max = logd[0];
  for (double v : logd) logd_max = std::max(logd_max, v);
  for (int i = 0; i < nf; ++i) {
    const double Phi = y_drift[i] * std::exp(logd[i] - logd_max);
    phiPhi[i] = Phi * weight_phi(sys.params, sys.grid.nodes[i]);
  }
  const double npsi = mass_norm(sys, psi);
  const double nphi = mass_norm(sys, phiPhi);
  // Fix both signs by the largest-magnitude component of psi.
  int imax = 0;
  for (int i = 1; i < nf; ++i)
    if (std::abs(psi[i]) > std::abs(psi[imax])) imax = i;
  const double s1 = (psi[imax] > 0 ? 1.0 : -1.0) / npsi;
  const double s2 = (phiPhi[imax] > 0 ? 1.0 : -1.0) / nphi;
  double sup = 0.0, ref = 0.0;
  for (int i = 0; i < nf; ++i) {
    ref = std::max(ref, std::abs(psi[i] * s1));
    sup = std::max(sup, std::abs(psi[i] * s1 - phiPhi[i] * s2));
  }
  rep.ground_vector_mismatch = sup / ref;
  return rep;
}

}  // namespace kernellab
