#include "kernellab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kernellab/tridiag.hpp"

namespace kernellab {

namespace {

// Backward-error residual: ||(K+P)psi + lambda M psi||_2 normalized by the
// same sum with every term replaced by its magnitude.  The row sums cancel
// heavily (that is the point of the check), and on strongly graded meshes
// the magnitude scale is the only normalization without a roundoff floor:
// a converged pair sits at ~1e-16 here, a polluted one at >= 1e-6.
double eigen_residual(const DiscreteSystem& sys, const std::vector<double>& psi,
                      double lambda) {
  const int nf = sys.n_free();
  long double num = 0.0L, den = 0.0L;
  for (int i = 0; i < nf; ++i) {
    const long double d = (long double)(sys.stiff_diag[i] + sys.pot_diag[i]) * psi[i];
    long double row = d, mag = std::abs(d);
    if (i > 0) {
      const long double o = (long double)sys.stiff_off[i - 1] * psi[i - 1];
      row += o;
      mag += std::abs(o);
    }
    if (i + 1 < nf) {
      const long double o = (long double)sys.stiff_off[i] * psi[i + 1];
      row += o;
      mag += std::abs(o);
    }
    const long double mpsi = (long double)lambda * sys.mass_diag[i] * psi[i];
    row += mpsi;
    mag += std::abs(mpsi);
    num += row * row;
    den += mag * mag;
  }
  return (double)std::sqrt(num / den);
}

}  // namespace

EigenData eigensolve(const DiscreteSystem& sys, int m) {
  const int nf = sys.n_free();
  if (m < 1 || m > nf / 10)
    throw std::invalid_argument("eigensolve: m must satisfy 1 <= m <= n/10");

  const SymTridiagonal T = symmetrized_system(sys);
  const auto nu = smallest_eigenvalues(T, m);

  EigenData out;
  out.eigenvalues.resize(m);
  out.psi.resize(m);
  out.residual_norms.resize(m);

  std::vector<std::vector<double>> found;  // symmetrized eigenvectors
  for (int j = 0; j < m; ++j) {
    // Orthogonalize only against close-by eigenvectors; far ones are
    // separated by the shift itself.
    std::vector<std::vector<double>> against;
    for (int l = 0; l < j; ++l)
      if (std::abs(nu[l] - nu[j]) < 1e-6 * (std::abs(nu[j]) + 1.0))
        against.push_back(found[l]);
    auto y = inverse_iteration(T, nu[j], against);
    found.push_back(y);

    std::vector<double> psi(nf);
    for (int i = 0; i < nf; ++i) psi[i] = y[i] / std::sqrt(sys.mass_diag[i]);
    const double nrm = mass_norm(sys, psi);
    for (double& v : psi) v /= nrm;

    // Rayleigh polish through the form: no stiffness-row cancellation.
    const double lambda = -form_h(sys, psi, psi) / mass_dot(sys, psi, psi);

    // Deterministic sign: largest-magnitude component positive.
    int imax = 0;
    for (int i = 1; i < nf; ++i)
      if (std::abs(psi[i]) > std::abs(psi[imax])) imax = i;
    if (psi[imax] < 0.0)
      for (double& v : psi) v = -v;

    out.eigenvalues[j] = lambda;
    out.psi[j] = std::move(psi);
    out.residual_norms[j] = eigen_residual(sys, out.psi[j], lambda);
    if (out.residual_norms[j] > 1e-10)
      throw std::runtime_error("eigensolve: eigenpair residual above 1e-10");
  }

  for (int j = 0; j + 1 < m; ++j)
    if (!(out.eigenvalues[j] > out.eigenvalues[j + 1]))
      throw std::runtime_error("eigensolve: eigenvalues not strictly ordered");

  if (out.eigenvalues[0] >= 0.0)
    throw std::runtime_error(
        "eigensolve: lambda_0 >= 0; discretization too coarse for these "
        "parameters");

  // Ground state must be one-signed on the grid.
  for (double v : out.psi[0])
    if (!(v > 0.0))
      throw std::runtime_error("eigensolve: ground state changes sign");

  return out;
}

std::vector<double> to_drift_picture(const DiscreteSystem& sys,
                                     const std::vector<double>& psi) {
  const int nf = sys.n_free();
  std::vector<double> Phi(nf);
  for (int i = 0; i < nf; ++i)
    Phi[i] = psi[i] / weight_phi(sys.params, sys.grid.nodes[i]);
  return Phi;
}

GroundState ground_state(const DiscreteSystem& sys, const EigenData& eig) {
  GroundState g;
  g.lambda0 = eig.eigenvalues.at(0);
  g.psi0 = eig.psi.at(0);
  g.Phi0 = to_drift_picture(sys, g.psi0);
  return g;
}

double expansion_kernel_mu(const EigenData& eig, double t, int i, int j,
                           double* trunc_est) {
  if (!(t > 0.0))
    throw std::invalid_argument("expansion_kernel_mu: t must be positive");
  const int m = static_cast<int>(eig.eigenvalues.size());
  double s = 0.0, mag = 0.0;
  for (int l = 0; l < m; ++l) {
    const double term = eig.psi[l][i] * eig.psi[l][j];
    s += std::exp(eig.eigenvalues[l] * t) * term;
    mag = std::max(mag, std::abs(term));
  }
  if (trunc_est) *trunc_est = std::exp(eig.eigenvalues[m - 1] * t) * mag;
  return s;
}

ConvergenceReport convergence_study(const OperatorParams& p, double R,
                                    RadialGrid::Grading grading, double ratio,
                                    const std::vector<int>& n_list,
                                    double R_ext_factor) {
  if (n_list.size() < 3)
    throw std::invalid_argument("convergence_study: need >= 3 levels");
  ConvergenceReport rep;
  rep.n_list = n_list;
  rep.R = R;

  // Hold the grading profile (total growth across the mesh) fixed while n
  // changes, so the levels are geometrically similar.
  const double growth =
      (grading == RadialGrid::Grading::geometric)
          ? std::pow(ratio, n_list.back() - 1)
          : 1.0;

  RadialGrid finest;
  for (std::size_t l = 0; l < n_list.size(); ++l) {
    const int n = n_list[l];
    double r = 1.0;
    if (grading == RadialGrid::Grading::geometric)
      r = std::pow(growth, 1.0 / (n - 1));
    const RadialGrid g = build_grid(p, R, n, grading, r);
    const DiscreteSystem sys = assemble_H_mu(p, g);
    const EigenData eig = eigensolve(sys, 1);
    rep.lambda0.push_back(eig.eigenvalues[0]);
    if (l + 1 == n_list.size()) finest = g;
  }

  const std::size_t L = rep.lambda0.size();
  const double d1 = rep.lambda0[L - 2] - rep.lambda0[L - 3];
  const double d2 = rep.lambda0[L - 1] - rep.lambda0[L - 2];
  rep.observed_order = std::log2(std::abs(d1 / d2));
  rep.extrapolated = rep.lambda0[L - 1] + d2 / 3.0;  // second-order Richardson

  // Truncation sensitivity: extend the finest mesh (identical interior
  // cells) and compare.
  const RadialGrid ext = extend_grid(p, finest, R * R_ext_factor);
  rep.R_ext = ext.R;
  const DiscreteSystem sys_ext = assemble_H_mu(p, ext);
  const EigenData eig_ext = eigensolve(sys_ext, 1);
  rep.truncation_rel_diff =
      std::abs(eig_ext.eigenvalues[0] - rep.lambda0.back()) /
      std::abs(rep.lambda0.back());
  return rep;
}

}  // namespace kernellab
