#pragma once

#include <string>
#include <vector>

#include "kernellab/model.hpp"
#include "kernellab/tridiag.hpp"

namespace kernellab {

// Radial mesh on (0, R].  There is no node at the origin: the first node
// doubles as the width of a virtual origin cell, and the left end carries a
// natural (zero-flux) condition while r = R is a Dirichlet node.
struct RadialGrid {
  enum class Grading { uniform, geometric };

  std::vector<double> nodes;  // ascending, nodes.back() == R
  Grading grading = Grading::uniform;
  double ratio = 1.0;  // step ratio (geometric grading only)
  double R = 0.0;
  double J_at_R = 0.0;            // Agmon distance to the truncation radius
  bool truncation_adequate = true;  // exp(-J(R)) <= 1e-10

  int n() const { return static_cast<int>(nodes.size()); }
};

// Node placement rules, exposed separately from the validated builder.
// Uniform: r_1 = R/(10 n), then equal steps up to r_n = R.
// Geometric: cell widths grow by `ratio` starting from the virtual origin
// cell, so r_1 equals the first width and the last/first width ratio is
// ratio^(n-1).
std::vector<double> uniform_nodes(double R, int n);
std::vector<double> geometric_nodes(double R, int n, double ratio);

// Validated builder: R >= 10, n >= 100, geometric ratio in (1, 1.1].
RadialGrid build_grid(const OperatorParams& p, double R, int n,
                      RadialGrid::Grading grading, double ratio = 1.0);

// Same interior cells, extended to R_new > R by uniform cells of the last
// width.  Isolates truncation effects from mesh effects.
RadialGrid extend_grid(const OperatorParams& p, const RadialGrid& g,
                       double R_new);

// Tridiagonal systems over the free nodes r_1 .. r_{n-1} (the Dirichlet node
// is eliminated).  The symmetric picture stores
//   stiffness   K_ij = int grad(hat_i) grad(hat_j) r^(N-1) dr,
//   potential   P_ii = lumped int U hat_i r^(N-1)/(1+r^alpha) dr,
//   mass        M_ii = lumped int hat_i r^(N-1)/(1+r^alpha) dr,
// so the generalized problem (K + P) psi = -lambda M psi discretizes the
// weighted operator.  The drift picture is the same operator before
// conjugation, discretized by centered finite differences.
struct DiscreteSystem {
  RadialGrid grid;
  OperatorParams params;

  std::vector<double> stiff_diag, stiff_off;
  std::vector<double> elem_k;  // per-element stiffness weight, n-1 entries
  std::vector<double> pot_diag;
  std::vector<double> mass_diag;

  bool has_drift = false;
  std::vector<double> drift_sub, drift_diag, drift_sup;

  int n_free() const { return static_cast<int>(mass_diag.size()); }
  double node(int i) const { return grid.nodes[i]; }
};

DiscreteSystem assemble_H_mu(const OperatorParams& p, const RadialGrid& grid);

// Adds the drift-picture finite-difference matrix (second-order centered
// stencils on the graded mesh; even reflection through the origin on the
// first row).
void assemble_A_radial(const OperatorParams& p, DiscreteSystem& sys);

// Discrete mass inner product / norm over free nodes.
double mass_dot(const DiscreteSystem& sys, const std::vector<double>& u,
                const std::vector<double>& v);
double mass_norm(const DiscreteSystem& sys, const std::vector<double>& u);

// Energy form h(v, w) = v' (K + P) w over free-node vectors, accumulated
// element-wise (no cancellation between the stiffness terms).
double form_h(const DiscreteSystem& sys, const std::vector<double>& v,
              const std::vector<double>& w);

// Mass-symmetrized tridiagonal M^-1/2 (K + P) M^-1/2; its j-th smallest
// eigenvalue is -lambda_j.
SymTridiagonal symmetrized_system(const DiscreteSystem& sys);

// Agreement between the drift discretization and the conjugated symmetric
// one: both spectra (first m) and the ground vectors after applying the
// weight.  Checks that the two discretizations converge to the same operator.
struct SimilarityReport {
  std::vector<double> sym_eigenvalues;    // lambda, descending
  std::vector<double> drift_eigenvalues;  // lambda, descending
  double max_eig_rel_mismatch = 0.0;
  double ground_vector_mismatch = 0.0;  // sup norm, both normalized
};

SimilarityReport similarity_transform_check(const DiscreteSystem& sys, int m);

}  // namespace kernellab
