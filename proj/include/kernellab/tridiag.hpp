#pragma once

#include <vector>

namespace kernellab {

// Symmetric tridiagonal matrix: diag has n entries, off has n-1.
struct SymTridiagonal {
  std::vector<double> diag;
  std::vector<double> off;

  int size() const { return static_cast<int>(diag.size()); }
};

// Number of eigenvalues strictly below x (Sturm count with pivot guard).
int sturm_count_below(const SymTridiagonal& T, double x);

// Gershgorin enclosure of the spectrum.
void gershgorin_bounds(const SymTridiagonal& T, double& lo, double& hi);

// The m smallest eigenvalues, ascending, each bisected to roughly machine
// resolution relative to the spectral spread.
std::vector<double> smallest_eigenvalues(const SymTridiagonal& T, int m);

// Inverse iteration at the given shift.  Starts from a deterministic vector,
// orthogonalises against `against` (unit vectors) each sweep, normalises to
// unit Euclidean length.  Throws after max_iter sweeps without convergence.
std::vector<double> inverse_iteration(const SymTridiagonal& T, double shift,
                                      const std::vector<std::vector<double>>& against,
                                      int max_iter = 50);

// Solve (sub, diag, sup) x = rhs for a general tridiagonal system by the
// Thomas algorithm.  sub[0] and sup[n-1] are ignored.
std::vector<double> thomas_solve(const std::vector<double>& sub,
                                 const std::vector<double>& diag,
                                 const std::vector<double>& sup,
                                 const std::vector<double>& rhs);

// Prefactored Thomas solver for repeated solves against the same matrix.
class TridiagFactor {
 public:
  TridiagFactor() = default;
  TridiagFactor(const std::vector<double>& sub, const std::vector<double>& diag,
                const std::vector<double>& sup);
  void solve(std::vector<double>& x) const;  // in place

 private:
  std::vector<double> low_;   // elimination multipliers
  std::vector<double> dinv_;  // inverse pivots
  std::vector<double> sup_;
};

}  // namespace kernellab
