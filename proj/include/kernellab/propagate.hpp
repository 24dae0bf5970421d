#pragma once

#include <vector>

#include "kernellab/discretize.hpp"
#include "kernellab/spectral.hpp"

namespace kernellab {

// One weighted-kernel slice: values of k_mu(t, . , r_j) (or k after picture
// conversion) over the free nodes for a fixed source node j.
struct KernelSlice {
  enum class Picture { k_mu, k };
  enum class Method { stepping, expansion };

  double t = 0.0;
  int source_index = 0;
  double source_r = 0.0;
  Picture picture = Picture::k_mu;
  Method method = Method::stepping;
  std::vector<double> values;
};

// Crank-Nicolson stepper for M du/dt = -(K+P) u with fixed dt.  The first
// `smoothing_halfsteps` half-intervals are integrated by backward Euler:
// plain Crank-Nicolson barely damps the stiffest modes, so a delta-like u0
// would otherwise keep grid-scale noise for all time.  The startup is
// second-order harmless for smooth data.  smoothing_halfsteps must be even.
class Propagator {
 public:
  Propagator(const DiscreteSystem& sys, double dt);

  // Advance u0 to time t (t/dt must be integral; t = 0 returns u0).
  std::vector<double> propagate(std::vector<double> u0, double t,
                                int smoothing_halfsteps = 4) const;

  // Snapshots at each time in ascending t_list (single pass).
  std::vector<std::vector<double>> snapshots(std::vector<double> u0,
                                             const std::vector<double>& t_list,
                                             int smoothing_halfsteps = 4) const;

  double dt() const { return dt_; }

 private:
  void backward_euler_halfstep(std::vector<double>& u) const;
  void cn_step(std::vector<double>& u) const;

  const DiscreteSystem* sys_;
  double dt_;
  TridiagFactor lhs_;  // M + (dt/2)(K+P)
  std::vector<double> rhs_sub_, rhs_diag_, rhs_sup_;  // M - (dt/2)(K+P)
};

std::vector<double> propagate_mu(const DiscreteSystem& sys,
                                 std::vector<double> u0, double t, double dt,
                                 int smoothing_halfsteps = 4);

// Kernel column from a discrete delta at node j (u0 = e_j / M_jj), stepped
// to time t.
KernelSlice kernel_column(const DiscreteSystem& sys, int j, double t,
                          double dt);

// Same, snapshotted at several times in one pass.
std::vector<KernelSlice> kernel_column_snapshots(
    const DiscreteSystem& sys, const Propagator& prop, int j,
    const std::vector<double>& t_list);

// Truncated-expansion column (all i at once).
KernelSlice expansion_column(const DiscreteSystem& sys, const EigenData& eig,
                             int j, double t);

// Picture conversion k(t, x, y) = k_mu(t, x, y) / (phi(x) phi(y)^-1 (1+|y|^a)).
KernelSlice to_k(const DiscreteSystem& sys, const KernelSlice& slice);
KernelSlice from_k(const DiscreteSystem& sys, const KernelSlice& slice);

// max over sampled ordered pairs of the relative Chapman-Kolmogorov defect
//   k_mu(t1+t2, a, b) vs sum_l k_mu(t1, a, l) k_mu(t2, l, b) M_l.
struct ChapmanKolmogorovReport {
  double max_rel_err = 0.0;
  int pairs = 0;
};

ChapmanKolmogorovReport chapman_kolmogorov_check(
    const DiscreteSystem& sys, double t1, double t2,
    const std::vector<int>& sample_nodes, double dt);

}  // namespace kernellab
