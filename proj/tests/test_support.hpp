#pragma once

// Shared fixtures.  The b=1 system on the default grid takes ~50 ms to
// assemble and solve, so it is built once and reused across test files.

#include "kernellab/discretize.hpp"
#include "kernellab/spectral.hpp"

namespace testsup {

struct Fixture {
  kernellab::OperatorParams params;
  kernellab::DiscreteSystem sys;
  kernellab::EigenData eig;
};

inline Fixture make_fixture(int dim_N, double alpha, double beta, double b,
                            double c, double R, int n, double ratio, int m) {
  Fixture f;
  f.params = kernellab::validate_params(dim_N, alpha, beta, b, c);
  kernellab::RadialGrid g = kernellab::build_grid(
      f.params, R, n, kernellab::RadialGrid::Grading::geometric, ratio);
  f.sys = kernellab::assemble_H_mu(f.params, g);
  f.eig = kernellab::eigensolve(f.sys, m);
  return f;
}

// b = 1 reference on the default grid, 8 modes.
inline const Fixture& ref_b1() {
  static const Fixture f = make_fixture(3, 3, 4, 1, 1, 20.0, 4000, 1.0015, 8);
  return f;
}

// b = 0 on a coarser grid; phi == 1 makes picture identities exact.
inline const Fixture& small_b0() {
  static const Fixture f = make_fixture(3, 3, 4, 0, 1, 20.0, 800, 1.0075, 6);
  return f;
}

}  // namespace testsup
