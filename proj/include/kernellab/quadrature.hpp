#pragma once

#include <functional>

namespace kernellab {

// Adaptive Simpson integration with a relative-error target.  Throws
// std::runtime_error if the subdivision limit is reached before the local
// error estimates fall under budget.
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double rel_tol, int max_depth = 60);

// Composite 5-point Gauss-Legendre rule on `panels` uniform panels.  Slow and
// deliberately simple; serves as the independent cross-check for the adaptive
// integrator.
double integrate_gauss_composite(const std::function<double(double)>& f,
                                 double a, double b, int panels);

}  // namespace kernellab
