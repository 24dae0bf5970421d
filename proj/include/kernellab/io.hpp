#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "kernellab/asymptotics.hpp"
#include "kernellab/discretize.hpp"
#include "kernellab/propagate.hpp"
#include "kernellab/spectral.hpp"
#include "kernellab/verify.hpp"

namespace kernellab {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shortest exact decimal form (%.17g): identical config -> identical bytes.
std::string format_double(double x);

// Tab-separated tables.  All numbers via format_double.
std::string tsv_eigenvalues(const EigenData& eig);
std::string tsv_eigenvectors(const DiscreteSystem& sys, const EigenData& eig);
std::string tsv_kernel_slice(const DiscreteSystem& sys, const KernelSlice& s);
std::string tsv_convergence(const ConvergenceReport& rep);
std::string tsv_wkb_coefficients(const WkbModel& m);
// rows r, |r^2 g1 - lambda| plus the fitted and expected log-log slopes
std::string tsv_wkb_residual(const WkbModel& m, const std::vector<double>& radii,
                             double fitted_slope, double expected_slope);

// One flat JSON object (single line, insertion order preserved).
std::string json_record(const BoundFit& f);

// Two-column plot series.
std::string tsv_series(const std::string& xname, const std::string& yname,
                       const std::vector<double>& x,
                       const std::vector<double>& y);

// Creates parent directories as needed; throws IoError on failure.
void write_file(const std::string& dir, const std::string& name,
                const std::string& content);

// Wall-clock stamp and tool identity; kept out of the data files so those
// stay byte-reproducible.
std::string metadata_text();

}  // namespace kernellab
