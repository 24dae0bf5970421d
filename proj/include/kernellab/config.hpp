#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "kernellab/discretize.hpp"
#include "kernellab/model.hpp"

namespace kernellab {

// Configuration / input errors that map to CLI exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  OperatorParams params;  // validated, xi/gamma filled

  // [grid]
  double R = 20.0;
  int n = 4000;
  RadialGrid::Grading grading = RadialGrid::Grading::geometric;
  double ratio = 1.0015;

  // [solver]
  int m = 8;
  double dt = 1e-3;
  double quad_rel_tol = 1e-8;
  int k_terms = 0;  // 0 = smallest admissible

  // [verify]
  std::vector<double> t_grid = {0.05, 0.1, 0.2, 0.5, 1.0};
  std::vector<double> t_grid_diag = {0.5, 1.0, 1.5, 2.0};
  int probe_count = 30;
  double probe_r_min = 0.05;

  // [output]
  std::string out_dir = "out";
  bool emit_plot_data = false;

  bool operator==(const RunConfig& other) const;
};

// Parse `key = value` lines under [params] [grid] [solver] [verify] [output]
// sections, with `#` comments.  Unknown keys, duplicate keys (both line
// numbers reported) and malformed values raise ConfigError with the line
// number; parameter validation delegates to validate_params.
RunConfig parse_config(const std::string& text);

RunConfig parse_config_file(const std::string& path);

// Canonical text form; parse_config(serialize_config(c)) == c exactly.
std::string serialize_config(const RunConfig& c);

}  // namespace kernellab
