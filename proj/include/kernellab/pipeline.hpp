#pragma once

#include <stdexcept>
#include <string>

#include "kernellab/config.hpp"

namespace kernellab {

// An independent cross-check disagreed with a main solver; maps to exit 2.
struct OracleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Runs one CLI command (eigen | kernel | wkb | verify | report) against a
// parsed configuration.  Returns the exit code: 0 all checks passed, 1 at
// least one check failed.  Infrastructure problems (bad config, I/O, solver
// breakdown, oracle disagreement) are thrown and map to exit 2 in the CLI.
int run_command(const std::string& command, const RunConfig& cfg);

// Runs `command` for every config listed in sweep_file (one path per line,
// `#` comments).  Outputs land in <out_base>/<config-stem>/ when out_base is
// nonempty, else in each config's own out_dir/<stem>.  Returns the worst
// exit code.
int run_sweep(const std::string& command, const std::string& sweep_file,
              const std::string& out_base, bool emit_plot_data);

}  // namespace kernellab
