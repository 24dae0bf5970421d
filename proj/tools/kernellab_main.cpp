// Command-line front end.  Exit codes: 0 all checks passed, 1 at least one
// verifier failed, 2 infrastructure trouble (bad config, solver breakdown,
// oracle disagreement).

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "kernellab/config.hpp"
#include "kernellab/io.hpp"
#include "kernellab/pipeline.hpp"

int main(int argc, char** argv) {
  CLI::App app{"radial kernel laboratory: spectra, WKB comparators and "
               "heat-kernel bound verification"};
  app.require_subcommand(0, 0);

  std::string command;
  std::string config_path;
  std::string out_override;
  std::string sweep_path;
  bool emit_plot_data = false;

  app.add_option("command", command, "one of: eigen kernel wkb verify report")
      ->required()
      ->check(CLI::IsMember({"eigen", "kernel", "wkb", "verify", "report"}));
  app.add_option("--config", config_path, "INI configuration file");
  app.add_option("--out", out_override, "override [output] out_dir");
  app.add_option("--sweep", sweep_path,
                 "file listing one config path per line; runs the command "
                 "for each, outputs under --out/<config stem>");
  app.add_flag("--emit-plot-data", emit_plot_data,
               "also write plain x/y series for plotting");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help lands here with code 0; anything else is a usage error.
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (!sweep_path.empty())
      return kernellab::run_sweep(command, sweep_path, out_override,
                                  emit_plot_data);

    if (config_path.empty()) {
      std::fprintf(stderr, "error: --config is required (or --sweep)\n");
      return 2;
    }
    kernellab::RunConfig cfg = kernellab::parse_config_file(config_path);
    if (!out_override.empty()) cfg.out_dir = out_override;
    if (emit_plot_data) cfg.emit_plot_data = true;
    return kernellab::run_command(command, cfg);
  } catch (const kernellab::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
  } catch (const kernellab::OracleError& e) {
    std::fprintf(stderr, "oracle error: %s\n", e.what());
  } catch (const kernellab::IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
  }
  return 2;
}
