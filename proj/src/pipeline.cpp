#include "kernellab/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "kernellab/asymptotics.hpp"
#include "kernellab/io.hpp"
#include "kernellab/quadrature.hpp"
#include "kernellab/verify.hpp"

namespace kernellab {

namespace {

DiscreteSystem assemble_from(const RunConfig& cfg) {
  const RadialGrid g =
      build_grid(cfg.params, cfg.R, cfg.n, cfg.grading, cfg.ratio);
  return assemble_H_mu(cfg.params, g);
}

std::vector<double> log_spaced(double lo, double hi, int count) {
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i)
    out[i] = lo * std::pow(hi / lo, i / static_cast<double>(count - 1));
  return out;
}

int run_eigen(const RunConfig& cfg) {
  DiscreteSystem sys = assemble_from(cfg);
  const EigenData eig = eigensolve(sys, cfg.m);

  std::vector<int> ladder;
  if (cfg.n >= 400)
    ladder = {cfg.n / 4, cfg.n / 2, cfg.n};
  else
    ladder = {cfg.n, 2 * cfg.n, 4 * cfg.n};
  const ConvergenceReport rep = convergence_study(
      cfg.params, cfg.R, cfg.grading, cfg.ratio, ladder, 1.5);

  write_file(cfg.out_dir, "eigenvalues.tsv", tsv_eigenvalues(eig));
  write_file(cfg.out_dir, "eigenvectors.tsv", tsv_eigenvectors(sys, eig));
  write_file(cfg.out_dir, "convergence.tsv", tsv_convergence(rep));

  std::ostringstream sum;
  sum << "lambda0\t" << format_double(eig.eigenvalues[0]) << "\n";
  sum << "J_at_R\t" << format_double(sys.grid.J_at_R) << "\n";
  sum << "truncation_adequate\t" << (sys.grid.truncation_adequate ? "true" : "false")
      << "\n";
  write_file(cfg.out_dir, "eigen_summary.txt", sum.str());

  if (cfg.emit_plot_data) {
    const GroundState gs = ground_state(sys, eig);
    std::vector<double> r(sys.n_free());
    for (int i = 0; i < sys.n_free(); ++i) r[i] = sys.node(i);
    write_file(cfg.out_dir, "plot_ground_state.tsv",
               tsv_series("r", "psi0", r, gs.psi0));
    write_file(cfg.out_dir, "plot_ground_state_drift.tsv",
               tsv_series("r", "Phi0", r, gs.Phi0));
  }
  write_file(cfg.out_dir, "metadata.txt", metadata_text());
  return 0;
}

int run_kernel(const RunConfig& cfg) {
  DiscreteSystem sys = assemble_from(cfg);
  const double r_lo = std::max(cfg.probe_r_min, sys.node(0) * 1.01);
  const auto sources = pick_probe_sources(sys, 5, r_lo, 0.75 * sys.grid.R);
  Propagator prop(sys, cfg.dt);
  for (std::size_t si = 0; si < sources.size(); ++si) {
    const auto snaps =
        kernel_column_snapshots(sys, prop, sources[si], cfg.t_grid);
    for (std::size_t ti = 0; ti < snaps.size(); ++ti) {
      const std::string stem =
          "kernel_s" + std::to_string(si) + "_t" + std::to_string(ti);
      write_file(cfg.out_dir, stem + "_kmu.tsv",
                 tsv_kernel_slice(sys, snaps[ti]));
      write_file(cfg.out_dir, stem + "_k.tsv",
                 tsv_kernel_slice(sys, to_k(sys, snaps[ti])));
    }
  }
  write_file(cfg.out_dir, "metadata.txt", metadata_text());
  return 0;
}

int run_wkb(const RunConfig& cfg) {
  const OperatorParams& p = cfg.params;
  const int k = cfg.k_terms > 0 ? cfg.k_terms : default_k_terms(p);

  DiscreteSystem sys = assemble_from(cfg);
  const EigenData eig = eigensolve(sys, 1);
  const double lambda0 = eig.eigenvalues[0];

  const double expected = -std::min(k * p.xi, p.alpha);
  const auto radii = log_spaced(5.0, 50.0, 40);

  bool all_ok = true;
  int tag = 0;
  for (double lambda : {0.0, 2.0 * lambda0}) {
    const WkbModel model = wkb_coefficients(p, lambda, k);
    std::vector<double> lr, lres;
    for (double r : radii) {
      const double res = std::abs(r * r * wkb_residual_g1(model, r) - lambda);
      lr.push_back(std::log(r));
      lres.push_back(std::log(res));
    }
    const double slope = fit_affine(lr, lres).b;
    const std::string stem = "wkb_" + std::to_string(tag++);
    write_file(cfg.out_dir, stem + "_coefficients.tsv",
               tsv_wkb_coefficients(model));
    write_file(cfg.out_dir, stem + "_residual.tsv",
               tsv_wkb_residual(model, radii, slope, expected));
    if (cfg.emit_plot_data) {
      std::vector<double> res(radii.size());
      for (std::size_t i = 0; i < radii.size(); ++i) res[i] = std::exp(lres[i]);
      write_file(cfg.out_dir, stem + "_plot_residual.tsv",
                 tsv_series("r", "abs_r2_g1_minus_lambda", radii, res));
    }
    if (std::abs(slope - expected) > 0.3) all_ok = false;
  }
  write_file(cfg.out_dir, "metadata.txt", metadata_text());
  return all_ok ? 0 : 1;
}

void run_oracle_gates(const RunConfig& cfg, const EigenData& eig) {
  const OperatorParams& p = cfg.params;

  // Quadrature: adaptive versus composite Gauss on the Agmon integral.
  {
    const double ja = agmon_J(p, cfg.R, cfg.quad_rel_tol);
    const double jg = integrate_gauss_composite(
        [&](double r) { return std::sqrt(h_fun(p, r)); }, 1.0, cfg.R, 4000);
    if (std::abs(ja - jg) > 1e-8 * std::abs(jg))
      throw OracleError("oracle disagreement: adaptive vs composite Gauss "
                        "quadrature of the decay integral");
  }

  // Small dense cross-check of the Sturm bisection path.
  {
    const RadialGrid g = build_grid(p, cfg.R, 200, RadialGrid::Grading::uniform);
    const DiscreteSystem small = assemble_H_mu(p, g);
    const SymTridiagonal T = symmetrized_system(small);
    const auto sturm = smallest_eigenvalues(T, 5);
    const auto dense = oracle_dense_eigen(T);
    const double scale =
        std::max(std::abs(dense.front()), std::abs(dense.back()));
    for (int j = 0; j < 5; ++j)
      if (std::abs(sturm[j] - dense[j]) > 1e-10 * scale)
        throw OracleError(
            "oracle disagreement: Sturm bisection vs dense rotation "
            "eigenvalues on the downsampled system");
  }

  // Shooting cross-check of the ground eigenvalue.
  {
    const double shot = oracle_shooting_lambda0(p, cfg.R);
    const double lam = eig.eigenvalues[0];
    if (std::abs(shot - lam) > 1e-5 * std::abs(lam))
      throw OracleError(
          "oracle disagreement: shooting lambda0 = " + format_double(shot) +
          " vs assembled-system lambda0 = " + format_double(lam));
  }
}

int run_verify(const RunConfig& cfg) {
  DiscreteSystem sys = assemble_from(cfg);
  const EigenData eig = eigensolve(sys, std::max(cfg.m, 5));

  run_oracle_gates(cfg, eig);

  const double r_lo = std::max(cfg.probe_r_min, sys.node(0) * 1.01);
  const auto sources =
      pick_probe_sources(sys, cfg.probe_count, r_lo, 0.75 * sys.grid.R);
  const auto columns = kernel_probe_columns(sys, sources, cfg.t_grid, cfg.dt);

  std::vector<BoundFit> records;
  records.push_back(verify_ground_state_bounds(sys, eig));
  records.push_back(
      verify_intrinsic_ultracontractivity(sys, eig, columns, cfg.t_grid));
  {
    const auto both = verify_kernel_upper_bounds(sys, eig, columns, cfg.t_grid);
    records.insert(records.end(), both.begin(), both.end());
  }
  records.push_back(
      verify_on_diagonal_lower(sys, eig, sources, cfg.t_grid_diag));
  records.push_back(verify_log_sobolev(sys, eig));
  records.push_back(verify_sobolev_potential(sys, eig));
  records.push_back(verify_eigenfunction_decay(sys, eig));

  std::ostringstream jsonl, summary;
  bool all = true;
  for (const auto& rec : records) {
    jsonl << json_record(rec) << "\n";
    summary << (rec.passed ? "PASS" : "FAIL") << "\t" << rec.id << "\t"
            << "min_slack=" << format_double(rec.min_slack) << "\n";
    all = all && rec.passed;
  }
  summary << (all ? "ALL PASSED" : "FAILURES PRESENT") << "\t" << records.size()
          << " records\n";
  write_file(cfg.out_dir, "records.jsonl", jsonl.str());
  write_file(cfg.out_dir, "verify_summary.txt", summary.str());

  if (cfg.emit_plot_data) {
    std::vector<double> r(sys.n_free());
    for (int i = 0; i < sys.n_free(); ++i) r[i] = sys.node(i);
    write_file(cfg.out_dir, "plot_ground_state.tsv",
               tsv_series("r", "psi0", r, eig.psi[0]));
    const auto& mid = columns[columns.size() / 2];
    for (std::size_t ti = 0; ti < mid.size(); ++ti)
      write_file(cfg.out_dir,
                 "plot_kernel_t" + std::to_string(ti) + ".tsv",
                 tsv_series("r", "k_mu", r, mid[ti].values));
  }
  write_file(cfg.out_dir, "metadata.txt", metadata_text());
  return all ? 0 : 1;
}

int run_report(const RunConfig& cfg) {
  namespace fs = std::filesystem;
  const fs::path rec_path = fs::path(cfg.out_dir) / "records.jsonl";
  std::ifstream in(rec_path);
  if (!in)
    throw IoError("report: no records at " + rec_path.string() +
                  " (run verify first)");

  std::ostringstream rep;
  rep << "id\tpassed\tmin_slack\n";
  std::string line;
  int total = 0, passed = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const std::exception& e) {
      throw IoError("report: malformed record: " + std::string(e.what()));
    }
    ++total;
    const bool ok = j.at("passed").get<bool>();
    if (ok) ++passed;
    rep << j.at("id").get<std::string>() << "\t" << (ok ? "true" : "false")
        << "\t" << format_double(j.at("min_slack").get<double>()) << "\n";
  }
  if (total == 0) throw IoError("report: records file is empty");

  for (const char* extra : {"eigen_summary.txt", "convergence.tsv"}) {
    const fs::path path = fs::path(cfg.out_dir) / extra;
    if (fs::exists(path)) {
      std::ifstream xin(path);
      std::stringstream ss;
      ss << xin.rdbuf();
      rep << "\n# " << extra << "\n" << ss.str();
    }
  }
  rep << "\nverdict\t" << (passed == total ? "ALL PASSED" : "FAILURES PRESENT")
      << "\t" << passed << "/" << total << "\n";
  write_file(cfg.out_dir, "report.txt", rep.str());
  std::fputs(rep.str().c_str(), stdout);
  return passed == total ? 0 : 1;
}

}  // namespace

int run_command(const std::string& command, const RunConfig& cfg) {
  if (command == "eigen") return run_eigen(cfg);
  if (command == "kernel") return run_kernel(cfg);
  if (command == "wkb") return run_wkb(cfg);
  if (command == "verify") return run_verify(cfg);
  if (command == "report") return run_report(cfg);
  throw ConfigError("unknown command: " + command);
}

int run_sweep(const std::string& command, const std::string& sweep_file,
              const std::string& out_base, bool emit_plot_data) {
  std::ifstream in(sweep_file);
  if (!in) throw ConfigError("cannot open sweep file: " + sweep_file);
  int worst = 0;
  std::string line;
  int n_configs = 0;
  while (std::getline(in, line)) {
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    // trim
    const std::size_t a = line.find_first_not_of(" \t\r");
    if (a == std::string::npos) continue;
    const std::size_t b = line.find_last_not_of(" \t\r");
    std::filesystem::path path = line.substr(a, b - a + 1);
    if (path.is_relative())
      path = std::filesystem::path(sweep_file).parent_path() / path;

    RunConfig cfg = parse_config_file(path.string());
    const std::string stem = std::filesystem::path(path).stem().string();
    cfg.out_dir = (out_base.empty() ? cfg.out_dir : out_base) + "/" + stem;
    if (emit_plot_data) cfg.emit_plot_data = true;
    worst = std::max(worst, run_command(command, cfg));
    ++n_configs;
  }
  if (n_configs == 0) throw ConfigError("sweep file lists no configs");
  return worst;
}

}  // namespace kernellab
