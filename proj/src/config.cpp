#include "kernellab/config.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace kernellab {

bool RunConfig::operator==(const RunConfig& o) const {
  return params.dim_N == o.params.dim_N && params.alpha == o.params.alpha &&
         params.beta == o.params.beta && params.b == o.params.b &&
         params.c == o.params.c && R == o.R && n == o.n &&
         grading == o.grading && ratio == o.ratio && m == o.m && dt == o.dt &&
         quad_rel_tol == o.quad_rel_tol && k_terms == o.k_terms &&
         t_grid == o.t_grid && t_grid_diag == o.t_grid_diag &&
         probe_count == o.probe_count && probe_r_min == o.probe_r_min &&
         out_dir == o.out_dir && emit_plot_data == o.emit_plot_data;
}

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& v, int line) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) fail(line, "trailing characters in number '" + v + "'");
    return x;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    fail(line, "expected a number, got '" + v + "'");
  }
}

int parse_int(const std::string& v, int line) {
  try {
    std::size_t used = 0;
    const long x = std::stol(v, &used);
    if (used != v.size()) fail(line, "trailing characters in integer '" + v + "'");
    return static_cast<int>(x);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    fail(line, "expected an integer, got '" + v + "'");
  }
}

bool parse_bool(const std::string& v, int line) {
  if (v == "true") return true;
  if (v == "false") return false;
  fail(line, "expected true or false, got '" + v + "'");
}

std::vector<double> parse_list(const std::string& v, int line) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) fail(line, "empty element in list '" + v + "'");
    out.push_back(parse_double(item, line));
  }
  if (out.empty()) fail(line, "empty list");
  return out;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  double N = c.params.dim_N, alpha = c.params.alpha, beta = c.params.beta,
         b = c.params.b, cc = c.params.c;

  std::istringstream in(text);
  std::string raw;
  int line = 0;
  std::string section;
  std::map<std::string, int> seen;  // section.key -> first line

  while (std::getline(in, raw)) {
    ++line;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string s = trim(raw);
    if (s.empty()) continue;

    if (s.front() == '[') {
      if (s.back() != ']') fail(line, "unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      if (section != "params" && section != "grid" && section != "solver" &&
          section != "verify" && section != "output")
        fail(line, "unknown section [" + section + "]");
      continue;
    }

    const std::size_t eq = s.find('=');
    if (eq == std::string::npos) fail(line, "expected 'key = value'");
    const std::string key = trim(s.substr(0, eq));
    const std::string val = trim(s.substr(eq + 1));
    if (key.empty()) fail(line, "empty key");
    if (val.empty()) fail(line, "empty value for key '" + key + "'");
    if (section.empty()) fail(line, "key '" + key + "' before any section header");

    const std::string full = section + "." + key;
    const auto prev = seen.find(full);
    if (prev != seen.end())
      fail(line, "duplicate key '" + key + "' in [" + section +
                     "] (first set at line " + std::to_string(prev->second) + ")");
    seen[full] = line;

    if (full == "params.N") N = parse_int(val, line);
    else if (full == "params.alpha") alpha = parse_double(val, line);
    else if (full == "params.beta") beta = parse_double(val, line);
    else if (full == "params.b") b = parse_double(val, line);
    else if (full == "params.c") cc = parse_double(val, line);
    else if (full == "grid.R") c.R = parse_double(val, line);
    else if (full == "grid.n") c.n = parse_int(val, line);
    else if (full == "grid.grading") {
      if (val == "uniform") c.grading = RadialGrid::Grading::uniform;
      else if (val == "geometric") c.grading = RadialGrid::Grading::geometric;
      else fail(line, "grading must be uniform or geometric, got '" + val + "'");
    } else if (full == "grid.ratio") c.ratio = parse_double(val, line);
    else if (full == "solver.m") c.m = parse_int(val, line);
    else if (full == "solver.dt") c.dt = parse_double(val, line);
    else if (full == "solver.quad_rel_tol") c.quad_rel_tol = parse_double(val, line);
    else if (full == "solver.k_terms") c.k_terms = parse_int(val, line);
    else if (full == "verify.t_grid") c.t_grid = parse_list(val, line);
    else if (full == "verify.t_grid_diag") c.t_grid_diag = parse_list(val, line);
    else if (full == "verify.probe_count") c.probe_count = parse_int(val, line);
    else if (full == "verify.probe_r_min") c.probe_r_min = parse_double(val, line);
    else if (full == "output.dir") c.out_dir = val;
    else if (full == "output.emit_plot_data") c.emit_plot_data = parse_bool(val, line);
    else fail(line, "unknown key '" + key + "' in [" + section + "]");
  }

  try {
    c.params = validate_params(static_cast<int>(N), alpha, beta, b, cc);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!(c.R >= 10.0)) throw ConfigError("config: grid.R must be >= 10");
  if (c.n < 100) throw ConfigError("config: grid.n must be >= 100");
  if (c.grading == RadialGrid::Grading::geometric &&
      !(c.ratio > 1.0 && c.ratio <= 1.1))
    throw ConfigError("config: grid.ratio must lie in (1, 1.1]");
  if (c.m < 1) throw ConfigError("config: solver.m must be >= 1");
  if (!(c.dt > 0.0)) throw ConfigError("config: solver.dt must be > 0");
  if (!(c.quad_rel_tol > 0.0 && c.quad_rel_tol <= 1e-3))
    throw ConfigError("config: solver.quad_rel_tol must be in (0, 1e-3]");
  if (c.k_terms != 0 && c.k_terms < 3)
    throw ConfigError("config: solver.k_terms must be 0 (auto) or >= 3");
  for (double t : c.t_grid)
    if (!(t > 0.0)) throw ConfigError("config: verify.t_grid times must be > 0");
  for (double t : c.t_grid_diag)
    if (!(t > 0.0)) throw ConfigError("config: verify.t_grid_diag times must be > 0");
  if (c.probe_count < 4) throw ConfigError("config: verify.probe_count must be >= 4");
  if (!(c.probe_r_min > 0.0))
    throw ConfigError("config: verify.probe_r_min must be > 0");
  if (c.out_dir.empty()) throw ConfigError("config: output.dir must be nonempty");
  return c;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream out;
  out << "[params]\n";
  out << "N = " << c.params.dim_N << "\n";
  out << "alpha = " << fmt(c.params.alpha) << "\n";
  out << "beta = " << fmt(c.params.beta) << "\n";
  out << "b = " << fmt(c.params.b) << "\n";
  out << "c = " << fmt(c.params.c) << "\n";
  out << "\n[grid]\n";
  out << "R = " << fmt(c.R) << "\n";
  out << "n = " << c.n << "\n";
  out << "grading = "
      << (c.grading == RadialGrid::Grading::uniform ? "uniform" : "geometric")
      << "\n";
  out << "ratio = " << fmt(c.ratio) << "\n";
  out << "\n[solver]\n";
  out << "m = " << c.m << "\n";
  out << "dt = " << fmt(c.dt) << "\n";
  out << "quad_rel_tol = " << fmt(c.quad_rel_tol) << "\n";
  out << "k_terms = " << c.k_terms << "\n";
  out << "\n[verify]\n";
  out << "t_grid = ";
  for (std::size_t i = 0; i < c.t_grid.size(); ++i)
    out << (i ? ", " : "") << fmt(c.t_grid[i]);
  out << "\n";
  out << "t_grid_diag = ";
  for (std::size_t i = 0; i < c.t_grid_diag.size(); ++i)
    out << (i ? ", " : "") << fmt(c.t_grid_diag[i]);
  out << "\n";
  out << "probe_count = " << c.probe_count << "\n";
  out << "probe_r_min = " << fmt(c.probe_r_min) << "\n";
  out << "\n[output]\n";
  out << "dir = " << c.out_dir << "\n";
  out << "emit_plot_data = " << (c.emit_plot_data ? "true" : "false") << "\n";
  return out.str();
}

}  // namespace kernellab
