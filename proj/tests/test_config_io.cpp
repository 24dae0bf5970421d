#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "kernellab/config.hpp"
#include "kernellab/io.hpp"
#include "test_support.hpp"

using namespace kernellab;

namespace {

const char* kMinimal =
    "[params]\n"
    "N = 3\n"
    "alpha = 3\n"
    "beta = 4\n"
    "b = 1\n"
    "c = 1\n";

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("minimal config takes the documented defaults") {
  RunConfig c = parse_config(kMinimal);
  CHECK(c.params.dim_N == 3);
  CHECK(c.params.b == 1.0);
  CHECK(c.R == 20.0);
  CHECK(c.n == 4000);
  CHECK(c.grading == RadialGrid::Grading::geometric);
  CHECK(c.ratio == 1.0015);
  CHECK(c.m == 8);
  CHECK(c.dt == 1e-3);
  CHECK(c.quad_rel_tol == 1e-8);
  CHECK(c.k_terms == 0);
  CHECK(c.t_grid == std::vector<double>{0.05, 0.1, 0.2, 0.5, 1.0});
  CHECK(c.t_grid_diag == std::vector<double>{0.5, 1.0, 1.5, 2.0});
  CHECK(c.probe_count == 30);
  CHECK(c.probe_r_min == 0.05);
  CHECK(c.out_dir == "out");
  CHECK_FALSE(c.emit_plot_data);
}

TEST_CASE("serialization round trip is exact") {
  RunConfig c = parse_config(kMinimal);
  c.params = validate_params(3, 3, 4, -1, 2);
  c.n = 1234;
  c.ratio = 1.0123456789012345;
  c.dt = 1.0 / 3000.0;
  c.t_grid = {0.07, 0.21};
  c.out_dir = "some/dir";
  c.emit_plot_data = true;
  RunConfig back = parse_config(serialize_config(c));
  CHECK(back == c);
  // canonical form: serializing twice gives identical bytes
  CHECK(serialize_config(back) == serialize_config(c));
}

TEST_CASE("comments and blank lines are ignored") {
  std::string text = std::string("# leading comment\n\n") + kMinimal +
                     "\n[grid]\nn = 500   # trailing comment\n";
  RunConfig c = parse_config(text);
  CHECK(c.n == 500);
}

TEST_CASE("duplicate keys are rejected with both line numbers") {
  const char* text =
      "[params]\n"
      "alpha = 3\n"
      "alpha = 4\n";
  try {
    parse_config(text);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    std::string msg = e.what();
    CHECK(msg.find("line 3") != std::string::npos);
    CHECK(msg.find("line 2") != std::string::npos);
    CHECK(msg.find("alpha") != std::string::npos);
  }
}

TEST_CASE("unknown keys and sections carry line numbers") {
  try {
    parse_config("[params]\nalpa = 3\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    std::string msg = e.what();
    CHECK(msg.find("alpa") != std::string::npos);
    CHECK(msg.find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config("[nosuch]\nx = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "stray line\n"),
                  ConfigError);
}

TEST_CASE("malformed and out-of-range values are rejected") {
  auto with = [&](const std::string& extra) {
    return std::string(kMinimal) + extra;
  };
  CHECK_THROWS_AS(parse_config(with("[grid]\nR = abc\n")), ConfigError);
  CHECK_THROWS_AS(parse_config(with("[grid]\nR = 5\n")), ConfigError);
  CHECK_THROWS_AS(parse_config(with("[grid]\nn = 50\n")), ConfigError);
  CHECK_THROWS_AS(parse_config(with("[grid]\nratio = 1.2\n")), ConfigError);
  CHECK_THROWS_AS(parse_config(with("[grid]\ngrading = cubic\n")), ConfigError);
  CHECK_THROWS_AS(parse_config(with("[solver]\nm = 0\n")), ConfigError);
  CHECK_THROWS_AS(parse_config(with("[solver]\ndt = 0\n")), ConfigError);
  CHECK_THROWS_AS(parse_config(with("[solver]\nquad_rel_tol = 0.01\n")),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(with("[solver]\nk_terms = 2\n")), ConfigError);
  CHECK_THROWS_AS(parse_config(with("[verify]\nprobe_count = 2\n")), ConfigError);
  CHECK_THROWS_AS(parse_config(with("[verify]\nt_grid = 0.1, -0.5\n")),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(with("[output]\ndir =\n")), ConfigError);
}

TEST_CASE("parameter hypotheses are enforced at parse time") {
  // alpha = 2 violates the standing hypothesis
  const char* text =
      "[params]\n"
      "N = 3\n"
      "alpha = 2\n"
      "beta = 4\n"
      "b = 1\n"
      "c = 1\n";
  try {
    parse_config(text);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("alpha") != std::string::npos);
  }
  // omitted parameter keys fall back to the documented defaults
  RunConfig c = parse_config("[params]\nb = -1\n");
  CHECK(c.params.dim_N == 3);
  CHECK(c.params.beta == 4.0);
  CHECK(c.params.b == -1.0);
  // default parameters violating a hypothesis still surface as ConfigError
  CHECK_THROWS_AS(parse_config("[params]\nc = 0\n"), ConfigError);
}

TEST_CASE("file parsing and missing files") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "kernellab_cfg_test";
  fs::create_directories(dir);
  fs::path file = dir / "ok.ini";
  {
    std::ofstream out(file);
    out << kMinimal;
  }
  RunConfig c = parse_config_file(file.string());
  CHECK(c.params.alpha == 3.0);
  CHECK_THROWS_AS(parse_config_file((dir / "absent.ini").string()), ConfigError);
  fs::remove_all(dir);
}

TEST_CASE("shortest exact decimal form survives a round trip") {
  for (double x : {1.0 / 3.0, -5.6470306294766441, 1e-300, 0.0, 2.0,
                   0.1 + 0.2, 1.0000000000000002}) {
    const std::string s = format_double(x);
    CHECK(std::strtod(s.c_str(), nullptr) == x);
  }
  CHECK(format_double(2.0) == "2");
}

TEST_CASE("eigenvalue table round trips through text") {
  const testsup::Fixture& f = testsup::small_b0();
  std::string tsv = tsv_eigenvalues(f.eig);
  std::istringstream in(tsv);
  std::string header;
  std::getline(in, header);
  CHECK(header.find("lambda") != std::string::npos);
  int idx;
  std::string lam, res;
  int rows = 0;
  while (in >> idx >> lam >> res) {
    CHECK(std::strtod(lam.c_str(), nullptr) == f.eig.eigenvalues[rows]);
    ++rows;
  }
  CHECK(rows == static_cast<int>(f.eig.eigenvalues.size()));
}

TEST_CASE("record serialization is single-line flat JSON") {
  BoundFit f;
  f.id = "demo_record";
  f.passed = true;
  f.constants = {{"C1", 2.5}, {"C2", -0.125}};
  f.min_slack = 0.5;
  f.rms_slack = 0.75;
  f.probes = "12 probes";
  f.detail = "synthetic \"quoted\" detail";
  std::string line = json_record(f);
  CHECK(line.find('\n') == std::string::npos);
  CHECK(line.find("\"id\": \"demo_record\"") != std::string::npos);
  CHECK(line.find("\"passed\": true") != std::string::npos);
  CHECK(line.find("\"C1\": 2.5") != std::string::npos);
  CHECK(line.find("\\\"quoted\\\"") != std::string::npos);
}

TEST_CASE("plot series has a header and matching rows") {
  std::string s = tsv_series("r", "value", {1.0, 2.0}, {0.5, 0.25});
  CHECK(s.substr(0, 8) == "r\tvalue\n");
  CHECK(s.find("1\t0.5\n") != std::string::npos);
  CHECK(s.find("2\t0.25\n") != std::string::npos);
}

TEST_CASE("writer creates nested directories") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "kernellab_io_test" / "a" / "b";
  fs::remove_all(fs::temp_directory_path() / "kernellab_io_test");
  write_file(dir.string(), "x.txt", "payload");
  CHECK(slurp(dir / "x.txt") == "payload");
  fs::remove_all(fs::temp_directory_path() / "kernellab_io_test");
}

TEST_CASE("metadata carries the stamp and tool identity") {
  std::string meta = metadata_text();
  CHECK(meta.find("generated_at") != std::string::npos);
  CHECK(meta.find("tool\tkernellab") != std::string::npos);
  CHECK(meta.find("T") != std::string::npos);  // ISO-8601 timestamp
}

TEST_CASE("kernel slice table names the picture and time") {
  const testsup::Fixture& f = testsup::small_b0();
  KernelSlice s = kernel_column(f.sys, f.sys.n_free() / 4, 0.1, 1e-3);
  std::string tsv = tsv_kernel_slice(f.sys, s);
  CHECK(tsv.find("k_mu") != std::string::npos);
  std::istringstream in(tsv);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  CHECK(lines >= f.sys.n_free());
}
