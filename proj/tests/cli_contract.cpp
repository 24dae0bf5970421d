// End-to-end contract for the command-line tool: exit codes, error channels,
// output layout, and byte-reproducibility.  argv[1] is the binary, argv[2]
// the directory with the shipped configuration files.

#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

std::string g_cli, g_cfg;
int g_failures = 0;

struct RunResult {
  int code = -1;
  std::string out, err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return "";
  return std::string(std::istreambuf_iterator<char>(in), {});
}

RunResult run(const std::string& args) {
  const std::string cmd =
      g_cli + " " + args + " >cli_stdout.txt 2>cli_stderr.txt";
  const int raw = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = slurp("cli_stdout.txt");
  r.err = slurp("cli_stderr.txt");
  return r;
}

void expect(bool ok, const std::string& what) {
  std::printf("%s  %s\n", ok ? "ok  " : "FAIL", what.c_str());
  if (!ok) ++g_failures;
}

std::string cfg(const std::string& name) { return g_cfg + "/" + name; }

int count_lines(const std::string& text) {
  int n = 0;
  for (char ch : text) n += (ch == '\n');
  return n;
}

// All regular files under a directory, relative paths, sorted.
std::vector<std::string> listing(const fs::path& dir) {
  std::vector<std::string> names;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file())
      names.push_back(fs::relative(e.path(), dir).string());
  std::sort(names.begin(), names.end());
  return names;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: cli_contract <binary> <config-dir>\n");
    return 2;
  }
  g_cli = argv[1];
  g_cfg = argv[2];

  fs::remove_all("cli_scratch");
  fs::create_directories("cli_scratch");

  // -- verification pipeline on the reference configuration ---------------
  RunResult v1 = run("verify --config " + cfg("reference.ini") +
                     " --out cli_scratch/A");
  expect(v1.code == 0, "verify on the reference configuration exits 0");
  const std::string records = slurp("cli_scratch/A/records.jsonl");
  expect(count_lines(records) == 8, "verify writes 8 verifier records");
  expect(records.find("\"passed\": false") == std::string::npos,
         "all reference verifiers pass");
  expect(fs::exists("cli_scratch/A/verify_summary.txt") &&
             fs::exists("cli_scratch/A/metadata.txt"),
         "verify writes the summary and metadata files");

  RunResult rep = run("report --config " + cfg("reference.ini") +
                      " --out cli_scratch/A");
  expect(rep.code == 0, "report over passing records exits 0");
  expect(rep.out.find("ALL PASSED") != std::string::npos,
         "report prints the overall verdict");
  expect(fs::exists("cli_scratch/A/report.txt"), "report writes report.txt");

  // -- byte-reproducibility ------------------------------------------------
  RunResult v2 = run("verify --config " + cfg("reference.ini") +
                     " --out cli_scratch/B");
  expect(v2.code == 0, "second verify run exits 0");
  {
    auto la = listing("cli_scratch/A"), lb = listing("cli_scratch/B");
    // the report file exists only in A
    la.erase(std::remove(la.begin(), la.end(), "report.txt"), la.end());
    bool same_set = la == lb;
    bool same_bytes = true;
    for (const std::string& name : la) {
      if (name == "metadata.txt") continue;
      if (slurp(fs::path("cli_scratch/A") / name) !=
          slurp(fs::path("cli_scratch/B") / name))
        same_bytes = false;
    }
    expect(same_set, "repeated runs produce the same file set");
    expect(same_bytes, "repeated runs are byte-identical outside metadata");
    expect(slurp("cli_scratch/A/metadata.txt")
                   .find("generated_at") != std::string::npos,
           "metadata carries the timestamp");
  }

  // -- failing parameter set ----------------------------------------------
  RunResult vb = run("verify --config " + cfg("bneg1.ini") +
                     " --out cli_scratch/C");
  expect(vb.code == 1, "verify with a failing bound exits 1");
  expect(slurp("cli_scratch/C/records.jsonl").find("\"passed\": false") !=
             std::string::npos,
         "failing record is written");
  RunResult repb = run("report --config " + cfg("bneg1.ini") +
                       " --out cli_scratch/C");
  expect(repb.code == 1, "report over a failing record exits 1");

  // -- configuration errors -> exit 2, message on stderr -------------------
  RunResult dup = run("eigen --config " + cfg("bad_duplicate.ini"));
  expect(dup.code == 2, "duplicate key exits 2");
  expect(dup.err.find("line 3") != std::string::npos &&
             dup.err.find("line 2") != std::string::npos,
         "duplicate-key message names both lines");

  RunResult unk = run("eigen --config " + cfg("bad_unknown.ini"));
  expect(unk.code == 2, "unknown key exits 2");
  expect(unk.err.find("alpa") != std::string::npos,
         "unknown-key message names the key");

  RunResult mis = run("eigen --config " + cfg("no_such_file.ini"));
  expect(mis.code == 2, "missing config file exits 2");

  RunResult badcmd = run("frobnicate --config " + cfg("reference.ini"));
  expect(badcmd.code == 2, "unknown command exits 2");

  RunResult nocfg = run("eigen");
  expect(nocfg.code == 2, "missing --config exits 2");
  expect(!nocfg.err.empty(), "missing --config reports on stderr");

  RunResult norec = run("report --config " + cfg("reference.ini") +
                        " --out cli_scratch/empty");
  expect(norec.code == 2, "report without records exits 2");

  // -- other commands -------------------------------------------------------
  RunResult eg = run("eigen --config " + cfg("reference.ini") +
                     " --out cli_scratch/E --emit-plot-data");
  expect(eg.code == 0, "eigen exits 0");
  expect(fs::exists("cli_scratch/E/eigenvalues.tsv") &&
             fs::exists("cli_scratch/E/convergence.tsv") &&
             fs::exists("cli_scratch/E/eigen_summary.txt"),
         "eigen writes its tables");
  expect(fs::exists("cli_scratch/E/plot_ground_state.tsv"),
         "--emit-plot-data adds plot series");

  RunResult wk = run("wkb --config " + cfg("reference.ini") +
                     " --out cli_scratch/W");
  expect(wk.code == 0, "wkb exits 0");
  {
    bool coeffs = false, resid = false;
    for (const std::string& name : listing("cli_scratch/W")) {
      if (name.find("_coefficients.tsv") != std::string::npos) coeffs = true;
      if (name.find("_residual.tsv") != std::string::npos) resid = true;
    }
    expect(coeffs && resid, "wkb writes coefficient and residual tables");
  }

  RunResult kn = run("kernel --config " + cfg("reference.ini") +
                     " --out cli_scratch/K");
  expect(kn.code == 0, "kernel exits 0");
  {
    bool kmu = false, k = false;
    for (const std::string& name : listing("cli_scratch/K")) {
      if (name.find("_kmu.tsv") != std::string::npos) kmu = true;
      else if (name.find("_k.tsv") != std::string::npos) k = true;
    }
    expect(kmu && k, "kernel writes both picture tables");
  }

  // -- sweep ----------------------------------------------------------------
  RunResult sw = run("verify --sweep " + cfg("sweep.txt") +
                     " --out cli_scratch/SW");
  expect(sw.code == 1, "sweep exit code is the worst member (1)");
  expect(fs::exists("cli_scratch/SW/reference/records.jsonl") &&
             fs::exists("cli_scratch/SW/b0/records.jsonl") &&
             fs::exists("cli_scratch/SW/bneg1/records.jsonl"),
         "sweep writes one directory per configuration");

  RunResult help = run("--help");
  expect(help.code == 0, "--help exits 0");

  std::printf("cli contract: %s (%d failures)\n",
              g_failures == 0 ? "all checks passed" : "FAILURES", g_failures);
  return g_failures == 0 ? 0 : 1;
}
