#include "kernellab/io.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace kernellab {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string tsv_eigenvalues(const EigenData& eig) {
  std::ostringstream out;
  out << "j\tlambda\tresidual\n";
  for (std::size_t j = 0; j < eig.eigenvalues.size(); ++j)
    out << j << "\t" << format_double(eig.eigenvalues[j]) << "\t"
        << format_double(eig.residual_norms[j]) << "\n";
  return out.str();
}

std::string tsv_eigenvectors(const DiscreteSystem& sys, const EigenData& eig) {
  std::ostringstream out;
  out << "r";
  for (std::size_t j = 0; j < eig.psi.size(); ++j) out << "\tpsi_" << j;
  out << "\n";
  for (int i = 0; i < sys.n_free(); ++i) {
    out << format_double(sys.node(i));
    for (const auto& psi : eig.psi) out << "\t" << format_double(psi[i]);
    out << "\n";
  }
  return out.str();
}

std::string tsv_kernel_slice(const DiscreteSystem& sys, const KernelSlice& s) {
  std::ostringstream out;
  out << "t\tsource_r\tpicture\tmethod\n";
  out << format_double(s.t) << "\t" << format_double(s.source_r) << "\t"
      << (s.picture == KernelSlice::Picture::k_mu ? "k_mu" : "k") << "\t"
      << (s.method == KernelSlice::Method::stepping ? "stepping" : "expansion")
      << "\n";
  out << "r\tvalue\n";
  for (int i = 0; i < sys.n_free(); ++i)
    out << format_double(sys.node(i)) << "\t" << format_double(s.values[i])
        << "\n";
  return out.str();
}

std::string tsv_convergence(const ConvergenceReport& rep) {
  std::ostringstream out;
  out << "n\tlambda0\n";
  for (std::size_t k = 0; k < rep.n_list.size(); ++k)
    out << rep.n_list[k] << "\t" << format_double(rep.lambda0[k]) << "\n";
  out << "observed_order\t" << format_double(rep.observed_order) << "\n";
  out << "extrapolated\t" << format_double(rep.extrapolated) << "\n";
  out << "truncation_rel_diff\t" << format_double(rep.truncation_rel_diff)
      << "\n";
  out << "R\t" << format_double(rep.R) << "\n";
  out << "R_ext\t" << format_double(rep.R_ext) << "\n";
  return out.str();
}

std::string tsv_wkb_coefficients(const WkbModel& m) {
  std::ostringstream out;
  out << "lambda\t" << format_double(m.lambda) << "\n";
  out << "k_terms\t" << m.k_terms << "\n";
  out << "j\tc_j\n";
  for (std::size_t j = 0; j < m.coeffs.size(); ++j)
    out << j << "\t" << format_double(m.coeffs[j]) << "\n";
  return out.str();
}

std::string tsv_wkb_residual(const WkbModel& m, const std::vector<double>& radii,
                             double fitted_slope, double expected_slope) {
  std::ostringstream out;
  out << "fitted_slope\t" << format_double(fitted_slope) << "\n";
  out << "expected_slope\t" << format_double(expected_slope) << "\n";
  out << "r\tabs_r2_g1_minus_lambda\n";
  for (double r : radii) {
    const double res = std::abs(r * r * wkb_residual_g1(m, r) - m.lambda);
    out << format_double(r) << "\t" << format_double(res) << "\n";
  }
  return out.str();
}

namespace {

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 8);
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

std::string json_record(const BoundFit& f) {
  std::ostringstream out;
  out << "{\"id\": \"" << json_escape(f.id) << "\", \"passed\": "
      << (f.passed ? "true" : "false");
  for (const auto& kv : f.constants)
    out << ", \"" << json_escape(kv.first) << "\": " << format_double(kv.second);
  out << ", \"min_slack\": " << format_double(f.min_slack);
  out << ", \"rms_slack\": " << format_double(f.rms_slack);
  out << ", \"probes\": \"" << json_escape(f.probes) << "\"";
  out << ", \"detail\": \"" << json_escape(f.detail) << "\"}";
  return out.str();
}

std::string tsv_series(const std::string& xname, const std::string& yname,
                       const std::vector<double>& x,
                       const std::vector<double>& y) {
  if (x.size() != y.size())
    throw std::invalid_argument("tsv_series: length mismatch");
  std::ostringstream out;
  out << xname << "\t" << yname << "\n";
  for (std::size_t i = 0; i < x.size(); ++i)
    out << format_double(x[i]) << "\t" << format_double(y[i]) << "\n";
  return out.str();
}

void write_file(const std::string& dir, const std::string& name,
                const std::string& content) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
  const fs::path path = fs::path(dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  out.close();
  if (!out) throw IoError("write failed for " + path.string());
}

std::string metadata_text() {
  const std::time_t now = std::time(nullptr);
  char buf[64];
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  std::ostringstream out;
  out << "generated_at\t" << buf << "\n";
  out << "tool\tkernellab\n";
  return out.str();
}

}  // namespace kernellab
