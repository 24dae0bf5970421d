#include "kernellab/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace kernellab {

namespace {

double spectral_scale(const SymTridiagonal& T) {
  double s = 0.0;
  for (double d : T.diag) s = std::max(s, std::abs(d));
  for (double e : T.off) s = std::max(s, std::abs(e));
  return std::max(s, 1.0);
}

}  // namespace

int sturm_count_below(const SymTridiagonal& T, double x) {
  const int n = T.size();
  const double pivmin =
      std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
  int count = 0;
  double d = T.diag[0] - x;
  if (std::abs(d) < pivmin) d = -pivmin;
  if (d < 0.0) ++count;
  for (int i = 1; i < n; ++i) {
    d = (T.diag[i] - x) - T.off[i - 1] * T.off[i - 1] / d;
    if (std::abs(d) < pivmin) d = -pivmin;
    if (d < 0.0) ++count;
  }
  return count;
}

void gershgorin_bounds(const SymTridiagonal& T, double& lo, double& hi) {
  const int n = T.size();
  lo = std::numeric_limits<double>::infinity();
  hi = -lo;
  for (int i = 0; i < n; ++i) {
    const double rad = (i > 0 ? std::abs(T.off[i - 1]) : 0.0) +
                       (i + 1 < n ? std::abs(T.off[i]) : 0.0);
    lo = std::min(lo, T.diag[i] - rad);
    hi = std::max(hi, T.diag[i] + rad);
  }
}

std::vector<double> smallest_eigenvalues(const SymTridiagonal& T, int m) {
  const int n = T.size();
  if (m < 1 || m > n)
    throw std::invalid_argument("smallest_eigenvalues: bad m");
  double glo, ghi;
  gershgorin_bounds(T, glo, ghi);
  const double spread = std::max(ghi - glo, 1e-300);

  (void)spread;
  std::vector<double> out(m);
  for (int k = 0; k < m; ++k) {
    double lo = glo, hi = ghi;
    // Invariant: count_below(lo) <= k < count_below(hi).
    while (hi - lo > 4.0 * std::numeric_limits<double>::epsilon() *
                         std::max(std::abs(lo), std::abs(hi))) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;  // interval at rounding resolution
      if (sturm_count_below(T, mid) > k)
        hi = mid;
      else
        lo = mid;
    }
    out[k] = 0.5 * (lo + hi);
  }
  return out;
}

std::vector<double> inverse_iteration(
    const SymTridiagonal& T, double shift,
    const std::vector<std::vector<double>>& against, int max_iter) {
  const int n = T.size();
  const double scale = spectral_scale(T);
  // Shifted matrix with a guard keeping the factorization nonsingular.
  std::vector<double> sub(n, 0.0), diag(n), sup(n, 0.0);
  for (int i = 0; i < n; ++i) diag[i] = T.diag[i] - shift;
  for (int i = 0; i + 1 < n; ++i) {
    sub[i + 1] = T.off[i];
    sup[i] = T.off[i];
  }

  // Deterministic start with broad support.
  std::vector<double> y(n);
  for (int i = 0; i < n; ++i)
    y[i] = 1.0 + 0.5 * std::sin(0.7 * (i + 1));

  auto orthogonalize = [&](std::vector<double>& v) {
    for (const auto& u : against) {
      double dot = 0.0;
      for (int i = 0; i < n; ++i) dot += u[i] * v[i];
      for (int i = 0; i < n; ++i) v[i] -= dot * u[i];
    }
  };
  auto normalize = [&](std::vector<double>& v) {
    double nrm = 0.0;
    for (double t : v) nrm += t * t;
    nrm = std::sqrt(nrm);
    if (nrm == 0.0) throw std::runtime_error("inverse_iteration: zero vector");
    for (double& t : v) t /= nrm;
    return nrm;
  };

  // Residual of the current iterate against its own Rayleigh quotient.
  auto residual = [&](const std::vector<double>& v) {
    double rq = 0.0;
    std::vector<double> tv(n);
    for (int i = 0; i < n; ++i) {
      double s = T.diag[i] * v[i];
      if (i > 0) s += T.off[i - 1] * v[i - 1];
      if (i + 1 < n) s += T.off[i] * v[i + 1];
      tv[i] = s;
      rq += v[i] * s;
    }
    double res = 0.0;
    for (int i = 0; i < n; ++i) {
      const double d = tv[i] - rq * v[i];
      res += d * d;
    }
    return std::sqrt(res);
  };

  orthogonalize(y);
  normalize(y);

  const double eps = std::numeric_limits<double>::epsilon();
  std::vector<double> best;
  double best_res = std::numeric_limits<double>::infinity();
  for (int it = 0; it < max_iter; ++it) {
    std::vector<double> z;
    try {
      z = thomas_solve(sub, diag, sup, y);
    } catch (const std::runtime_error&) {
      // Exactly singular shift: nudge off the eigenvalue by one ulp-scale.
      for (int i = 0; i < n; ++i) diag[i] += 16.0 * eps * scale;
      continue;
    }
    orthogonalize(z);
    normalize(z);
    y.swap(z);
    if (it >= 1) {
      const double res = residual(y);
      if (res < best_res) {
        best_res = res;
        best = y;
      }
      if (res <= 32.0 * eps * scale) return y;
    }
  }
  if (best_res <= 1e4 * eps * scale) return best;
  throw std::runtime_error(
      "inverse_iteration: no convergence within iteration limit");
}

std::vector<double> thomas_solve(const std::vector<double>& sub,
                                 const std::vector<double>& diag,
                                 const std::vector<double>& sup,
                                 const std::vector<double>& rhs) {
  const int n = static_cast<int>(diag.size());
  std::vector<double> c(n), d(n);
  double piv = diag[0];
  if (piv == 0.0) throw std::runtime_error("thomas_solve: zero pivot");
  c[0] = sup[0] / piv;
  d[0] = rhs[0] / piv;
  for (int i = 1; i < n; ++i) {
    piv = diag[i] - sub[i] * c[i - 1];
    if (piv == 0.0) throw std::runtime_error("thomas_solve: zero pivot");
    c[i] = (i + 1 < n ? sup[i] : 0.0) / piv;
    d[i] = (rhs[i] - sub[i] * d[i - 1]) / piv;
  }
  for (int i = n - 2; i >= 0; --i) d[i] -= c[i] * d[i + 1];
  return d;
}

TridiagFactor::TridiagFactor(const std::vector<double>& sub,
                             const std::vector<double>& diag,
                             const std::vector<double>& sup) {
  const int n = static_cast<int>(diag.size());
  low_.assign(n, 0.0);
  dinv_.assign(n, 0.0);
  sup_ = sup;
  double piv = diag[0];
  if (piv == 0.0) throw std::runtime_error("TridiagFactor: zero pivot");
  dinv_[0] = 1.0 / piv;
  for (int i = 1; i < n; ++i) {
    low_[i] = sub[i] * dinv_[i - 1];
    piv = diag[i] - low_[i] * sup_[i - 1];
    if (piv == 0.0) throw std::runtime_error("TridiagFactor: zero pivot");
    dinv_[i] = 1.0 / piv;
  }
}

void TridiagFactor::solve(std::vector<double>& x) const {
  const int n = static_cast<int>(dinv_.size());
  for (int i = 1; i < n; ++i) x[i] -= low_[i] * x[i - 1];
  x[n - 1] *= dinv_[n - 1];
  for (int i = n - 2; i >= 0; --i)
    x[i] = (x[i] - sup_[i] * x[i + 1]) * dinv_[i];
}

}  // namespace kernellab
