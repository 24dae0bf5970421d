#include "kernellab/propagate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kernellab/model.hpp"

namespace kernellab {

Propagator::Propagator(const DiscreteSystem& sys, double dt)
    : sys_(&sys), dt_(dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("Propagator: dt must be > 0");
  const int nf = sys.n_free();
  std::vector<double> ld(nf), lsub(nf, 0.0), lsup(nf, 0.0);
  rhs_diag_.resize(nf);
  rhs_sub_.assign(nf, 0.0);
  rhs_sup_.assign(nf, 0.0);
  for (int i = 0; i < nf; ++i) {
    const double a = 0.5 * dt * (sys.stiff_diag[i] + sys.pot_diag[i]);
    ld[i] = sys.mass_diag[i] + a;
    rhs_diag_[i] = sys.mass_diag[i] - a;
  }
  for (int i = 0; i + 1 < nf; ++i) {
    const double a = 0.5 * dt * sys.stiff_off[i];
    lsup[i] = a;
    lsub[i + 1] = a;
    rhs_sup_[i] = -a;
    rhs_sub_[i + 1] = -a;
  }
  lhs_ = TridiagFactor(lsub, ld, lsup);
}

void Propagator::backward_euler_halfstep(std::vector<double>& u) const {
  const int nf = sys_->n_free();
  for (int i = 0; i < nf; ++i) u[i] *= sys_->mass_diag[i];
  lhs_.solve(u);
}

void Propagator::cn_step(std::vector<double>& u) const {
  const int nf = sys_->n_free();
  std::vector<double> rhs(nf);
  for (int i = 0; i < nf; ++i) {
    double s = rhs_diag_[i] * u[i];
    if (i > 0) s += rhs_sub_[i] * u[i - 1];
    if (i + 1 < nf) s += rhs_sup_[i] * u[i + 1];
    rhs[i] = s;
  }
  u = std::move(rhs);
  lhs_.solve(u);
}

namespace {

long long steps_for(double t, double dt, const char* who) {
  const long long n = std::llround(t / dt);
  if (n < 0 || std::abs(n * dt - t) > 1e-9 * std::max(1.0, t))
    throw std::invalid_argument(std::string(who) +
                                ": t must be a nonnegative integer multiple of dt");
  return n;
}

}  // namespace

std::vector<double> Propagator::propagate(std::vector<double> u0, double t,
                                          int smoothing_halfsteps) const {
  auto snaps = snapshots(std::move(u0), {t}, smoothing_halfsteps);
  return std::move(snaps[0]);
}

std::vector<std::vector<double>> Propagator::snapshots(
    std::vector<double> u0, const std::vector<double>& t_list,
    int smoothing_halfsteps) const {
  const int nf = sys_->n_free();
  if (static_cast<int>(u0.size()) != nf)
    throw std::invalid_argument("Propagator: u0 has wrong length");
  if (t_list.empty())
    throw std::invalid_argument("Propagator: empty snapshot list");
  if (smoothing_halfsteps < 0 || smoothing_halfsteps % 2 != 0)
    throw std::invalid_argument(
        "Propagator: smoothing_halfsteps must be even and >= 0");

  std::vector<long long> targets;  // in half-step units
  for (std::size_t k = 0; k < t_list.size(); ++k) {
    if (k > 0 && !(t_list[k] > t_list[k - 1]))
      throw std::invalid_argument("Propagator: t_list must be ascending");
    targets.push_back(2 * steps_for(t_list[k], dt_, "Propagator"));
  }
  if (targets.back() > 0 && smoothing_halfsteps > targets.back())
    throw std::invalid_argument(
        "Propagator: smoothing exceeds the requested time span");

  std::vector<std::vector<double>> out;
  out.reserve(targets.size());
  std::size_t next = 0;
  long long half = 0;
  while (next < targets.size() && targets[next] == half) {
    out.push_back(u0);
    ++next;
  }
  while (next < targets.size()) {
    if (half < smoothing_halfsteps) {
      backward_euler_halfstep(u0);
      ++half;
    } else {
      cn_step(u0);
      half += 2;
    }
    while (next < targets.size() && targets[next] == half) {
      out.push_back(u0);
      ++next;
    }
  }
  return out;
}

std::vector<double> propagate_mu(const DiscreteSystem& sys,
                                 std::vector<double> u0, double t, double dt,
                                 int smoothing_halfsteps) {
  if (t == 0.0) return u0;
  Propagator prop(sys, dt);
  return prop.propagate(std::move(u0), t, smoothing_halfsteps);
}

namespace {

// Stepped columns are kernel values against the weighted measure
// dmu = dx/(1+|x|^alpha) of the symmetrised semigroup: symmetric in (i, j).
KernelSlice finish_column(const DiscreteSystem& sys, int j, double t,
                          std::vector<double> vals, KernelSlice::Method m) {
  KernelSlice s;
  s.t = t;
  s.source_index = j;
  s.source_r = sys.node(j);
  s.picture = KernelSlice::Picture::k_mu;
  s.method = m;
  s.values = std::move(vals);
  return s;
}

std::vector<double> delta_at(const DiscreteSystem& sys, int j) {
  if (j < 0 || j >= sys.n_free())
    throw std::invalid_argument("kernel column: source index out of range");
  std::vector<double> u0(sys.n_free(), 0.0);
  u0[j] = 1.0 / sys.mass_diag[j];
  return u0;
}

}  // namespace

KernelSlice kernel_column(const DiscreteSystem& sys, int j, double t,
                          double dt) {
  Propagator prop(sys, dt);
  auto cols = kernel_column_snapshots(sys, prop, j, {t});
  return std::move(cols[0]);
}

std::vector<KernelSlice> kernel_column_snapshots(
    const DiscreteSystem& sys, const Propagator& prop, int j,
    const std::vector<double>& t_list) {
  if (t_list.empty() || !(t_list.front() > 0.0))
    throw std::invalid_argument("kernel column: times must be positive");
  auto snaps = prop.snapshots(delta_at(sys, j), t_list);
  std::vector<KernelSlice> out;
  out.reserve(snaps.size());
  for (std::size_t k = 0; k < snaps.size(); ++k)
    out.push_back(finish_column(sys, j, t_list[k], std::move(snaps[k]),
                                KernelSlice::Method::stepping));
  return out;
}

KernelSlice expansion_column(const DiscreteSystem& sys, const EigenData& eig,
                             int j, double t) {
  if (!(t > 0.0))
    throw std::invalid_argument("expansion_column: t must be positive");
  if (j < 0 || j >= sys.n_free())
    throw std::invalid_argument("expansion_column: source index out of range");
  std::vector<double> vals(sys.n_free());
  for (int i = 0; i < sys.n_free(); ++i)
    vals[i] = expansion_kernel_mu(eig, t, i, j);
  return finish_column(sys, j, t, std::move(vals),
                       KernelSlice::Method::expansion);
}

KernelSlice to_k(const DiscreteSystem& sys, const KernelSlice& slice) {
  if (slice.picture != KernelSlice::Picture::k_mu)
    throw std::invalid_argument("to_k: slice is already in the k picture");
  KernelSlice out = slice;
  out.picture = KernelSlice::Picture::k;
  // Lebesgue-measure kernel of the drift semigroup: undo the similarity
  // weight phi row-wise and apply the measure density at the source.
  const double ry = out.source_r;
  const double fy = weight_phi(sys.params, ry) /
                    (1.0 + std::pow(ry, sys.params.alpha));
  for (int i = 0; i < sys.n_free(); ++i)
    out.values[i] *= fy / weight_phi(sys.params, sys.node(i));
  return out;
}

KernelSlice from_k(const DiscreteSystem& sys, const KernelSlice& slice) {
  if (slice.picture != KernelSlice::Picture::k)
    throw std::invalid_argument("from_k: slice is already in the k_mu picture");
  KernelSlice out = slice;
  out.picture = KernelSlice::Picture::k_mu;
  const double ry = out.source_r;
  const double fy = weight_phi(sys.params, ry) /
                    (1.0 + std::pow(ry, sys.params.alpha));
  for (int i = 0; i < sys.n_free(); ++i)
    out.values[i] *= weight_phi(sys.params, sys.node(i)) / fy;
  return out;
}

ChapmanKolmogorovReport chapman_kolmogorov_check(
    const DiscreteSystem& sys, double t1, double t2,
    const std::vector<int>& sample_nodes, double dt) {
  if (!(t1 > 0.0) || !(t2 > 0.0))
    throw std::invalid_argument("chapman_kolmogorov_check: times must be > 0");
  if (sample_nodes.empty())
    throw std::invalid_argument("chapman_kolmogorov_check: no sample nodes");

  std::vector<double> times = {t1, t2, t1 + t2};
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  auto index_of = [&](double t) {
    for (std::size_t k = 0; k < times.size(); ++k)
      if (times[k] == t) return k;
    throw std::logic_error("chapman_kolmogorov_check: time lookup failed");
  };
  const std::size_t i1 = index_of(t1), i2 = index_of(t2),
                    i12 = index_of(t1 + t2);

  // Raw symmetrised-picture columns at each needed time, per sample node.
  Propagator prop(sys, dt);
  std::vector<std::vector<std::vector<double>>> cols(sample_nodes.size());
  for (std::size_t a = 0; a < sample_nodes.size(); ++a)
    cols[a] = prop.snapshots(delta_at(sys, sample_nodes[a]), times);

  double scale = 0.0;
  for (std::size_t b = 0; b < sample_nodes.size(); ++b)
    for (std::size_t a = 0; a < sample_nodes.size(); ++a)
      scale = std::max(scale, std::abs(cols[b][i12][sample_nodes[a]]));
  if (!(scale > 0.0))
    throw std::runtime_error("chapman_kolmogorov_check: kernel vanished");

  ChapmanKolmogorovReport rep;
  const int nf = sys.n_free();
  for (std::size_t b = 0; b < sample_nodes.size(); ++b)
    for (std::size_t a = 0; a < sample_nodes.size(); ++a) {
      const double lhs = cols[b][i12][sample_nodes[a]];
      double rhs = 0.0;
      for (int l = 0; l < nf; ++l)
        rhs += cols[a][i1][l] * cols[b][i2][l] * sys.mass_diag[l];
      const double denom = std::max(std::abs(lhs), 1e-6 * scale);
      rep.max_rel_err = std::max(rep.max_rel_err, std::abs(lhs - rhs) / denom);
      ++rep.pairs;
    }
  return rep;
}

}  // namespace kernellab
