#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "kernellab/discretize.hpp"
#include "kernellab/spectral.hpp"
#include "kernellab/verify.hpp"
#include "test_support.hpp"

using namespace kernellab;

namespace {

// Column set shared by the kernel-bound verifiers (expensive to step).
const std::vector<std::vector<KernelSlice>>& ref_columns() {
  static const std::vector<std::vector<KernelSlice>> cols = [] {
    const testsup::Fixture& f = testsup::ref_b1();
    auto srcs = pick_probe_sources(f.sys, 30, 0.05, 15.0);
    return kernel_probe_columns(f.sys, srcs, {0.05, 0.1, 0.2, 0.5, 1.0}, 1e-3);
  }();
  return cols;
}

const std::vector<double> kTGrid = {0.05, 0.1, 0.2, 0.5, 1.0};

}  // namespace

TEST_CASE("affine fit recovers an exact line") {
  std::vector<double> x = {0.0, 1.0, 2.0, 3.0};
  std::vector<double> y = {1.0, 3.0, 5.0, 7.0};
  AffineFit f = fit_affine(x, y);
  CHECK(f.a == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(f.b == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(f.max_resid <= 1e-12);
}

TEST_CASE("power-law fit recovers synthetic constants") {
  const double gamma = 0.6;
  std::vector<double> t = {0.05, 0.1, 0.2, 0.5, 1.0};
  std::vector<double> s(t.size());
  for (std::size_t k = 0; k < t.size(); ++k)
    s[k] = 3.0 + 5.0 * std::pow(t[k], -gamma);
  AffineFit f = fit_t_power(t, s, gamma);
  CHECK(f.a == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(f.b == doctest::Approx(5.0).epsilon(1e-10));
  CHECK(f.max_resid <= 1e-9);
}

TEST_CASE("probe-source selection is ordered and in range") {
  const testsup::Fixture& f = testsup::ref_b1();
  auto srcs = pick_probe_sources(f.sys, 12, 0.1, 10.0);
  REQUIRE(srcs.size() >= 4);
  CHECK(srcs.size() <= 12);
  for (std::size_t k = 0; k < srcs.size(); ++k) {
    const double r = f.sys.node(srcs[k]);
    CHECK(r >= 0.1 * (1.0 - 1e-12));
    CHECK(r <= 10.0 * (1.0 + 1e-12));
    if (k > 0) CHECK(srcs[k] > srcs[k - 1]);
  }
}

TEST_CASE("shooting oracle agrees with the matrix eigenvalue") {
  const testsup::Fixture& f = testsup::ref_b1();
  const double shot = oracle_shooting_lambda0(f.params, 20.0);
  CHECK(std::abs(shot - f.eig.eigenvalues[0]) / std::abs(shot) <= 1e-5);
}

TEST_CASE("shooting responds monotonically to the confining strength") {
  OperatorParams p1 = validate_params(3, 3, 4, 0, 1);
  OperatorParams p2 = validate_params(3, 3, 4, 0, 2);
  const double l1 = oracle_shooting_lambda0(p1, 20.0);
  const double l2 = oracle_shooting_lambda0(p2, 20.0);
  CHECK(l1 < 0.0);
  CHECK(l2 < l1);  // stronger absorption pushes the spectrum down
}

TEST_CASE("interior zero count brackets the ground eigenvalue") {
  OperatorParams p = validate_params(3, 3, 4, 1, 1);
  const double lam = oracle_shooting_lambda0(p, 20.0);
  // the spectrum descends from lambda0, so the count grows as lambda drops
  CHECK(oracle_shooting_zero_count(p, 20.0, lam + 0.5) == 0);
  CHECK(oracle_shooting_zero_count(p, 20.0, lam - 0.5) == 1);
}

TEST_CASE("dense rotation oracle on the chain") {
  const int n = 50;
  SymTridiagonal T;
  T.diag.assign(n, 2.0);
  T.off.assign(n - 1, -1.0);
  std::vector<double> ev = oracle_dense_eigen(T);
  REQUIRE(static_cast<int>(ev.size()) == n);
  for (int j = 1; j <= n; ++j) {
    const double want = 2.0 - 2.0 * std::cos(j * M_PI / (n + 1));
    CHECK(ev[j - 1] == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("dense oracle preserves the trace and matches bisection") {
  const int n = 200;
  SymTridiagonal T;
  T.diag.resize(n);
  T.off.resize(n - 1);
  for (int i = 0; i < n; ++i) T.diag[i] = 2.0 + std::sin(i + 1.0);
  for (int i = 0; i + 1 < n; ++i) T.off[i] = 0.5 * std::cos(i + 1.0);
  std::vector<double> ev = oracle_dense_eigen(T);
  long double tr = 0.0, sum = 0.0;
  for (int i = 0; i < n; ++i) {
    tr += T.diag[i];
    sum += ev[i];
  }
  CHECK(static_cast<double>(std::abs(sum - tr)) <= 1e-12 * std::abs((double)tr));
  std::vector<double> bis = smallest_eigenvalues(T, 5);
  for (int j = 0; j < 5; ++j)
    CHECK(ev[j] == doctest::Approx(bis[j]).epsilon(1e-10));
}

TEST_CASE("ground-state envelope verifier") {
  const testsup::Fixture& f = testsup::ref_b1();
  BoundFit rec = verify_ground_state_bounds(f.sys, f.eig);
  CHECK(rec.id == "ground_state_envelope");
  CHECK(rec.passed);
  CHECK(rec.get("ratio") <= 3.0);
  CHECK(std::abs(rec.get("tail_slope")) <= 0.1);
  CHECK(rec.get("C_low") > 0.0);
  CHECK(rec.get("C_high") >= rec.get("C_low"));
  CHECK(rec.min_slack >= 0.0);
}

TEST_CASE("envelope verifier rejects a wrong-weight comparator") {
  const testsup::Fixture& f = testsup::ref_b1();
  BoundFit rec = verify_ground_state_bounds(f.sys, f.eig,
                                            NegativeControl::gs_wrong_weight);
  CHECK_FALSE(rec.passed);
  CHECK(rec.min_slack < 0.0);
}

TEST_CASE("ultracontractivity verifier") {
  const testsup::Fixture& f = testsup::ref_b1();
  BoundFit rec =
      verify_intrinsic_ultracontractivity(f.sys, f.eig, ref_columns(), kTGrid);
  CHECK(rec.passed);
  CHECK(rec.get("C2") >= 0.0);
  // the blow-up exponent is discriminating: tripling it fits worse
  CHECK(rec.get("resid_3gamma") > rec.get("max_resid"));
  // the supremum shrinks as t grows
  CHECK(rec.get("s_first") > rec.get("s_last"));
}

TEST_CASE("kernel upper-bound verifiers") {
  const testsup::Fixture& f = testsup::ref_b1();
  std::vector<BoundFit> recs =
      verify_kernel_upper_bounds(f.sys, f.eig, ref_columns(), kTGrid);
  REQUIRE(recs.size() == 2);
  CHECK(recs[0].id == "kernel_upper_bound");
  CHECK(recs[1].id == "kernel_upper_bound_simplified");
  for (const BoundFit& r : recs) {
    CHECK(r.passed);
    CHECK(r.get("C2") >= 0.0);
  }
  CHECK(recs[1].get("pointwise_min_log_gap") >= -1e-9);
}

TEST_CASE("on-diagonal floor verifier") {
  const testsup::Fixture& f = testsup::ref_b1();
  auto srcs = pick_probe_sources(f.sys, 30, 0.05, 15.0);
  BoundFit rec =
      verify_on_diagonal_lower(f.sys, f.eig, srcs, {0.5, 1.0, 1.5, 2.0});
  CHECK(rec.passed);
  CHECK(rec.get("c_floor") > 0.0);
  CHECK(rec.get("t_variation") <= 0.2);
  CHECK(rec.get("radial_flatness") <= 1e3);

  BoundFit bad =
      verify_on_diagonal_lower(f.sys, f.eig, srcs, {0.5, 1.0, 1.5, 2.0},
                               NegativeControl::ondiag_single_power);
  CHECK_FALSE(bad.passed);
}

TEST_CASE("entropy inequality verifier") {
  const testsup::Fixture& f = testsup::ref_b1();
  BoundFit rec = verify_log_sobolev(f.sys, f.eig);
  CHECK(rec.passed);
  CHECK(std::isfinite(rec.get("C1")));
  CHECK(rec.get("C1") > 0.0);
  CHECK(rec.get("stability_C1") <= 0.2);
  CHECK(rec.get("stability_C2") <= 0.2);
  CHECK(rec.get("feasibility_slack") >= -1e-9);
}

TEST_CASE("potential-norm inequality verifier") {
  const testsup::Fixture& f = testsup::ref_b1();
  BoundFit rec = verify_sobolev_potential(f.sys, f.eig);
  CHECK(rec.passed);
  CHECK(rec.get("C3") > 0.0);
  CHECK(rec.get("C4") > 0.0);
  CHECK(rec.get("stability_C3") <= 0.2);
}

TEST_CASE("eigenfunction decay verifier") {
  const testsup::Fixture& f = testsup::ref_b1();
  BoundFit rec = verify_eigenfunction_decay(f.sys, f.eig);
  CHECK(rec.passed);
  for (int j = 0; j < 3; ++j) {
    const std::string js = std::to_string(j);
    CHECK(std::isfinite(rec.get("C_" + js)));
    CHECK(rec.get("C_" + js) > 0.0);
    // the decay rate of the ratio stays near the predicted power
    CHECK(rec.get("tail_power_" + js) <= 0.1);
    CHECK(rec.get("tail_power_" + js) >= -f.params.b / 2.0 - 0.5);
  }

  BoundFit bad =
      verify_eigenfunction_decay(f.sys, f.eig, NegativeControl::decay_drop_agmon);
  CHECK_FALSE(bad.passed);
}

TEST_CASE("probe columns cover the requested time grid") {
  const std::vector<std::vector<KernelSlice>>& cols = ref_columns();
  REQUIRE(cols.size() >= 4);
  for (const std::vector<KernelSlice>& per_source : cols) {
    REQUIRE(!per_source.empty());
    // every requested time appears among this source's snapshots
    for (double t : kTGrid) {
      int found = 0;
      for (const KernelSlice& s : per_source)
        if (s.t == t) ++found;
      CHECK(found == 1);
    }
    for (const KernelSlice& s : per_source) {
      CHECK(s.picture == KernelSlice::Picture::k_mu);
      CHECK(s.source_r > 0.0);
      // one column = one source: radius constant across times
      CHECK(s.source_r == per_source.front().source_r);
    }
  }
}

TEST_CASE("constant lookup throws on unknown keys") {
  const testsup::Fixture& f = testsup::ref_b1();
  BoundFit rec = verify_ground_state_bounds(f.sys, f.eig);
  CHECK_THROWS_AS(rec.get("no_such_constant"), std::invalid_argument);
}
