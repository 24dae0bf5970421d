#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "kernellab/asymptotics.hpp"
#include "kernellab/discretize.hpp"
#include "test_support.hpp"

using namespace kernellab;

TEST_CASE("uniform node placement") {
  std::vector<double> nodes = uniform_nodes(20.0, 4);
  REQUIRE(nodes.size() == 4);
  CHECK(nodes[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(nodes[1] == doctest::Approx(7.0).epsilon(1e-14));
  CHECK(nodes[2] == doctest::Approx(13.5).epsilon(1e-14));
  CHECK(nodes[3] == doctest::Approx(20.0).epsilon(1e-14));
}

TEST_CASE("geometric node placement") {
  const double ratio = 1.05;
  std::vector<double> nodes = geometric_nodes(20.0, 100, ratio);
  REQUIRE(nodes.size() == 100);
  CHECK(nodes.back() == doctest::Approx(20.0).epsilon(1e-12));
  // first node equals the first (virtual origin) cell width
  const double w0 = nodes[0];
  CHECK(nodes[1] - nodes[0] == doctest::Approx(w0 * ratio).epsilon(1e-10));
  for (std::size_t i = 1; i + 1 < nodes.size(); ++i)
    CHECK((nodes[i + 1] - nodes[i]) / (nodes[i] - nodes[i - 1]) ==
          doctest::Approx(ratio).epsilon(1e-9));
  const double wlast = nodes[99] - nodes[98];
  CHECK(wlast / w0 == doctest::Approx(std::pow(ratio, 99.0)).epsilon(1e-8));
}

TEST_CASE("grid builder validation") {
  OperatorParams p = validate_params(3, 3, 4, 1, 1);
  CHECK_THROWS_AS(build_grid(p, 5.0, 4000, RadialGrid::Grading::geometric, 1.0015),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_grid(p, 20.0, 50, RadialGrid::Grading::geometric, 1.0015),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_grid(p, 20.0, 4000, RadialGrid::Grading::geometric, 1.2),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_grid(p, 20.0, 4000, RadialGrid::Grading::geometric, 1.0),
                  std::invalid_argument);
}

TEST_CASE("grid records the truncation scale") {
  const RadialGrid& g = testsup::ref_b1().sys.grid;
  // closed form for alpha=3, beta=4, c=1
  const double J = (2.0 / 3.0) * (std::sqrt(1.0 + 8000.0) - std::sqrt(2.0));
  CHECK(g.J_at_R == doctest::Approx(J).epsilon(1e-9));
  CHECK(g.truncation_adequate);
  CHECK(g.R == 20.0);
  CHECK(g.nodes.back() == 20.0);
}

TEST_CASE("stiffness annihilates constants away from the Dirichlet end") {
  const DiscreteSystem& sys = testsup::ref_b1().sys;
  const int nf = sys.n_free();
  double scale = 0.0;
  for (int i = 0; i < nf; ++i) scale = std::max(scale, std::abs(sys.stiff_diag[i]));
  for (int i = 0; i + 1 < nf; ++i) {
    double row = sys.stiff_diag[i];
    if (i > 0) row += sys.stiff_off[i - 1];
    row += sys.stiff_off[i];
    CHECK(std::abs(row) <= 1e-12 * scale);
  }
  // the last free row sees the eliminated boundary node
  double last = sys.stiff_diag[nf - 1] + sys.stiff_off[nf - 2];
  CHECK(std::abs(last) > 1e-9 * scale);
}

TEST_CASE("stiffness quadratic form is nonnegative") {
  const DiscreteSystem& sys = testsup::small_b0().sys;
  const int nf = sys.n_free();
  std::vector<double> v(nf);
  for (int i = 0; i < nf; ++i) v[i] = std::sin(3.0 * i + 0.7);
  long double q = 0.0;
  for (int i = 0; i < nf; ++i) q += (long double)sys.stiff_diag[i] * v[i] * v[i];
  for (int i = 0; i + 1 < nf; ++i)
    q += 2.0L * sys.stiff_off[i] * v[i] * v[i + 1];
  CHECK(static_cast<double>(q) >= 0.0);
}

TEST_CASE("lumped mass sums to the measure of the ball") {
  // sum_i M_ii ~ int_0^R r^2/(1+r^3) dr = log(1+R^3)/3 for N=3, alpha=3.
  const DiscreteSystem& sys = testsup::ref_b1().sys;
  long double total = 0.0;
  for (double m : sys.mass_diag) total += m;
  const double exact = std::log(1.0 + 8000.0) / 3.0;
  CHECK(static_cast<double>(total) == doctest::Approx(exact).epsilon(1e-3));
  for (double m : sys.mass_diag) CHECK(m > 0.0);
}

TEST_CASE("assembly is deterministic") {
  OperatorParams p = validate_params(3, 3, 4, 1, 1);
  RadialGrid g1 = build_grid(p, 20.0, 500, RadialGrid::Grading::geometric, 1.01);
  RadialGrid g2 = build_grid(p, 20.0, 500, RadialGrid::Grading::geometric, 1.01);
  DiscreteSystem a = assemble_H_mu(p, g1), b = assemble_H_mu(p, g2);
  CHECK(a.stiff_diag == b.stiff_diag);
  CHECK(a.stiff_off == b.stiff_off);
  CHECK(a.pot_diag == b.pot_diag);
  CHECK(a.mass_diag == b.mass_diag);
}

TEST_CASE("drift stencil reproduces the zero-order term on constants") {
  OperatorParams p = validate_params(3, 3, 4, 1, 1);
  RadialGrid g = build_grid(p, 20.0, 1000, RadialGrid::Grading::uniform);
  DiscreteSystem sys = assemble_H_mu(p, g);
  assemble_A_radial(p, sys);
  REQUIRE(sys.has_drift);
  const int nf = sys.n_free();
  // A 1 = -c r^beta; interior rows must reproduce it to rounding
  for (int i = 1; i + 1 < nf; ++i) {
    const double row = sys.drift_sub[i] + sys.drift_diag[i] + sys.drift_sup[i];
    const double want = -p.c * std::pow(sys.node(i), p.beta);
    CHECK(row == doctest::Approx(want).epsilon(1e-10));
  }
}

TEST_CASE("drift stencil is second order") {
  OperatorParams p = validate_params(3, 3, 4, 1, 1);
  // worst interior defect of the stencil applied to u against the exact Au
  auto max_defect = [&](int n, auto&& u_of, auto&& au_of) {
    RadialGrid g = build_grid(p, 20.0, n, RadialGrid::Grading::uniform);
    DiscreteSystem sys = assemble_H_mu(p, g);
    assemble_A_radial(p, sys);
    const int nf = sys.n_free();
    std::vector<double> u(nf);
    for (int i = 0; i < nf; ++i) u[i] = u_of(sys.node(i));
    double worst = 0.0;
    for (int i = 1; i + 2 < nf; ++i) {
      const double au = sys.drift_sub[i] * u[i - 1] + sys.drift_diag[i] * u[i] +
                        sys.drift_sup[i] * u[i + 1];
      worst = std::max(worst, std::abs(au - au_of(sys.node(i))));
    }
    return worst;
  };
  // centered differences on a uniform grid are exact on quadratics;
  // (1+r^a)(u'' + (N-1)/r u') + b r^(a-1) u' - c r^b u with u = r^2
  auto quad_exact = [&](double r) {
    return (1.0 + std::pow(r, p.alpha)) * 6.0 +
           p.b * std::pow(r, p.alpha - 1.0) * 2.0 * r -
           p.c * std::pow(r, p.beta) * r * r;
  };
  CHECK(max_defect(1000, [](double r) { return r * r; }, quad_exact) <= 1e-5);
  // on sin the truncation error is genuine; halving the step gains ~4x
  auto sin_exact = [&](double r) {
    return (1.0 + std::pow(r, p.alpha)) *
               (-std::sin(r) + (p.dim_N - 1.0) / r * std::cos(r)) +
           p.b * std::pow(r, p.alpha - 1.0) * std::cos(r) -
           p.c * std::pow(r, p.beta) * std::sin(r);
  };
  auto sine = [](double r) { return std::sin(r); };
  const double e1 = max_defect(1000, sine, sin_exact);
  const double e2 = max_defect(2000, sine, sin_exact);
  const double order = std::log2(e1 / e2);
  CHECK(order > 1.6);
  CHECK(order < 2.4);
}

TEST_CASE("grid extension preserves the interior cells") {
  OperatorParams p = validate_params(3, 3, 4, 1, 1);
  RadialGrid g = build_grid(p, 20.0, 500, RadialGrid::Grading::geometric, 1.01);
  RadialGrid ge = extend_grid(p, g, 30.0);
  REQUIRE(ge.n() > g.n());
  for (int i = 0; i < g.n(); ++i) CHECK(ge.nodes[i] == g.nodes[i]);
  const double w = g.nodes[g.n() - 1] - g.nodes[g.n() - 2];
  for (int i = g.n(); i < ge.n(); ++i)
    CHECK(ge.nodes[i] - ge.nodes[i - 1] == doctest::Approx(w).epsilon(1e-9));
  CHECK(ge.nodes.back() >= 30.0 - w);
  CHECK_THROWS_AS(extend_grid(p, g, 15.0), std::invalid_argument);
  CHECK_NOTHROW(assemble_H_mu(p, ge));
}

TEST_CASE("mass-symmetrized matrix entries") {
  const DiscreteSystem& sys = testsup::small_b0().sys;
  SymTridiagonal T = symmetrized_system(sys);
  REQUIRE(T.size() == sys.n_free());
  for (int i = 0; i < T.size(); ++i) {
    const double want = (sys.stiff_diag[i] + sys.pot_diag[i]) / sys.mass_diag[i];
    CHECK(T.diag[i] == doctest::Approx(want).epsilon(1e-14));
  }
  for (int i = 0; i + 1 < T.size(); ++i) {
    const double want =
        sys.stiff_off[i] / std::sqrt(sys.mass_diag[i] * sys.mass_diag[i + 1]);
    CHECK(T.off[i] == doctest::Approx(want).epsilon(1e-14));
  }
}

TEST_CASE("energy form matches the matrix quadratic form") {
  const DiscreteSystem& sys = testsup::small_b0().sys;
  const int nf = sys.n_free();
  std::vector<double> v(nf), w(nf);
  for (int i = 0; i < nf; ++i) {
    v[i] = std::cos(0.01 * i);
    w[i] = std::sin(0.02 * i + 0.3);
  }
  long double direct = 0.0;
  for (int i = 0; i < nf; ++i)
    direct += (long double)(sys.stiff_diag[i] + sys.pot_diag[i]) * v[i] * w[i];
  for (int i = 0; i + 1 < nf; ++i)
    direct += (long double)sys.stiff_off[i] * (v[i] * w[i + 1] + v[i + 1] * w[i]);
  const double got = form_h(sys, v, w);
  CHECK(got == doctest::Approx(static_cast<double>(direct))
                   .epsilon(1e-9));
}

TEST_CASE("drift and symmetric pictures agree after conjugation") {
  OperatorParams p = validate_params(3, 3, 4, 1, 1);
  RadialGrid g = build_grid(p, 20.0, 1000,
                            RadialGrid::Grading::geometric,
                            std::pow(std::pow(1.0015, 3999.0), 1.0 / 999.0));
  DiscreteSystem sys = assemble_H_mu(p, g);
  assemble_A_radial(p, sys);
  SimilarityReport rep = similarity_transform_check(sys, 5);
  REQUIRE(rep.sym_eigenvalues.size() == 5);
  REQUIRE(rep.drift_eigenvalues.size() == 5);
  CHECK(rep.max_eig_rel_mismatch <= 2e-4);
  CHECK(rep.ground_vector_mismatch <= 3e-5);
  for (double lam : rep.sym_eigenvalues) CHECK(lam < 0.0);
}

TEST_CASE("similarity check requires the drift assembly") {
  DiscreteSystem sys = testsup::small_b0().sys;  // copy without drift arrays
  sys.has_drift = false;
  CHECK_THROWS_AS(similarity_transform_check(sys, 3), std::invalid_argument);
}
