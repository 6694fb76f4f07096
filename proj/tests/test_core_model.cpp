#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "entroflux/core_model.hpp"

using namespace entroflux;

namespace {

// Brute-force oracle: dense scan, no refinement, independent of the
// candidate-based implementation.
double oracle_max_abs_fprime(const FluxFunction& flux, double a, double b) {
  const double lo = std::min(a, b), hi = std::max(a, b);
  const int n = 1 << 18;
  double best = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double u = lo + (hi - lo) * k / n;
    best = std::max(best, std::fabs(flux.fprime(u)));
  }
  return best;
}

double oracle_extremum_f(const FluxFunction& flux, double a, double b,
                         ExtremumMode mode) {
  const double lo = std::min(a, b), hi = std::max(a, b);
  const int n = 1 << 18;
  double best = flux.f(lo);
  for (int k = 1; k <= n; ++k) {
    const double u = lo + (hi - lo) * k / n;
    const double v = flux.f(u);
    best = (mode == ExtremumMode::maximum) ? std::max(best, v)
                                           : std::min(best, v);
  }
  return best;
}

FluxFunction without_analytic_points(FluxFunction flux) {
  flux.has_analytic_critical_points = false;
  flux.fprime_roots.clear();
  flux.fsecond_roots.clear();
  return flux;
}

}  // namespace

TEST_CASE("quartic flux point values") {
  const ProblemSpec p = builtin_problem("nonconvex_quartic");
  CHECK(p.flux.f(0.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(p.flux.f(1.0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(p.flux.f(-1.0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(p.flux.f(2.0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(p.flux.f(-2.0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(p.flux.fprime(2.0) == doctest::Approx(3.0));
  CHECK(p.flux.fprime(-2.0) == doctest::Approx(-3.0));
  CHECK(p.entropy.F(1.0) == doctest::Approx(-19.0 / 30.0).epsilon(1e-14));
  CHECK(p.entropy.psi(1.0) == doctest::Approx(19.0 / 30.0).epsilon(1e-14));
}

TEST_CASE("buckley-leverett flux point values") {
  const ProblemSpec p = builtin_problem("buckley_leverett");
  CHECK(p.flux.f(1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(p.flux.f(3.0) == doctest::Approx(0.9).epsilon(1e-14));
  CHECK(p.flux.f(-3.0) == doctest::Approx(9.0 / 13.0).epsilon(1e-14));
  CHECK(p.flux.fprime(0.0) == doctest::Approx(0.0));
  CHECK(p.flux.fprime(1.0) == doctest::Approx(0.0));
  REQUIRE(p.flux.fsecond_roots.size() == 3);
  for (double r : p.flux.fsecond_roots) {
    // Roots of 10u^3 - 15u^2 + 1.
    CHECK(std::fabs(10.0 * r * r * r - 15.0 * r * r + 1.0) < 1e-10);
  }
}

TEST_CASE("entropy pair consistency for every builtin") {
  std::mt19937_64 rng(12345);
  for (const auto& name : builtin_problem_names()) {
    const ProblemSpec p = builtin_problem(name);
    const double span = (name == "buckley_leverett") ? 3.0 : 2.5;
    std::uniform_real_distribution<double> dist(-span, span);
    for (int k = 0; k < 100; ++k) {
      const double u = dist(rng);
      // F' = U' f' via centered differences.
      const double h = 1e-5;
      const double fd = (p.entropy.F(u + h) - p.entropy.F(u - h)) / (2.0 * h);
      CHECK(fd == doctest::Approx(p.entropy.Uprime(u) * p.flux.fprime(u))
                      .epsilon(1e-6));
      // psi = U' f - F, exactly as composed.
      CHECK(std::fabs(p.entropy.psi(u) -
                      (p.entropy.Uprime(u) * p.flux.f(u) - p.entropy.F(u))) <
            1e-12);
      // Midpoint convexity of U.
      const double v = dist(rng);
      CHECK(p.entropy.U(0.5 * (u + v)) <=
            0.5 * (p.entropy.U(u) + p.entropy.U(v)) + 1e-12);
    }
  }
}

TEST_CASE("interval max of |f'| on the quartic") {
  const ProblemSpec p = builtin_problem("nonconvex_quartic");
  CHECK(max_abs_fprime_on_interval(p.flux, 2.0, -2.0) == doctest::Approx(3.0));
  // Order of the endpoints must not matter.
  CHECK(max_abs_fprime_on_interval(p.flux, -2.0, 2.0) ==
        max_abs_fprime_on_interval(p.flux, 2.0, -2.0));
  // Degenerate interval collapses to a point evaluation.
  CHECK(max_abs_fprime_on_interval(p.flux, 0.7, 0.7) ==
        doctest::Approx(std::fabs(p.flux.fprime(0.7))));
  // Interior peak of |f'| between 0 and 1 exceeds both endpoint values.
  const double m = max_abs_fprime_on_interval(p.flux, 0.0, 1.0);
  CHECK(m == doctest::Approx(oracle_max_abs_fprime(p.flux, 0.0, 1.0)));
  CHECK(m > std::fabs(p.flux.fprime(1.0)));
}

TEST_CASE("interval extrema of f on the quartic") {
  const ProblemSpec p = builtin_problem("nonconvex_quartic");
  CHECK(extremum_f_on_interval(p.flux, -2.0, 2.0, ExtremumMode::maximum) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(extremum_f_on_interval(p.flux, -2.0, 2.0, ExtremumMode::minimum) ==
        doctest::Approx(-0.5625).epsilon(1e-12));
  const LocatedExtremum mx =
      extremum_f_on_interval_located(p.flux, -2.0, 2.0, ExtremumMode::maximum);
  CHECK(mx.arg == doctest::Approx(0.0));
  // The minimum is attained at +-sqrt(2.5); ties break toward the smaller u.
  const LocatedExtremum mn =
      extremum_f_on_interval_located(p.flux, -2.0, 2.0, ExtremumMode::minimum);
  CHECK(mn.arg == doctest::Approx(-std::sqrt(2.5)));
}

TEST_CASE("interval routines against the dense-scan oracle") {
  std::mt19937_64 rng(777);
  for (const auto& name : builtin_problem_names()) {
    const ProblemSpec p = builtin_problem(name);
    const FluxFunction sampled = without_analytic_points(p.flux);
    const double span = (name == "buckley_leverett") ? 3.0 : 2.5;
    std::uniform_real_distribution<double> dist(-span, span);
    for (int k = 0; k < 12; ++k) {
      const double a = dist(rng), b = dist(rng);
      const double want = oracle_max_abs_fprime(p.flux, a, b);
      CHECK(max_abs_fprime_on_interval(p.flux, a, b) ==
            doctest::Approx(want).epsilon(1e-8));
      CHECK(max_abs_fprime_on_interval(sampled, a, b) ==
            doctest::Approx(want).epsilon(1e-8));
      for (ExtremumMode mode :
           {ExtremumMode::minimum, ExtremumMode::maximum}) {
        const double fw = oracle_extremum_f(p.flux, a, b, mode);
        CHECK(extremum_f_on_interval(p.flux, a, b, mode) ==
              doctest::Approx(fw).epsilon(1e-8));
        CHECK(extremum_f_on_interval(sampled, a, b, mode) ==
              doctest::Approx(fw).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("interval max grows with the interval") {
  const ProblemSpec p = builtin_problem("buckley_leverett");
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> dist(-3.0, 3.0);
  for (int k = 0; k < 100; ++k) {
    double a = dist(rng), b = dist(rng);
    if (a > b) std::swap(a, b);
    const double grow = 0.25 * (b - a);
    const double inner = max_abs_fprime_on_interval(p.flux, a, b);
    const double outer =
        max_abs_fprime_on_interval(p.flux, a - grow, b + grow);
    CHECK(outer >= inner - 1e-12);
  }
}

TEST_CASE("grid geometry") {
  const Grid1D g{0.0, 2.0, 100};
  CHECK(g.dx() == doctest::Approx(0.02));
  CHECK(g.cell_center(0) == doctest::Approx(0.01));
  CHECK(g.cell_center(99) == doctest::Approx(1.99));
  CHECK(g.interface_position(0) == doctest::Approx(0.0));
  CHECK(g.interface_position(50) == doctest::Approx(1.0));
  CHECK(g.interface_position(100) == doctest::Approx(2.0));
}

TEST_CASE("cell field ghost resolution") {
  CellField y;
  y.values = {1.0, 2.0, 3.0};
  y.left_state = -7.0;
  y.right_state = 9.0;
  CHECK(y.at(-2) == -7.0);
  CHECK(y.at(-1) == -7.0);
  CHECK(y.at(0) == 1.0);
  CHECK(y.at(2) == 3.0);
  CHECK(y.at(3) == 9.0);
  CHECK(y.at(4) == 9.0);
  CHECK(y.all_finite());
  y.values[1] = std::nan("");
  CHECK(!y.all_finite());
}

TEST_CASE("builtin problem initial fields") {
  const ProblemSpec q = builtin_problem("nonconvex_quartic");
  const CellField y = q.initial_field();
  REQUIRE(y.n() == 100);
  CHECK(y.values[49] == 2.0);   // center 0.99
  CHECK(y.values[50] == -2.0);  // center 1.01
  CHECK(y.left_state == 2.0);
  CHECK(y.right_state == -2.0);
  CHECK(q.fixed_dt == doctest::Approx(0.002));
  CHECK(q.end_time == doctest::Approx(1.2));

  const ProblemSpec bl = builtin_problem("buckley_leverett");
  CHECK(bl.grid.n_cells == 80);
  CHECK(bl.fixed_dt == 0.0);
  CHECK(bl.default_courant == doctest::Approx(0.3));

  const ProblemSpec adv = builtin_problem("linear_advection");
  CHECK(adv.fixed_dt == doctest::Approx(adv.grid.dx()));
}

TEST_CASE("unknown problem name throws") {
  CHECK_THROWS_AS(builtin_problem("no_such_problem"), std::invalid_argument);
}
