#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "entroflux/lp_solver.hpp"
#include "entroflux/verify.hpp"

using namespace entroflux;

namespace {

double row_value(const LpRow& row, const std::vector<double>& x) {
  double s = 0.0;
  for (const auto& [j, v] : row.coeffs) s += v * x[j];
  return s;
}

double max_violation(const LinearProgram& lp, const std::vector<double>& x) {
  double viol = 0.0;
  for (int j = 0; j < lp.n_vars; ++j) {
    viol = std::max(viol, lp.var_lower[j] - x[j]);
    viol = std::max(viol, x[j] - lp.var_upper[j]);
  }
  for (const auto& row : lp.rows) {
    const double s = row_value(row, x);
    if (std::isfinite(row.lower)) viol = std::max(viol, row.lower - s);
    if (std::isfinite(row.upper)) viol = std::max(viol, s - row.upper);
  }
  return viol;
}

}  // namespace

TEST_CASE("box optimum with no rows") {
  LinearProgram lp = LinearProgram::boxed(1);
  lp.objective[0] = 1.0;
  const LpSolution sol = solve(lp);
  REQUIRE(sol.status == LpStatus::optimal);
  CHECK(sol.x[0] == 1.0);
  CHECK(sol.objective == 1.0);
}

TEST_CASE("single binding row ties two variables") {
  LinearProgram lp = LinearProgram::boxed(2);
  lp.objective = {1.0, 1.0};
  lp.add_row({{0, 1.0}, {1, 1.0}}, -std::numeric_limits<double>::infinity(),
             1.0);
  const LpSolution sol = solve(lp);
  REQUIRE(sol.status == LpStatus::optimal);
  CHECK(sol.objective == doctest::Approx(1.0).epsilon(1e-12));
  // Smallest-index entering rule reaches the (1, 0) vertex.
  CHECK(sol.x[0] == 1.0);
  CHECK(sol.x[1] == 0.0);
}

TEST_CASE("scaled single-variable row") {
  LinearProgram lp = LinearProgram::boxed(1);
  lp.objective[0] = 1.0;
  lp.add_row({{0, 2.0}}, -std::numeric_limits<double>::infinity(), 1.0);
  const LpSolution sol = solve(lp);
  REQUIRE(sol.status == LpStatus::optimal);
  CHECK(sol.x[0] == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("equality row forces phase one") {
  LinearProgram lp = LinearProgram::boxed(2);
  lp.objective = {1.0, 1.0};
  lp.add_row({{0, 1.0}, {1, -1.0}}, 0.25, 0.25);
  const LpSolution sol = solve(lp);
  REQUIRE(sol.status == LpStatus::optimal);
  CHECK(sol.x[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(sol.x[1] == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(sol.objective == doctest::Approx(1.75).epsilon(1e-12));
}

TEST_CASE("active lower-bounded row") {
  LinearProgram lp = LinearProgram::boxed(2);
  lp.objective = {-1.0, -1.0};
  lp.add_row({{0, 1.0}, {1, 1.0}}, 0.5,
             std::numeric_limits<double>::infinity());
  const LpSolution sol = solve(lp);
  REQUIRE(sol.status == LpStatus::optimal);
  CHECK(sol.objective == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(max_violation(lp, sol.x) <= 1e-9);
}

TEST_CASE("fixed variable stays put") {
  LinearProgram lp = LinearProgram::boxed(2);
  lp.var_lower[1] = lp.var_upper[1] = 0.3;
  lp.objective = {1.0, 5.0};
  const LpSolution sol = solve(lp);
  REQUIRE(sol.status == LpStatus::optimal);
  CHECK(sol.x[0] == 1.0);
  CHECK(sol.x[1] == 0.3);
}

TEST_CASE("infeasible row is reported") {
  LinearProgram lp = LinearProgram::boxed(1);
  lp.objective[0] = 1.0;
  lp.add_row({{0, 1.0}}, 2.0, std::numeric_limits<double>::infinity());
  const LpSolution sol = solve(lp);
  CHECK(sol.status == LpStatus::infeasible);
}

TEST_CASE("conflicting rows are reported infeasible") {
  LinearProgram lp = LinearProgram::boxed(3);
  lp.add_row({{0, 1.0}, {1, 1.0}}, 1.8, std::numeric_limits<double>::infinity());
  lp.add_row({{0, 1.0}, {1, 1.0}, {2, 1.0}},
             -std::numeric_limits<double>::infinity(), 1.2);
  lp.add_row({{2, 1.0}}, 0.4, std::numeric_limits<double>::infinity());
  const LpSolution sol = solve(lp);
  CHECK(sol.status == LpStatus::infeasible);
}

TEST_CASE("iteration budget is honoured") {
  LinearProgram lp = LinearProgram::boxed(2);
  lp.objective = {-1.0, -1.0};
  lp.add_row({{0, 1.0}, {1, 1.0}}, 0.5,
             std::numeric_limits<double>::infinity());
  LpOptions opt;
  opt.max_iterations = 1;
  const LpSolution sol = solve(lp, opt);
  CHECK(sol.status == LpStatus::iteration_limit);
}

TEST_CASE("repeat solves are bitwise identical") {
  std::mt19937_64 rng(20240817u);
  for (int trial = 0; trial < 50; ++trial) {
    const LinearProgram lp = verify::random_boxed_lp(rng);
    const LpSolution a = solve(lp);
    const LpSolution b = solve(lp);
    REQUIRE(a.status == b.status);
    REQUIRE(a.iterations == b.iterations);
    if (a.status == LpStatus::optimal) {
      REQUIRE(a.objective == b.objective);
      for (int j = 0; j < lp.n_vars; ++j) REQUIRE(a.x[j] == b.x[j]);
    }
  }
}

TEST_CASE("random programs against the vertex-enumeration oracle") {
  std::mt19937_64 rng(7u);
  int solved = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const LinearProgram lp = verify::random_boxed_lp(rng);
    CAPTURE(trial);
    const LpSolution sol = solve(lp);
    const verify::LpOracleResult ref = verify::lp_vertex_oracle(lp);
    REQUIRE(ref.feasible == (sol.status == LpStatus::optimal));
    if (!ref.feasible) continue;
    ++solved;
    CHECK(std::fabs(sol.objective - ref.objective) <= 1e-8);
    CHECK(max_violation(lp, sol.x) <= 1e-9);
  }
  CHECK(solved >= 50);  // the generator must not degenerate into one class
}

TEST_CASE("no feasible sample beats the returned optimum") {
  std::mt19937_64 rng(99u);
  int compared = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const LinearProgram lp = verify::random_boxed_lp(rng);
    const LpSolution sol = solve(lp);
    if (sol.status != LpStatus::optimal) continue;
    for (int s = 0; s < 60; ++s) {
      std::vector<double> pt(lp.n_vars);
      for (int j = 0; j < lp.n_vars; ++j)
        pt[j] = verify::uniform(rng, lp.var_lower[j], lp.var_upper[j]);
      if (max_violation(lp, pt) > 0.0) continue;
      double obj = 0.0;
      for (int j = 0; j < lp.n_vars; ++j) obj += lp.objective[j] * pt[j];
      REQUIRE(obj <= sol.objective + 1e-8);
      ++compared;
    }
  }
  CHECK(compared > 500);
}

TEST_CASE("adjacent-pair rows shaped like limiter constraints") {
  // Chains of rows touching variables (k, k+1) with mixed signs, the shape
  // every per-step program has.
  std::mt19937_64 rng(4242u);
  for (int trial = 0; trial < 40; ++trial) {
    LinearProgram lp = LinearProgram::boxed(6);
    for (int j = 0; j < 6; ++j) lp.objective[j] = 1.0;
    for (int k = 0; k + 1 < 6; ++k) {
      const double a = verify::uniform(rng, -3.0, 3.0);
      const double b = verify::uniform(rng, -3.0, 3.0);
      const double lo = verify::uniform(rng, -2.5, 0.0);
      lp.add_row({{k, a}, {k + 1, b}}, lo, lo + verify::uniform(rng, 0.3, 3.0));
    }
    const LpSolution sol = solve(lp);
    const verify::LpOracleResult ref = verify::lp_vertex_oracle(lp);
    REQUIRE(ref.feasible == (sol.status == LpStatus::optimal));
    if (ref.feasible) {
      CHECK(std::fabs(sol.objective - ref.objective) <= 1e-8);
      CHECK(max_violation(lp, sol.x) <= 1e-9);
    }
  }
}

TEST_CASE("full oracle sweep") {
  const auto records = verify::run_lp_suite(7u, 500);
  for (const auto& rec : records) {
    CAPTURE(rec.name);
    CAPTURE(rec.detail);
    CHECK(rec.passed);
  }
}

TEST_CASE("text dump round-trips the structure") {
  LinearProgram lp = LinearProgram::boxed(2);
  lp.objective = {1.0, -0.5};
  lp.add_row({{0, 3.0}, {1, -2.0}}, -1.0, 5.0);
  lp.add_row({{1, 1.0}}, 0.25, 0.25);
  const std::string text = to_lp_text(lp);
  CHECK(text.find("Maximize") != std::string::npos);
  CHECK(text.find("Subject To") != std::string::npos);
  CHECK(text.find("Bounds") != std::string::npos);
  CHECK(text.find("+3 x0") != std::string::npos);
  CHECK(text.find("-2 x1") != std::string::npos);
  CHECK(text.find(">= -1") != std::string::npos);
  CHECK(text.find("<= 5") != std::string::npos);
  CHECK(text.find("= 0.25") != std::string::npos);
  CHECK(text.find("0 <= x0 <= 1") != std::string::npos);
  CHECK(text.find("End") != std::string::npos);
}

TEST_CASE("malformed programs are rejected") {
  LinearProgram lp = LinearProgram::boxed(2);
  lp.objective.pop_back();
  CHECK_THROWS_AS(solve(lp), std::invalid_argument);

  LinearProgram lp2 = LinearProgram::boxed(2);
  lp2.var_lower[0] = 2.0;  // above upper
  CHECK_THROWS_AS(solve(lp2), std::invalid_argument);

  LinearProgram lp3 = LinearProgram::boxed(2);
  lp3.add_row({{5, 1.0}}, 0.0, 1.0);
  CHECK_THROWS_AS(solve(lp3), std::invalid_argument);

  LinearProgram lp4 = LinearProgram::boxed(2);
  lp4.var_upper[1] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(solve(lp4), std::invalid_argument);

  LinearProgram lp5 = LinearProgram::boxed(2);
  lp5.add_row({{0, 1.0}}, 1.0, 0.0);
  CHECK_THROWS_AS(solve(lp5), std::invalid_argument);
}
