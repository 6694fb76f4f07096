#pragma once

#include <random>
#include <string>
#include <vector>

#include "entroflux/lp_solver.hpp"

namespace entroflux::verify {

// Deterministic draws layered over mt19937_64 so results do not depend on
// the standard library's distribution implementations.
double uniform(std::mt19937_64& rng);                        // [0,1)
double uniform(std::mt19937_64& rng, double a, double b);
int uniform_int(std::mt19937_64& rng, int lo, int hi);        // inclusive

struct CheckRecord {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct LpOracleResult {
  bool feasible = false;
  double objective = 0.0;
};

/// Brute-force reference: enumerate every choice of n active hyperplanes
/// (variable bounds and finite row sides), solve the square system, keep the
/// feasible intersection points, return the best objective among them. Only
/// usable for small programs.
LpOracleResult lp_vertex_oracle(const LinearProgram& lp);

/// Random small program on the unit box: 1..6 variables, 0..8 rows, mixed
/// one- and two-sided rows. Most draws are built around a sampled interior
/// point so they are robustly feasible; the rest may be infeasible.
LinearProgram random_boxed_lp(std::mt19937_64& rng);

/// Solver-versus-oracle sweep over `count` random programs. One record per
/// failure category plus a summary record; all passed == suite passed.
std::vector<CheckRecord> run_lp_suite(std::uint64_t seed, int count);

/// Numerical flux properties on random states drawn over all builtin
/// problems: consistency, interval bounds, the E-flux inequality, relative
/// dissipation, and agreement between the interface assembler and the
/// scalar flux functions.
std::vector<CheckRecord> run_flux_suite(std::uint64_t seed, int count);

/// Limiter feasibility on random admissible states: alpha = 0 satisfies the
/// constraint rows, the closed-form limiters satisfy them too, and the
/// program solve never returns a smaller objective.
std::vector<CheckRecord> run_limiter_suite(std::uint64_t seed, int count);

/// Per-step mass ledger balance for every limiter strategy, plus local
/// min/max bounds for uncorrected steps.
std::vector<CheckRecord> run_conservation_suite(std::uint64_t seed, int count);

/// Cell entropy inequality: uncorrected steps within the entropy step cap
/// have nonpositive residuals; corrected runs keep residuals within the
/// feasibility tolerance.
std::vector<CheckRecord> run_entropy_suite(std::uint64_t seed, int count);

/// Worker-thread cap: ENTROFLUX_THREADS when set (minimum 1), otherwise the
/// hardware concurrency clamped to 8.
int thread_budget();

}  // namespace entroflux::verify
