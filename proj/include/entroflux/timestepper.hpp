#pragma once

#include <string>
#include <vector>

#include "entroflux/core_model.hpp"
#include "entroflux/limiter_approximate.hpp"
#include "entroflux/limiter_optimization.hpp"
#include "entroflux/numerical_fluxes.hpp"

namespace entroflux {

/// How the interface correction factors are chosen each step.
///   exact_lp     solve the per-step linear program to optimality
///   approximate  closed-form factors inside the same predictor iteration
///   none         alpha = 0: the pure low-order monotone scheme
///   unlimited    alpha = 1: the raw high-order scheme, no safeguards
enum class LimiterStrategy { exact_lp, approximate, none, unlimited };

struct SchemeConfig {
  LowFluxKind low_flux = LowFluxKind::rusanov;
  HighFluxKind high_flux = HighFluxKind::none;
  LimiterStrategy limiter = LimiterStrategy::none;
  LimiterIterationConfig iteration;  // weights, entropy variant, stop rule
};

/// Step-size restrictions evaluated at one field, reported as largest
/// admissible steps per restriction plus the ratios dt/admissible for the dt
/// under test. Report-only; the driver decides which restrictions bind.
struct StepCheck {
  double dt = 0.0;
  double max_dt_monotone = 0.0;  // neighbour-bounds (convex-combination) cap
  double max_dt_proper = 0.0;    // cell entropy inequality, scheme's own flux
  double max_dt_tadmor = 0.0;    // entropy-variable pairing
  double monotone_ratio = 0.0;
  double proper_ratio = 0.0;
  double tadmor_ratio = 0.0;

  // Most binding ratio for a run limited by the given entropy variant.
  double binding_ratio(EntropyVariant variant) const;
  bool ok(EntropyVariant variant) const {
    return binding_ratio(variant) <= 1.0 + 1e-9;
  }
};

StepCheck check_time_step(const ProblemSpec& problem, const CellField& y,
                          LowFluxKind low, double dt);

struct StepDiagnostics {
  double time = 0.0;  // time at the END of the step
  double dt = 0.0;
  double max_proper_residual = 0.0;
  double max_tadmor_residual = 0.0;
  double min_bound_slack = 0.0;  // distance to local min/max; < 0 = violated
  double conservation_error = 0.0;  // |mass update - flux ledger| / scale
  double alpha_min = 1.0;
  double alpha_mean = 1.0;
  int outer_iterations = 0;
  bool limiter_converged = true;
  bool limiter_fallback = false;  // correction dropped, monotone step taken
  // Correction factors actually applied; filled for the exact_lp and
  // approximate strategies, empty for the trivial ones.
  std::vector<double> alpha;
};

struct StepResult {
  CellField y_next;
  StepDiagnostics diag;
};

/// One forward-Euler step of the corrected scheme. Ghost cells stay frozen
/// and the boundary interfaces carry no correction. Throws on non-finite
/// states (naming the first offending cell) and propagates limiter errors.
StepResult advance_step(const ProblemSpec& problem, const CellField& y,
                        const SchemeConfig& config, double dt);

struct Snapshot {
  double time = 0.0;
  CellField field;
  // Per-cell entropy residuals of the step that landed on this time, under
  // both entropy flux pairings, and the correction factors used. Empty at
  // t = 0.
  std::vector<double> proper_residuals;
  std::vector<double> tadmor_residuals;
  std::vector<double> alpha;
};

struct SolutionTrace {
  std::vector<Snapshot> snapshots;
  std::vector<StepDiagnostics> steps;
  double initial_mass = 0.0;
  double final_mass = 0.0;
  double boundary_flux_integral = 0.0;  // accumulated dt*(h_right - h_left)
  double max_conservation_error = 0.0;
  double max_proper_residual = 0.0;
  double max_tadmor_residual = 0.0;
  double min_bound_slack = 0.0;
  bool completed = false;
  std::string abort_reason;  // set when completed == false
};

struct TimePolicy {
  bool adaptive = false;
  double dt = 0.0;       // fixed step; 0 = problem.fixed_dt
  double courant = 0.0;  // adaptive fraction of the admissible step;
                         // 0 = problem.default_courant
};

/// March the scheme to problem.end_time, recording the field at t = 0, at
/// every requested snapshot time and at the end time (steps are clipped so
/// snapshots land exactly). Fixed mode verifies the step restrictions before
/// every step and aborts on violation; adaptive mode sizes the step from
/// check_time_step. Aborts keep the partial trace and set abort_reason.
SolutionTrace run_simulation(const ProblemSpec& problem,
                             const SchemeConfig& config,
                             const TimePolicy& policy,
                             std::vector<double> snapshot_times = {});

}  // namespace entroflux
