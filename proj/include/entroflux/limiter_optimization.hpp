#pragma once

#include <string>
#include <vector>

#include "entroflux/core_model.hpp"
#include "entroflux/lp_solver.hpp"
#include "entroflux/numerical_fluxes.hpp"

namespace entroflux {

enum class EntropyVariant { proper, tadmor, none };

/// Start value for the predictor state the entropy rows are linearized
/// around. `monotone` (the uncorrected low-order update) makes the first
/// program provably feasible; `identity` starts from the current state.
enum class PredictorInit { monotone, identity };

struct LimiterIterationConfig {
  double delta = 1e-12;  // denominator floor in the state stop test
  double eps1 = 1e-8;    // relative state tolerance
  double eps2 = 1e-8;    // limiter tolerance
  int max_outer_iterations = 50;
  std::vector<double> c_weights;      // per-interface objective; empty = ones
  std::vector<double> b_multipliers;  // per-cell linearization; empty = U'(y_i)
  EntropyVariant entropy_variant = EntropyVariant::proper;
  PredictorInit predictor_init = PredictorInit::monotone;
  // Convergence additionally requires every cell entropy residual (measured
  // with the variant's own numerical entropy flux) to sit below this bound;
  // the plain fixed-point test alone can stop ~1e-7 away from the inequality
  // near strong jumps. Ignored for entropy_variant none.
  double entropy_residual_tol = 2e-10;
  bool collect_lp_dumps = false;
  int lp_max_iterations = 0;  // pivot budget per solve; 0 = solver default
};

struct LimiterResult {
  std::vector<double> alpha;  // one per interface, in [0,1]
  CellField y_next;
  int outer_iterations = 0;
  bool converged = false;
  bool lp_fallback = false;  // LP hit its pivot budget; alpha was reset to 0
  double objective_value = 0.0;
  double max_entropy_residual = 0.0;  // at the returned pair; 0 for variant none
  std::vector<std::string> lp_dumps;  // one per outer iteration if collected
};

/// Explicit corrected update: y_i - (dt/dx) * d[h_low + alpha*h_ad].
/// Ghost cells are carried over from y unchanged.
CellField apply_corrected_update(const CellField& y,
                                 const InterfaceFluxSet& fluxes,
                                 const std::vector<double>& alpha, double dx,
                                 double dt);

/// The alpha = 0 case of the above: the uncorrected low-order update.
CellField monotone_update(const CellField& y, const InterfaceFluxSet& fluxes,
                          double dx, double dt);

/// Per-cell admissible range for the corrected update, expressed as targets
/// for the interface corrections:
///   q_minus_i <= -alpha_r h_ad_r + alpha_l h_ad_l <= q_plus_i
/// with q^± = (dx/dt)(min/max of {y_{i-1},y_i,y_{i+1}} - y_i) + h_low_r - h_low_l.
struct BoundTargets {
  std::vector<double> q_minus;
  std::vector<double> q_plus;
};
BoundTargets compute_bound_targets(const InterfaceFluxSet& fluxes,
                                   const CellField& y, double dx, double dt);

/// Per-cell linearized entropy inequality data: the row reads
///   alpha_r * d_right_i + alpha_l * d_left_i >= w_i.
/// `proper` linearizes U around y with multiplier b_i and uses the flux set's
/// own entropy fluxes; `tadmor` uses the entropy-variable pairing instead.
struct EntropyTerms {
  std::vector<double> w;
  std::vector<double> d_left;
  std::vector<double> d_right;
};
EntropyTerms compute_entropy_terms(const ProblemSpec& problem,
                                   const InterfaceFluxSet& fluxes,
                                   const CellField& y, const CellField& y_hat,
                                   const std::vector<double>& b,
                                   EntropyVariant variant, double dt);

/// One range row per cell over the interface limiters (variable k = interface
/// k). Zero coefficients are omitted from the sparse lists; the rows
/// themselves are always n_cells long.
std::vector<LpRow> build_bound_rows(const InterfaceFluxSet& fluxes,
                                    const CellField& y, double dx, double dt);

/// One one-sided row per cell (empty for variant none).
std::vector<LpRow> build_entropy_rows(const ProblemSpec& problem,
                                      const InterfaceFluxSet& fluxes,
                                      const CellField& y,
                                      const CellField& y_hat,
                                      const LimiterIterationConfig& config,
                                      double dt);

/// Cell entropy residuals U(y_hat)-U(y) + (dt/dx)*d[H_corrected] for the
/// given limiters; H_corrected follows the variant (proper: H_low + alpha*H_ad,
/// tadmor: entropy-variable flux of the corrected h). Returns one value per
/// cell; nonpositive values mean the inequality holds.
std::vector<double> cell_entropy_residuals(const ProblemSpec& problem,
                                           const InterfaceFluxSet& fluxes,
                                           const CellField& y,
                                           const CellField& y_hat,
                                           const std::vector<double>& alpha,
                                           EntropyVariant variant, double dt);

/// Per-cell linearization multipliers: config.b_multipliers or U'(y_i).
std::vector<double> resolve_b_multipliers(const ProblemSpec& problem,
                                          const CellField& y,
                                          const LimiterIterationConfig& config);

/// Fixed-point iteration over (limiters, predictor state): assemble rows at
/// the current predictor, maximize sum c*alpha by LP, re-update, stop when
/// both the state and the limiters settle and (for entropy variants) the
/// residual guard holds. Throws on an infeasible program (cannot happen when
/// dt obeys the step restrictions) with the program text in the message.
LimiterResult solve_step_limiters(const ProblemSpec& problem,
                                  const InterfaceFluxSet& fluxes,
                                  const CellField& y,
                                  const LimiterIterationConfig& config,
                                  double dt);

}  // namespace entroflux
