#pragma once

#include <vector>

#include "entroflux/core_model.hpp"
#include "entroflux/limiter_optimization.hpp"
#include "entroflux/numerical_fluxes.hpp"

namespace entroflux {

/// Intermediate per-cell quantities of the closed-form limiter, exposed for
/// inspection in tests and diagnostics.
struct ApproxWorkspace {
  // Bound part (per cell): admissible-range targets, raw antidiffusive
  // in/outflows split by sign, and the resulting scale factors.
  std::vector<double> q_plus, q_minus;
  std::vector<double> p_plus, p_minus;
  std::vector<double> r_plus, r_minus;
  // Entropy part (per cell): row target, interface coefficients, and the sum
  // of the negative coefficients.
  std::vector<double> w, d_left, d_right, y_neg;
  // Per interface.
  std::vector<double> alpha_bar, alpha_tilde, alpha;
  // Cells whose entropy row cannot be satisfied even at alpha = 0 (target
  // above roundoff-positive): signals a time-step/linearization violation.
  std::vector<int> infeasible_cells;
};

/// Zalesak-style scale factors for the admissible-range rows:
/// r± = clamp(q±/p±) with r := 1 when p = 0, then
/// alpha_bar_k = min of the receiving-side r of the two adjacent cells
/// (ghost side counts as 1), and 1 where h_ad = 0.
std::vector<double> compute_bound_limiters(const InterfaceFluxSet& fluxes,
                                           const CellField& y, double dx,
                                           double dt,
                                           ApproxWorkspace* ws = nullptr);

/// Closed-form cap for the one-sided entropy rows, linearized at y_hat with
/// multipliers b: each cell contributes min(1, w/y_neg) to interfaces whose
/// coefficient is negative and no restriction otherwise; alpha_tilde is the
/// min of the two adjacent contributions. Cells with w above roundoff are
/// reported through ws->infeasible_cells (or the optional out-parameter) and
/// contribute 0.
std::vector<double> compute_entropy_limiters(
    const ProblemSpec& problem, const InterfaceFluxSet& fluxes,
    const CellField& y, const CellField& y_hat, const std::vector<double>& b,
    EntropyVariant variant, double dt, ApproxWorkspace* ws = nullptr,
    std::vector<int>* infeasible_cells = nullptr);

/// Full closed-form limiter: alpha = min(alpha_bar, alpha_tilde), with the
/// entropy part skipped for entropy_variant none. Fills `ws` when given.
std::vector<double> approximate_limiters(const ProblemSpec& problem,
                                         const InterfaceFluxSet& fluxes,
                                         const CellField& y,
                                         const CellField& y_hat,
                                         const LimiterIterationConfig& config,
                                         double dt,
                                         ApproxWorkspace* ws = nullptr);

}  // namespace entroflux
