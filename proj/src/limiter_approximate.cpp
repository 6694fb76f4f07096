#include "entroflux/limiter_approximate.hpp"

#include <algorithm>
#include <cmath>

namespace entroflux {

namespace {

constexpr double kWRoundoff = 1e-11;

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

}  // namespace

std::vector<double> compute_bound_limiters(const InterfaceFluxSet& fluxes,
                                           const CellField& y, double dx,
                                           double dt, ApproxWorkspace* ws) {
  const int n = y.n();
  const BoundTargets targets = compute_bound_targets(fluxes, y, dx, dt);

  std::vector<double> p_plus(n), p_minus(n), r_plus(n), r_minus(n);
  for (int i = 0; i < n; ++i) {
    // Row contributions at alpha = 1, split by sign: the right interface
    // enters with -h_ad, the left one with +h_ad.
    const double from_right = -fluxes.h_ad[i + 1];
    const double from_left = fluxes.h_ad[i];
    p_plus[i] = std::max(0.0, from_right) + std::max(0.0, from_left);
    p_minus[i] = std::min(0.0, from_right) + std::min(0.0, from_left);
    r_plus[i] =
        p_plus[i] > 0.0 ? clamp01(targets.q_plus[i] / p_plus[i]) : 1.0;
    r_minus[i] =
        p_minus[i] < 0.0 ? clamp01(targets.q_minus[i] / p_minus[i]) : 1.0;
  }

  auto rp = [&](int i) { return i < 0 || i >= n ? 1.0 : r_plus[i]; };
  auto rm = [&](int i) { return i < 0 || i >= n ? 1.0 : r_minus[i]; };

  std::vector<double> alpha_bar(n + 1);
  for (int k = 0; k <= n; ++k) {
    const double had = fluxes.h_ad[k];
    // Interface k raises cell k and drains cell k-1 when h_ad < 0, and the
    // other way round when h_ad > 0; cap by the threatened bound's factor on
    // each side.
    if (had < 0.0)
      alpha_bar[k] = std::min(rp(k - 1), rm(k));
    else if (had > 0.0)
      alpha_bar[k] = std::min(rm(k - 1), rp(k));
    else
      alpha_bar[k] = 1.0;
  }

  if (ws) {
    ws->q_plus = targets.q_plus;
    ws->q_minus = targets.q_minus;
    ws->p_plus = std::move(p_plus);
    ws->p_minus = std::move(p_minus);
    ws->r_plus = std::move(r_plus);
    ws->r_minus = std::move(r_minus);
    ws->alpha_bar = alpha_bar;
  }
  return alpha_bar;
}

std::vector<double> compute_entropy_limiters(
    const ProblemSpec& problem, const InterfaceFluxSet& fluxes,
    const CellField& y, const CellField& y_hat, const std::vector<double>& b,
    EntropyVariant variant, double dt, ApproxWorkspace* ws,
    std::vector<int>* infeasible_cells) {
  const int n = y.n();
  const EntropyTerms terms =
      compute_entropy_terms(problem, fluxes, y, y_hat, b, variant, dt);

  std::vector<double> y_neg(n), t_left(n), t_right(n);
  std::vector<int> bad;
  for (int i = 0; i < n; ++i) {
    y_neg[i] = std::min(0.0, terms.d_left[i]) + std::min(0.0, terms.d_right[i]);
    if (terms.w[i] > kWRoundoff) {
      bad.push_back(i);
      t_left[i] = t_right[i] = 0.0;
      continue;
    }
    auto cap = [&](double d) {
      if (d >= 0.0) return 1.0;  // the row cannot be violated through this one
      return clamp01(terms.w[i] / y_neg[i]);
    };
    t_left[i] = cap(terms.d_left[i]);
    t_right[i] = cap(terms.d_right[i]);
  }

  std::vector<double> alpha_tilde(n + 1);
  for (int k = 0; k <= n; ++k) {
    const double from_left = k - 1 >= 0 ? t_right[k - 1] : 1.0;
    const double from_right = k < n ? t_left[k] : 1.0;
    alpha_tilde[k] = std::min(from_left, from_right);
  }

  if (ws) {
    ws->w = terms.w;
    ws->d_left = terms.d_left;
    ws->d_right = terms.d_right;
    ws->y_neg = std::move(y_neg);
    ws->alpha_tilde = alpha_tilde;
    ws->infeasible_cells = bad;
  }
  if (infeasible_cells) *infeasible_cells = std::move(bad);
  return alpha_tilde;
}

std::vector<double> approximate_limiters(const ProblemSpec& problem,
                                         const InterfaceFluxSet& fluxes,
                                         const CellField& y,
                                         const CellField& y_hat,
                                         const LimiterIterationConfig& config,
                                         double dt, ApproxWorkspace* ws) {
  const double dx = problem.grid.dx();
  std::vector<double> alpha =
      compute_bound_limiters(fluxes, y, dx, dt, ws);
  if (config.entropy_variant != EntropyVariant::none) {
    const std::vector<double> b = resolve_b_multipliers(problem, y, config);
    const std::vector<double> tilde = compute_entropy_limiters(
        problem, fluxes, y, y_hat, b, config.entropy_variant, dt, ws);
    for (std::size_t k = 0; k < alpha.size(); ++k)
      alpha[k] = std::min(alpha[k], tilde[k]);
  } else if (ws) {
    ws->alpha_tilde.assign(alpha.size(), 1.0);
    ws->infeasible_cells.clear();
  }
  if (ws) ws->alpha = alpha;
  return alpha;
}

}  // namespace entroflux
