#include "entroflux/limiter_optimization.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace entroflux {

namespace {

std::vector<double> resolve_c(const LimiterIterationConfig& config,
                              int n_interfaces) {
  if (config.c_weights.empty())
    return std::vector<double>(n_interfaces, 1.0);
  if (static_cast<int>(config.c_weights.size()) != n_interfaces)
    throw std::invalid_argument("c_weights size must match interface count");
  for (double c : config.c_weights)
    if (c < 0.0) throw std::invalid_argument("c_weights must be nonnegative");
  return config.c_weights;
}

}  // namespace

CellField apply_corrected_update(const CellField& y,
                                 const InterfaceFluxSet& fluxes,
                                 const std::vector<double>& alpha, double dx,
                                 double dt) {
  const int n = y.n();
  const double lambda = dt / dx;
  CellField out = y;
  for (int i = 0; i < n; ++i) {
    const double hr = fluxes.h_low[i + 1] + alpha[i + 1] * fluxes.h_ad[i + 1];
    const double hl = fluxes.h_low[i] + alpha[i] * fluxes.h_ad[i];
    out.values[i] = y.values[i] - lambda * (hr - hl);
  }
  return out;
}

CellField monotone_update(const CellField& y, const InterfaceFluxSet& fluxes,
                          double dx, double dt) {
  const int n = y.n();
  const double lambda = dt / dx;
  CellField out = y;
  for (int i = 0; i < n; ++i)
    out.values[i] =
        y.values[i] - lambda * (fluxes.h_low[i + 1] - fluxes.h_low[i]);
  return out;
}

BoundTargets compute_bound_targets(const InterfaceFluxSet& fluxes,
                                   const CellField& y, double dx, double dt) {
  const int n = y.n();
  BoundTargets t;
  t.q_minus.resize(n);
  t.q_plus.resize(n);
  for (int i = 0; i < n; ++i) {
    const double yl = y.at(i - 1), yc = y.at(i), yr = y.at(i + 1);
    const double lo = std::min({yl, yc, yr});
    const double hi = std::max({yl, yc, yr});
    const double dlow = fluxes.h_low[i + 1] - fluxes.h_low[i];
    t.q_minus[i] = (dx / dt) * (lo - yc) + dlow;
    t.q_plus[i] = (dx / dt) * (hi - yc) + dlow;
  }
  return t;
}

EntropyTerms compute_entropy_terms(const ProblemSpec& problem,
                                   const InterfaceFluxSet& fluxes,
                                   const CellField& y, const CellField& y_hat,
                                   const std::vector<double>& b,
                                   EntropyVariant variant, double dt) {
  const int n = y.n();
  const double dx = problem.grid.dx();
  const EntropyPair& ent = problem.entropy;
  EntropyTerms terms;
  terms.w.assign(n, 0.0);
  terms.d_left.assign(n, 0.0);
  terms.d_right.assign(n, 0.0);
  if (variant == EntropyVariant::none) return terms;

  if (variant == EntropyVariant::proper) {
    for (int i = 0; i < n; ++i) {
      const double yc = y.values[i];
      const double gap =
          ent.U(y_hat.values[i]) - ent.U(yc) - b[i] * (y_hat.values[i] - yc);
      terms.w[i] = (dx / dt) * gap +
                   (fluxes.H_low[i + 1] - b[i] * fluxes.h_low[i + 1]) -
                   (fluxes.H_low[i] - b[i] * fluxes.h_low[i]);
      terms.d_right[i] = b[i] * fluxes.h_ad[i + 1] - fluxes.H_ad[i + 1];
      terms.d_left[i] = fluxes.H_ad[i] - b[i] * fluxes.h_ad[i];
    }
    return terms;
  }

  // Entropy-variable pairing: the numerical entropy flux is
  // (v_l+v_r)/2 * h - (psi_l+psi_r)/2, which turns the cell inequality into
  // rows with coefficients -h_ad*dv per interface.
  std::vector<double> v(n + 2), psi(n + 2);  // cells -1..n, offset +1
  for (int j = -1; j <= n; ++j) {
    const double u = y.at(j);
    v[j + 1] = ent.Uprime(u);
    psi[j + 1] = v[j + 1] * problem.flux.f(u) - ent.F(u);
  }
  for (int i = 0; i < n; ++i) {
    const double yc = y.values[i];
    const double vi = v[i + 1];
    const double gap =
        ent.U(y_hat.values[i]) - ent.U(yc) - vi * (y_hat.values[i] - yc);
    const double dv_r = v[i + 2] - v[i + 1];
    const double dv_l = v[i + 1] - v[i];
    const double dpsi_r = psi[i + 2] - psi[i + 1];
    const double dpsi_l = psi[i + 1] - psi[i];
    terms.w[i] = 2.0 * (dx / dt) * gap +
                 (fluxes.h_low[i + 1] * dv_r - dpsi_r) +
                 (fluxes.h_low[i] * dv_l - dpsi_l);
    terms.d_right[i] = -fluxes.h_ad[i + 1] * dv_r;
    terms.d_left[i] = -fluxes.h_ad[i] * dv_l;
  }
  return terms;
}

std::vector<LpRow> build_bound_rows(const InterfaceFluxSet& fluxes,
                                    const CellField& y, double dx, double dt) {
  const BoundTargets t = compute_bound_targets(fluxes, y, dx, dt);
  const int n = y.n();
  std::vector<LpRow> rows(n);
  for (int i = 0; i < n; ++i) {
    LpRow& row = rows[i];
    if (fluxes.h_ad[i] != 0.0) row.coeffs.emplace_back(i, fluxes.h_ad[i]);
    if (fluxes.h_ad[i + 1] != 0.0)
      row.coeffs.emplace_back(i + 1, -fluxes.h_ad[i + 1]);
    row.lower = t.q_minus[i];
    row.upper = t.q_plus[i];
  }
  return rows;
}

std::vector<LpRow> build_entropy_rows(const ProblemSpec& problem,
                                      const InterfaceFluxSet& fluxes,
                                      const CellField& y,
                                      const CellField& y_hat,
                                      const LimiterIterationConfig& config,
                                      double dt) {
  if (config.entropy_variant == EntropyVariant::none) return {};
  const std::vector<double> b = resolve_b_multipliers(problem, y, config);
  const EntropyTerms terms = compute_entropy_terms(
      problem, fluxes, y, y_hat, b, config.entropy_variant, dt);
  const int n = y.n();
  std::vector<LpRow> rows(n);
  for (int i = 0; i < n; ++i) {
    LpRow& row = rows[i];
    if (terms.d_left[i] != 0.0) row.coeffs.emplace_back(i, terms.d_left[i]);
    if (terms.d_right[i] != 0.0)
      row.coeffs.emplace_back(i + 1, terms.d_right[i]);
    row.lower = terms.w[i];
    row.upper = std::numeric_limits<double>::infinity();
  }
  return rows;
}

std::vector<double> cell_entropy_residuals(const ProblemSpec& problem,
                                           const InterfaceFluxSet& fluxes,
                                           const CellField& y,
                                           const CellField& y_hat,
                                           const std::vector<double>& alpha,
                                           EntropyVariant variant, double dt) {
  const int n = y.n();
  const double lambda = dt / problem.grid.dx();
  const EntropyPair& ent = problem.entropy;
  std::vector<double> H(n + 1);
  for (int k = 0; k <= n; ++k) {
    if (variant == EntropyVariant::tadmor) {
      const double h = fluxes.h_low[k] + alpha[k] * fluxes.h_ad[k];
      H[k] = tadmor_entropy_flux(ent, y.at(k - 1), y.at(k), h);
    } else {
      H[k] = fluxes.H_low[k] + alpha[k] * fluxes.H_ad[k];
    }
  }
  std::vector<double> res(n);
  for (int i = 0; i < n; ++i)
    res[i] = ent.U(y_hat.values[i]) - ent.U(y.values[i]) +
             lambda * (H[i + 1] - H[i]);
  return res;
}

std::vector<double> resolve_b_multipliers(const ProblemSpec& problem,
                                          const CellField& y,
                                          const LimiterIterationConfig& config) {
  const int n = y.n();
  if (!config.b_multipliers.empty()) {
    if (static_cast<int>(config.b_multipliers.size()) != n)
      throw std::invalid_argument("b_multipliers size must match cell count");
    return config.b_multipliers;
  }
  std::vector<double> b(n);
  for (int i = 0; i < n; ++i) b[i] = problem.entropy.Uprime(y.values[i]);
  return b;
}

namespace {

// A row whose whole range over the unit box already fits inside its bounds
// can never bind; dropping it keeps the programs small in flat regions.
bool row_can_bind(const LpRow& row) {
  double lo = 0.0, hi = 0.0;
  for (const auto& [j, v] : row.coeffs) {
    (void)j;
    lo += std::min(0.0, v);
    hi += std::max(0.0, v);
  }
  return lo < row.lower || hi > row.upper;
}

std::string format_alpha(const std::vector<double>& alpha) {
  std::string out = "alpha = [";
  char buf[32];
  for (std::size_t k = 0; k < alpha.size(); ++k) {
    std::snprintf(buf, sizeof buf, k ? " %.12g" : "%.12g", alpha[k]);
    out += buf;
  }
  return out + "]";
}

}  // namespace

LimiterResult solve_step_limiters(const ProblemSpec& problem,
                                  const InterfaceFluxSet& fluxes,
                                  const CellField& y,
                                  const LimiterIterationConfig& config,
                                  double dt) {
  const int n = y.n();
  const int n_if = n + 1;
  const double dx = problem.grid.dx();
  const std::vector<double> c = resolve_c(config, n_if);

  LimiterResult result;
  result.alpha.assign(n_if, 0.0);
  CellField y_hat = config.predictor_init == PredictorInit::monotone
                        ? monotone_update(y, fluxes, dx, dt)
                        : y;

  const std::vector<LpRow> bound_rows = build_bound_rows(fluxes, y, dx, dt);

  for (int p = 0; p < config.max_outer_iterations; ++p) {
    std::vector<LpRow> active_rows;
    for (const LpRow& row : bound_rows)
      if (row_can_bind(row)) active_rows.push_back(row);
    for (const LpRow& row :
         build_entropy_rows(problem, fluxes, y, y_hat, config, dt))
      if (row_can_bind(row)) active_rows.push_back(row);

    // Interfaces mentioned by no surviving row are unconstrained; with
    // nonnegative objective weights their optimum is the upper bound, so
    // only the referenced ones need to enter the program.
    std::vector<int> compact(n_if, -1);
    std::vector<int> expand;
    for (const LpRow& row : active_rows)
      for (const auto& [j, v] : row.coeffs) {
        (void)v;
        if (compact[j] < 0) {
          compact[j] = static_cast<int>(expand.size());
          expand.push_back(j);
        }
      }

    LinearProgram lp = LinearProgram::boxed(static_cast<int>(expand.size()));
    for (std::size_t r = 0; r < expand.size(); ++r)
      lp.objective[r] = c[expand[r]];
    for (LpRow row : active_rows) {
      for (auto& [j, v] : row.coeffs) j = compact[j];
      lp.rows.push_back(std::move(row));
    }

    LpOptions lp_opt;
    lp_opt.max_iterations = config.lp_max_iterations;
    const LpSolution sol = solve(lp, lp_opt);
    if (sol.status == LpStatus::infeasible) {
      throw std::runtime_error(
          "limiter program infeasible at outer iteration " +
          std::to_string(p) + " (time-step restrictions violated?)\n" +
          to_lp_text(lp));
    }
    if (sol.status == LpStatus::iteration_limit) {
      result.alpha.assign(n_if, 0.0);
      result.y_next = monotone_update(y, fluxes, dx, dt);
      result.lp_fallback = true;
      result.converged = false;
      result.outer_iterations = p + 1;
      result.objective_value = 0.0;
      if (config.entropy_variant != EntropyVariant::none) {
        const auto res =
            cell_entropy_residuals(problem, fluxes, y, result.y_next,
                                   result.alpha, config.entropy_variant, dt);
        result.max_entropy_residual =
            *std::max_element(res.begin(), res.end());
      }
      return result;
    }

    std::vector<double> alpha(n_if, 1.0);
    for (std::size_t r = 0; r < expand.size(); ++r) alpha[expand[r]] = sol.x[r];

    const CellField y_hat_new =
        apply_corrected_update(y, fluxes, alpha, dx, dt);

    if (config.collect_lp_dumps) {
      result.lp_dumps.push_back(to_lp_text(lp) + format_alpha(alpha) + "\n");
    }

    double state_change = 0.0;
    for (int i = 0; i < n; ++i) {
      const double denom =
          std::max(config.delta, std::fabs(y_hat_new.values[i]));
      state_change = std::max(
          state_change,
          std::fabs(y_hat_new.values[i] - y_hat.values[i]) / denom);
    }
    double alpha_change = 0.0;
    for (int k = 0; k < n_if; ++k)
      alpha_change =
          std::max(alpha_change, std::fabs(alpha[k] - result.alpha[k]));

    result.alpha = alpha;
    y_hat = y_hat_new;
    result.outer_iterations = p + 1;
    double objective = 0.0;
    for (int k = 0; k < n_if; ++k) objective += c[k] * alpha[k];
    result.objective_value = objective;

    bool settled = state_change < config.eps1 && alpha_change < config.eps2;
    if (config.entropy_variant != EntropyVariant::none) {
      const auto res = cell_entropy_residuals(
          problem, fluxes, y, y_hat, result.alpha, config.entropy_variant, dt);
      result.max_entropy_residual = *std::max_element(res.begin(), res.end());
      settled = settled &&
                result.max_entropy_residual <= config.entropy_residual_tol;
    }
    if (settled) {
      result.converged = true;
      break;
    }
  }

  result.y_next = y_hat;
  return result;
}

}  // namespace entroflux
