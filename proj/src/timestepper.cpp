#include "entroflux/timestepper.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace entroflux {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double kahan_mass(const CellField& y, double dx) {
  double sum = 0.0, carry = 0.0;
  for (double v : y.values) {
    const double term = v * dx - carry;
    const double next = sum + term;
    carry = (next - sum) - term;
    sum = next;
  }
  return sum;
}

double abs_mass(const CellField& y, double dx) {
  double sum = 0.0;
  for (double v : y.values) sum += std::fabs(v) * dx;
  return sum;
}

}  // namespace

double StepCheck::binding_ratio(EntropyVariant variant) const {
  double r = monotone_ratio;
  if (variant == EntropyVariant::proper) r = std::max(r, proper_ratio);
  if (variant == EntropyVariant::tadmor) r = std::max(r, tadmor_ratio);
  return r;
}

StepCheck check_time_step(const ProblemSpec& problem, const CellField& y,
                          LowFluxKind low, double dt) {
  const int n = y.n();
  const double dx = problem.grid.dx();
  const FluxFunction& flux = problem.flux;
  const EntropyPair& ent = problem.entropy;

  std::vector<double> h(n + 1), H(n + 1);
  for (int k = 0; k <= n; ++k) {
    const double ul = y.at(k - 1), ur = y.at(k);
    if (low == LowFluxKind::godunov) {
      h[k] = godunov_flux(flux, ul, ur);
      H[k] = godunov_entropy_flux(flux, ent, ul, ur);
    } else {
      const double coeff = max_abs_fprime_on_interval(flux, ul, ur);
      h[k] = rusanov_flux_with_coefficient(flux, ul, ur, coeff);
      H[k] = rusanov_entropy_flux_with_coefficient(ent, ul, ur, coeff);
    }
  }

  StepCheck chk;
  chk.dt = dt;
  chk.max_dt_monotone = kInf;
  chk.max_dt_proper = kInf;
  chk.max_dt_tadmor = kInf;

  for (int i = 0; i < n; ++i) {
    const double yc = y.at(i);
    const double fc = flux.f(yc);
    const double dyr = y.at(i + 1) - yc;
    const double dyl = yc - y.at(i - 1);

    // Convex-combination condition of the low-order update, written with the
    // actual flux differences (exact for any monotone two-point flux).
    const double cr = dyr != 0.0 ? std::max(0.0, -(h[i + 1] - fc) / dyr) : 0.0;
    const double dl = dyl != 0.0 ? std::max(0.0, (fc - h[i]) / dyl) : 0.0;
    if (cr + dl > 0.0)
      chk.max_dt_monotone = std::min(chk.max_dt_monotone, dx / (cr + dl));

    const double dh = h[i + 1] - h[i];
    if (std::fabs(dh) < 1e-13) continue;
    const double lo3 = std::min({y.at(i - 1), yc, y.at(i + 1)});
    const double hi3 = std::max({y.at(i - 1), yc, y.at(i + 1)});
    const double usmax = max_usecond_on_interval(ent, lo3, hi3);
    if (usmax <= 0.0) continue;

    const double uprime = ent.Uprime(yc);
    const double margin = uprime * dh - (H[i + 1] - H[i]);
    const double tol = 1e-13 * (1.0 + std::fabs(uprime * dh) +
                                std::fabs(H[i + 1] - H[i]));
    if (margin > tol)
      chk.max_dt_proper =
          std::min(chk.max_dt_proper, 2.0 * dx * margin / (usmax * dh * dh));
    else if (margin < -tol)
      chk.max_dt_proper = 0.0;  // dissipation deficit: no admissible step

    auto vpsi = [&](int j, double& v, double& psi) {
      const double u = y.at(j);
      v = ent.Uprime(u);
      psi = v * flux.f(u) - ent.F(u);
    };
    double vl, psil, vc, psic, vr, psir;
    vpsi(i - 1, vl, psil);
    vpsi(i, vc, psic);
    vpsi(i + 1, vr, psir);
    const double tm = -0.5 * ((h[i + 1] * (vr - vc) - (psir - psic)) +
                              (h[i] * (vc - vl) - (psic - psil)));
    const double ttol =
        1e-13 * (1.0 + std::fabs(h[i + 1] * (vr - vc)) +
                 std::fabs(h[i] * (vc - vl)) + std::fabs(psir - psil));
    if (tm > ttol)
      chk.max_dt_tadmor =
          std::min(chk.max_dt_tadmor, 2.0 * dx * tm / (usmax * dh * dh));
    else if (tm < -ttol)
      chk.max_dt_tadmor = 0.0;
  }

  auto ratio = [dt](double cap) {
    if (dt <= 0.0) return 0.0;
    if (cap == kInf) return 0.0;
    if (cap <= 0.0) return kInf;
    return dt / cap;
  };
  chk.monotone_ratio = ratio(chk.max_dt_monotone);
  chk.proper_ratio = ratio(chk.max_dt_proper);
  chk.tadmor_ratio = ratio(chk.max_dt_tadmor);
  return chk;
}

namespace {

struct InternalStep {
  CellField y_next;
  StepDiagnostics diag;
  std::vector<double> proper_residuals;
  std::vector<double> tadmor_residuals;
  double boundary_flux_left = 0.0;   // corrected flux at the left boundary
  double boundary_flux_right = 0.0;
};

void require_finite(const CellField& y, const char* when) {
  for (int i = 0; i < y.n(); ++i) {
    if (!std::isfinite(y.values[static_cast<size_t>(i)])) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "non-finite state in cell %d (%s)", i,
                    when);
      throw std::runtime_error(buf);
    }
  }
}

// Predictor iteration with the closed-form limiter in place of the program
// solve; same stop rule, with a drop to the uncorrected step if it fails to
// settle (keeps the entropy guarantee unconditional).
struct ApproxLoopResult {
  std::vector<double> alpha;
  CellField y_next;
  int iterations = 0;
  bool converged = false;
  bool fallback = false;
};

ApproxLoopResult approximate_loop(const ProblemSpec& pb,
                                  const InterfaceFluxSet& fx,
                                  const CellField& y,
                                  const LimiterIterationConfig& cfg,
                                  double dt) {
  const int n = y.n();
  const double dx = pb.grid.dx();
  ApproxLoopResult out;
  out.alpha.assign(n + 1, 0.0);
  CellField y_hat = cfg.predictor_init == PredictorInit::monotone
                        ? monotone_update(y, fx, dx, dt)
                        : y;

  // A cell whose linearized inequality turns infeasible stays shut off for
  // the rest of the step. Without this the flag can flap between iterations
  // (shutting the correction off heals the cell, which re-enables the
  // correction) and the iteration two-cycles forever; keeping the flag makes
  // the shut-off set grow monotonically, so it settles. Forcing entries of
  // a feasible limiter vector to zero preserves feasibility of every row.
  std::vector<char> frozen(n, 0);

  for (int p = 0; p < cfg.max_outer_iterations; ++p) {
    ApproxWorkspace ws;
    std::vector<double> alpha =
        approximate_limiters(pb, fx, y, y_hat, cfg, dt, &ws);
    for (int i : ws.infeasible_cells) frozen[i] = 1;
    for (int i = 0; i < n; ++i) {
      if (!frozen[i]) continue;
      alpha[i] = 0.0;
      alpha[i + 1] = 0.0;
    }
    const CellField y_new = apply_corrected_update(y, fx, alpha, dx, dt);

    double state_change = 0.0;
    for (int i = 0; i < n; ++i) {
      const double denom = std::max(cfg.delta, std::fabs(y_new.values[i]));
      state_change = std::max(
          state_change, std::fabs(y_new.values[i] - y_hat.values[i]) / denom);
    }
    double alpha_change = 0.0;
    for (int k = 0; k <= n; ++k)
      alpha_change = std::max(alpha_change, std::fabs(alpha[k] - out.alpha[k]));

    out.alpha = alpha;
    y_hat = y_new;
    out.iterations = p + 1;

    bool settled = state_change < cfg.eps1 && alpha_change < cfg.eps2;
    double residual = 0.0;
    if (cfg.entropy_variant != EntropyVariant::none) {
      const auto res = cell_entropy_residuals(pb, fx, y, y_hat, out.alpha,
                                              cfg.entropy_variant, dt);
      residual = *std::max_element(res.begin(), res.end());
      settled = settled && residual <= cfg.entropy_residual_tol;
    }
    if (settled) {
      out.converged = true;
      break;
    }
    // An unsettled final iterate is still a consistent pair; keep it when it
    // meets the residual tolerance, otherwise drop the correction.
    if (p + 1 == cfg.max_outer_iterations &&
        residual > cfg.entropy_residual_tol)
      out.fallback = true;
  }
  if (out.fallback) {
    out.alpha.assign(n + 1, 0.0);
    y_hat = monotone_update(y, fx, dx, dt);
  }
  out.y_next = y_hat;
  return out;
}

InternalStep advance_step_internal(const ProblemSpec& pb, const CellField& y,
                                   const SchemeConfig& config, double dt) {
  const int n = y.n();
  const double dx = pb.grid.dx();
  require_finite(y, "before the step");

  InterfaceFluxSet fx =
      assemble_interface_fluxes(pb, y, config.low_flux, config.high_flux);
  // No correction crosses the domain boundary.
  for (int k : {0, n}) {
    fx.h_ad[k] = 0.0;
    fx.H_ad[k] = 0.0;
    fx.h_high[k] = fx.h_low[k];
    fx.H_high[k] = fx.H_low[k];
  }

  InternalStep out;
  StepDiagnostics& diag = out.diag;
  diag.dt = dt;

  std::vector<double> alpha(n + 1, 0.0);
  const EntropyVariant variant = config.iteration.entropy_variant;
  bool keep_alpha_record = false;

  switch (config.limiter) {
    case LimiterStrategy::none:
      out.y_next = monotone_update(y, fx, dx, dt);
      break;
    case LimiterStrategy::unlimited:
      alpha.assign(n + 1, 1.0);
      alpha[0] = alpha[n] = 0.0;
      out.y_next = apply_corrected_update(y, fx, alpha, dx, dt);
      break;
    case LimiterStrategy::exact_lp: {
      LimiterResult res = solve_step_limiters(pb, fx, y, config.iteration, dt);
      if (!res.converged && !res.lp_fallback &&
          variant != EntropyVariant::none &&
          res.max_entropy_residual > config.iteration.entropy_residual_tol) {
        // The final iterate blew the residual tolerance: drop to the provably
        // stable step and say so.  An unsettled pair that still meets the
        // tolerance is kept — the bounds hold exactly for any returned alpha.
        res.alpha.assign(n + 1, 0.0);
        res.y_next = monotone_update(y, fx, dx, dt);
        res.lp_fallback = true;
      }
      alpha = res.alpha;
      out.y_next = res.y_next;
      diag.outer_iterations = res.outer_iterations;
      diag.limiter_converged = res.converged;
      diag.limiter_fallback = res.lp_fallback;
      keep_alpha_record = true;
      break;
    }
    case LimiterStrategy::approximate: {
      const ApproxLoopResult res =
          approximate_loop(pb, fx, y, config.iteration, dt);
      alpha = res.alpha;
      out.y_next = res.y_next;
      diag.outer_iterations = res.iterations;
      diag.limiter_converged = res.converged;
      diag.limiter_fallback = res.fallback;
      keep_alpha_record = true;
      break;
    }
  }
  alpha[0] = 0.0;
  alpha[n] = 0.0;
  require_finite(out.y_next, "after the step");

  out.proper_residuals = cell_entropy_residuals(pb, fx, y, out.y_next, alpha,
                                                EntropyVariant::proper, dt);
  out.tadmor_residuals = cell_entropy_residuals(pb, fx, y, out.y_next, alpha,
                                                EntropyVariant::tadmor, dt);
  diag.max_proper_residual =
      *std::max_element(out.proper_residuals.begin(),
                        out.proper_residuals.end());
  diag.max_tadmor_residual =
      *std::max_element(out.tadmor_residuals.begin(),
                        out.tadmor_residuals.end());

  double slack = kInf;
  for (int i = 0; i < n; ++i) {
    const double lo = std::min({y.at(i - 1), y.at(i), y.at(i + 1)});
    const double hi = std::max({y.at(i - 1), y.at(i), y.at(i + 1)});
    slack = std::min({slack, out.y_next.values[i] - lo,
                      hi - out.y_next.values[i]});
  }
  diag.min_bound_slack = n > 0 ? slack : 0.0;

  out.boundary_flux_left = fx.h_low[0];
  out.boundary_flux_right = fx.h_low[n];
  const double mass_before = kahan_mass(y, dx);
  const double mass_after = kahan_mass(out.y_next, dx);
  const double expected =
      mass_before - dt * (out.boundary_flux_right - out.boundary_flux_left);
  const double scale = std::max(1.0, abs_mass(out.y_next, dx));
  diag.conservation_error = std::fabs(mass_after - expected) / scale;

  if (keep_alpha_record) {
    diag.alpha = alpha;
    if (n >= 2) {
      double amin = kInf, asum = 0.0;
      for (int k = 1; k < n; ++k) {
        amin = std::min(amin, alpha[k]);
        asum += alpha[k];
      }
      diag.alpha_min = amin;
      diag.alpha_mean = asum / (n - 1);
    }
  }
  return out;
}

}  // namespace

StepResult advance_step(const ProblemSpec& problem, const CellField& y,
                        const SchemeConfig& config, double dt) {
  InternalStep s = advance_step_internal(problem, y, config, dt);
  return StepResult{std::move(s.y_next), std::move(s.diag)};
}

SolutionTrace run_simulation(const ProblemSpec& problem,
                             const SchemeConfig& config,
                             const TimePolicy& policy,
                             std::vector<double> snapshot_times) {
  const double T = problem.end_time;
  const double eps_t = 1e-12 * std::max(1.0, std::fabs(T));
  const double dx = problem.grid.dx();
  const EntropyVariant variant = config.iteration.entropy_variant;

  SolutionTrace trace;
  trace.min_bound_slack = kInf;
  if (problem.grid.n_cells <= 0 || !(T > 0.0)) {
    trace.abort_reason = "empty grid or non-positive end time";
    return trace;
  }

  snapshot_times.push_back(T);
  std::sort(snapshot_times.begin(), snapshot_times.end());
  std::vector<double> targets;
  for (double s : snapshot_times) {
    if (s <= eps_t || s > T + eps_t) continue;
    if (!targets.empty() && s - targets.back() <= eps_t) continue;
    targets.push_back(std::min(s, T));
  }

  CellField y = problem.initial_field();
  try {
    require_finite(y, "initial data");
  } catch (const std::runtime_error& err) {
    trace.abort_reason = err.what();
    return trace;
  }

  trace.initial_mass = kahan_mass(y, dx);
  trace.snapshots.push_back(Snapshot{0.0, y, {}, {}, {}});

  const double fixed_dt = policy.dt > 0.0 ? policy.dt : problem.fixed_dt;
  const double courant =
      policy.courant > 0.0 ? policy.courant : problem.default_courant;
  if (!policy.adaptive && fixed_dt <= 0.0) {
    trace.abort_reason = "fixed-step mode with no step size configured";
    return trace;
  }

  double t = 0.0;
  std::size_t next_target = 0;
  const long max_steps = 50'000'000;
  for (long step_count = 0; t < T - eps_t; ++step_count) {
    if (step_count >= max_steps) {
      trace.abort_reason = "step budget exhausted";
      return trace;
    }
    while (next_target < targets.size() && targets[next_target] <= t + eps_t)
      ++next_target;
    const double target = next_target < targets.size() ? targets[next_target]
                                                       : T;

    const double remaining = target - t;
    double planned = 0.0;
    if (policy.adaptive) {
      const StepCheck caps = check_time_step(problem, y, config.low_flux, 0.0);
      double admissible = caps.max_dt_monotone;
      if (variant == EntropyVariant::proper)
        admissible = std::min(admissible, caps.max_dt_proper);
      if (variant == EntropyVariant::tadmor)
        admissible = std::min(admissible, caps.max_dt_tadmor);
      if (admissible <= 0.0) {
        trace.abort_reason = "admissible time step collapsed to zero";
        return trace;
      }
      planned = admissible == kInf ? remaining : courant * admissible;
    } else {
      planned = fixed_dt;
    }
    // A step that lands within roundoff of the target keeps its full size and
    // declares arrival (clipping it would perturb the dynamics for nothing);
    // a target genuinely inside the step clips it.
    const bool arrive = planned >= remaining - eps_t;
    double dt = planned;
    if (arrive && remaining < planned - eps_t) dt = remaining;
    if (!(dt > 0.0) || dt < 1e-14 * std::max(1.0, T)) {
      trace.abort_reason = "time step underflow";
      return trace;
    }

    const StepCheck chk = check_time_step(problem, y, config.low_flux, dt);
    if (!chk.ok(variant)) {
      char buf[160];
      std::snprintf(buf, sizeof buf,
                    "time-step restriction violated at t=%.12g "
                    "(dt=%.12g, binding ratio %.6g)",
                    t, dt, chk.binding_ratio(variant));
      trace.abort_reason = buf;
      return trace;
    }

    InternalStep s;
    try {
      s = advance_step_internal(problem, y, config, dt);
    } catch (const std::runtime_error& err) {
      trace.abort_reason = err.what();
      return trace;
    }

    t = arrive ? target : t + dt;
    s.diag.time = t;
    trace.max_proper_residual =
        std::max(trace.max_proper_residual, s.diag.max_proper_residual);
    trace.max_tadmor_residual =
        std::max(trace.max_tadmor_residual, s.diag.max_tadmor_residual);
    trace.max_conservation_error =
        std::max(trace.max_conservation_error, s.diag.conservation_error);
    trace.min_bound_slack =
        std::min(trace.min_bound_slack, s.diag.min_bound_slack);
    trace.boundary_flux_integral +=
        dt * (s.boundary_flux_right - s.boundary_flux_left);

    y = s.y_next;
    if (next_target < targets.size() && t >= targets[next_target] - eps_t) {
      trace.snapshots.push_back(Snapshot{t, y, s.proper_residuals,
                                         s.tadmor_residuals, s.diag.alpha});
      ++next_target;
    }
    trace.steps.push_back(std::move(s.diag));
  }

  trace.final_mass = kahan_mass(y, dx);
  if (trace.min_bound_slack == kInf) trace.min_bound_slack = 0.0;
  trace.completed = true;
  return trace;
}

}  // namespace entroflux
