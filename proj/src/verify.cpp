#include "entroflux/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <thread>

#include "entroflux/timestepper.hpp"

namespace entroflux::verify {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64& rng, double a, double b) {
  return a + (b - a) * uniform(rng);
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(rng() % span);
}

LpOracleResult lp_vertex_oracle(const LinearProgram& lp) {
  const int n = lp.n_vars;
  // Dense plane list: a . x = b for every finite bound and row side.
  std::vector<std::vector<double>> normals;
  std::vector<double> rhs;
  for (int j = 0; j < n; ++j) {
    std::vector<double> e(n, 0.0);
    e[j] = 1.0;
    normals.push_back(e);
    rhs.push_back(lp.var_lower[j]);
    if (lp.var_upper[j] != lp.var_lower[j]) {
      normals.push_back(e);
      rhs.push_back(lp.var_upper[j]);
    }
  }
  for (const auto& row : lp.rows) {
    std::vector<double> a(n, 0.0);
    for (const auto& [j, v] : row.coeffs) a[j] += v;
    if (row.lower > -kInf) {
      normals.push_back(a);
      rhs.push_back(row.lower);
    }
    if (row.upper < kInf && row.upper != row.lower) {
      normals.push_back(a);
      rhs.push_back(row.upper);
    }
  }
  const int planes = static_cast<int>(normals.size());

  LpOracleResult best;
  const double ftol = 1e-9;
  std::vector<double> a((n > 0 ? n : 1) * (n > 0 ? n : 1));
  std::vector<double> b(n > 0 ? n : 1);
  std::vector<int> pick(n);
  std::vector<double> x(n);

  auto try_point = [&]() {
    for (int j = 0; j < n; ++j)
      if (x[j] < lp.var_lower[j] - ftol || x[j] > lp.var_upper[j] + ftol)
        return;
    for (const auto& row : lp.rows) {
      double s = 0.0;
      for (const auto& [j, v] : row.coeffs) s += v * x[j];
      if (s < row.lower - ftol || s > row.upper + ftol) return;
    }
    double obj = 0.0;
    for (int j = 0; j < n; ++j) obj += lp.objective[j] * x[j];
    if (!best.feasible || obj > best.objective) best.objective = obj;
    best.feasible = true;
  };

  if (n == 0) {
    best.feasible = true;
    for (const auto& row : lp.rows)
      if (0.0 < row.lower - ftol || 0.0 > row.upper + ftol)
        best.feasible = false;
    return best;
  }

  for (int i = 0; i < n; ++i) pick[i] = i;
  while (true) {
    // Solve the n x n system formed by the picked planes.
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) a[r * n + c] = normals[pick[r]][c];
      b[r] = rhs[pick[r]];
    }
    bool singular = false;
    for (int c = 0; c < n && !singular; ++c) {
      int piv = c;
      for (int r = c + 1; r < n; ++r)
        if (std::fabs(a[r * n + c]) > std::fabs(a[piv * n + c])) piv = r;
      if (std::fabs(a[piv * n + c]) < 1e-11) {
        singular = true;
        break;
      }
      if (piv != c) {
        for (int k = 0; k < n; ++k) std::swap(a[c * n + k], a[piv * n + k]);
        std::swap(b[c], b[piv]);
      }
      for (int r = c + 1; r < n; ++r) {
        const double f = a[r * n + c] / a[c * n + c];
        if (f == 0.0) continue;
        for (int k = c; k < n; ++k) a[r * n + k] -= f * a[c * n + k];
        b[r] -= f * b[c];
      }
    }
    if (!singular) {
      for (int r = n - 1; r >= 0; --r) {
        double s = b[r];
        for (int k = r + 1; k < n; ++k) s -= a[r * n + k] * x[k];
        x[r] = s / a[r * n + r];
      }
      try_point();
    }
    // Next combination of pick.
    int i = n - 1;
    while (i >= 0 && pick[i] == planes - n + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int k = i + 1; k < n; ++k) pick[k] = pick[k - 1] + 1;
  }
  return best;
}

LinearProgram random_boxed_lp(std::mt19937_64& rng) {
  const int n = uniform_int(rng, 1, 6);
  const int m = uniform_int(rng, 0, 8);
  LinearProgram lp = LinearProgram::boxed(n);
  for (int j = 0; j < n; ++j) lp.objective[j] = uniform(rng, -1.0, 1.0);
  for (int i = 0; i < m; ++i) {
    std::vector<std::pair<int, double>> coeffs;
    for (int j = 0; j < n; ++j)
      if (uniform(rng) < 0.6) coeffs.emplace_back(j, uniform(rng, -2.0, 2.0));
    if (coeffs.empty())
      coeffs.emplace_back(uniform_int(rng, 0, n - 1), uniform(rng, -2.0, 2.0));

    const int sides = uniform_int(rng, 0, 3);  // 0,1: two-sided; 2: >=; 3: <=
    double lower = -kInf;
    double upper = kInf;
    if (uniform(rng) < 0.7) {
      // Anchor the row at an interior point so the program stays feasible.
      double centre = 0.0;
      for (const auto& [j, v] : coeffs) {
        (void)j;
        centre += v * uniform(rng, 0.05, 0.95);
      }
      if (sides <= 1 || sides == 2) lower = centre - uniform(rng, 0.05, 1.0);
      if (sides <= 1 || sides == 3) upper = centre + uniform(rng, 0.05, 1.0);
    } else {
      // Blind draw over (and slightly past) the row's range on the box.
      double lo_val = 0.0, hi_val = 0.0;
      for (const auto& [j, v] : coeffs) {
        (void)j;
        lo_val += std::min(0.0, v);
        hi_val += std::max(0.0, v);
      }
      const double v1 = uniform(rng, lo_val - 0.3, hi_val + 0.3);
      if (sides <= 1) {
        lower = v1;
        upper = v1 + uniform(rng, 0.05, 1.0);
      } else if (sides == 2) {
        lower = v1;
      } else {
        upper = v1;
      }
    }
    lp.add_row(std::move(coeffs), lower, upper);
  }
  return lp;
}

std::vector<CheckRecord> run_lp_suite(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  int solved = 0, infeasible = 0;
  int objective_mismatch = 0, status_mismatch = 0, feas_violation = 0;
  double worst_gap = 0.0, worst_violation = 0.0;

  for (int trial = 0; trial < count; ++trial) {
    const LinearProgram lp = random_boxed_lp(rng);
    const LpSolution sol = solve(lp);
    const LpOracleResult ref = lp_vertex_oracle(lp);

    if (ref.feasible != (sol.status == LpStatus::optimal)) {
      ++status_mismatch;
      continue;
    }
    if (!ref.feasible) {
      ++infeasible;
      continue;
    }
    ++solved;
    const double gap = std::fabs(sol.objective - ref.objective);
    worst_gap = std::max(worst_gap, gap);
    if (gap > 1e-8) ++objective_mismatch;

    double viol = 0.0;
    for (int j = 0; j < lp.n_vars; ++j) {
      viol = std::max(viol, lp.var_lower[j] - sol.x[j]);
      viol = std::max(viol, sol.x[j] - lp.var_upper[j]);
    }
    for (const auto& row : lp.rows) {
      double s = 0.0;
      for (const auto& [j, v] : row.coeffs) s += v * sol.x[j];
      if (row.lower > -kInf) viol = std::max(viol, row.lower - s);
      if (row.upper < kInf) viol = std::max(viol, s - row.upper);
    }
    worst_violation = std::max(worst_violation, viol);
    if (viol > 1e-9) ++feas_violation;
  }

  char buf[160];
  std::vector<CheckRecord> out;
  std::snprintf(buf, sizeof buf,
                "%d programs (%d solved, %d infeasible), worst objective gap "
                "%.3e, worst violation %.3e",
                count, solved, infeasible, worst_gap, worst_violation);
  out.push_back({"lp/oracle-objective-match", objective_mismatch == 0, buf});
  out.push_back({"lp/status-agreement", status_mismatch == 0,
                 status_mismatch == 0 ? "solver and oracle agree"
                                      : "status disagreement detected"});
  std::snprintf(buf, sizeof buf, "worst violation %.3e (limit 1e-9)",
                worst_violation);
  out.push_back({"lp/feasibility", feas_violation == 0, buf});
  return out;
}

int thread_budget() {
  if (const char* env = std::getenv("ENTROFLUX_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
    return 1;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return static_cast<int>(std::clamp(hw, 1u, 8u));
}

namespace {

// Deterministic per-trial stream, independent of how trials land on threads.
std::mt19937_64 trial_rng(std::uint64_t seed, int trial) {
  return std::mt19937_64(seed * 0x9E3779B97F4A7C15ull +
                         static_cast<std::uint64_t>(trial) * 0x100000001B3ull +
                         0x2545F4914F6CDD1Dull);
}

template <typename Stats, typename Fn>
Stats parallel_accumulate(int count, Fn per_trial) {
  const int nt = std::clamp(thread_budget(), 1, std::max(1, count));
  std::vector<Stats> parts(nt);
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (int w = 0; w < nt; ++w)
    pool.emplace_back([&per_trial, &parts, w, nt, count] {
      for (int i = w; i < count; i += nt) per_trial(i, parts[w]);
    });
  for (auto& th : pool) th.join();
  Stats total;
  for (const Stats& p : parts) total.merge(p);
  return total;
}

struct RandomStepDraw {
  CellField y;
  double dt = 0.0;
  bool cap_collapsed = false;
};

CellField draw_field(std::mt19937_64& rng, int n, double lo, double hi) {
  CellField f;
  f.values.resize(n);
  for (int i = 0; i < n; ++i) f.values[i] = uniform(rng, lo, hi);
  f.left_state = uniform(rng, lo, hi);
  f.right_state = uniform(rng, lo, hi);
  return f;
}

// Admissible state: random values plus a step inside every restriction the
// checker reports, with a 0.9 margin.
RandomStepDraw draw_admissible(std::mt19937_64& rng, const ProblemSpec& pb,
                               int n, double lo, double hi) {
  RandomStepDraw d;
  d.y = draw_field(rng, n, lo, hi);
  const StepCheck caps = check_time_step(pb, d.y, LowFluxKind::rusanov, 0.0);
  double cap = pb.grid.dx();
  for (double c : {caps.max_dt_monotone, caps.max_dt_proper,
                   caps.max_dt_tadmor}) {
    if (c <= 0.0) d.cap_collapsed = true;
    if (std::isfinite(c)) cap = std::min(cap, c);
  }
  d.dt = 0.9 * cap;
  return d;
}

double row_violation(const std::vector<LpRow>& rows,
                     const std::vector<double>& alpha) {
  double worst = 0.0;
  for (const LpRow& row : rows) {
    double s = 0.0;
    for (const auto& [j, v] : row.coeffs) s += v * alpha[j];
    if (row.lower > -kInf) worst = std::max(worst, row.lower - s);
    if (row.upper < kInf) worst = std::max(worst, s - row.upper);
  }
  return worst;
}

}  // namespace

std::vector<CheckRecord> run_flux_suite(std::uint64_t seed, int count) {
  struct Stats {
    int consistency = 0, interval = 0, eflux = 0, dissipation = 0,
        assembly = 0;
    double worst = 0.0;
    void merge(const Stats& o) {
      consistency += o.consistency;
      interval += o.interval;
      eflux += o.eflux;
      dissipation += o.dissipation;
      assembly += o.assembly;
      worst = std::max(worst, o.worst);
    }
  };

  const std::vector<ProblemSpec> problems = {
      builtin_problem("nonconvex_quartic"), builtin_problem("buckley_leverett"),
      builtin_problem("linear_advection")};
  const double ranges[3][2] = {{-2.5, 2.5}, {-3.5, 3.5}, {-1.0, 2.0}};

  const Stats total = parallel_accumulate<Stats>(
      count, [&](int trial, Stats& st) {
        std::mt19937_64 rng = trial_rng(seed, trial);
        const int p = trial % 3;
        const ProblemSpec& pb = problems[p];
        const double lo = ranges[p][0], hi = ranges[p][1];
        const FluxFunction& flux = pb.flux;
        const double yl = uniform(rng, lo, hi), yr = uniform(rng, lo, hi);
        const double u = uniform(rng);  // same-state probe
        const double us = lo + (hi - lo) * u;

        const double scale =
            1.0 + std::fabs(flux.f(yl)) + std::fabs(flux.f(yr));
        auto note = [&st, scale](double err, int& bucket) {
          st.worst = std::max(st.worst, err / scale);
          if (err > 1e-12 * scale) ++bucket;
        };

        note(std::fabs(rusanov_flux(flux, us, us) - flux.f(us)),
             st.consistency);
        note(std::fabs(godunov_flux(flux, us, us) - flux.f(us)),
             st.consistency);
        note(std::fabs(rusanov_entropy_flux(flux, pb.entropy, us, us) -
                       pb.entropy.F(us)),
             st.consistency);
        note(std::fabs(godunov_entropy_flux(flux, pb.entropy, us, us) -
                       pb.entropy.F(us)),
             st.consistency);

        const double hg = godunov_flux(flux, yl, yr);
        const double hr = rusanov_flux(flux, yl, yr);
        const double fmin =
            extremum_f_on_interval(flux, yl, yr, ExtremumMode::minimum);
        const double fmax =
            extremum_f_on_interval(flux, yl, yr, ExtremumMode::maximum);
        note(std::max(fmin - hg, hg - fmax), st.interval);

        // E-flux inequality at a point between the states, for both fluxes.
        const double mid = yl + (yr - yl) * uniform(rng);
        const double sgn = yr >= yl ? 1.0 : -1.0;
        note(sgn * (hg - flux.f(mid)), st.eflux);
        note(sgn * (hr - flux.f(mid)), st.eflux);

        // Rusanov never carries less viscosity than the interval extremum.
        note(sgn * (hr - hg), st.dissipation);

        // The assembler agrees with the scalar functions interface by
        // interface.
        const CellField y = draw_field(rng, 6, lo, hi);
        const InterfaceFluxSet fx = assemble_interface_fluxes(
            pb, y, LowFluxKind::rusanov,
            trial % 2 ? HighFluxKind::central4 : HighFluxKind::central2);
        double asm_err = 0.0;
        for (int k = 0; k <= 6; ++k) {
          asm_err = std::max(
              asm_err, std::fabs(fx.h_low[k] -
                                 rusanov_flux(flux, y.at(k - 1), y.at(k))));
          asm_err = std::max(
              asm_err, std::fabs(fx.h_ad[k] - (fx.h_high[k] - fx.h_low[k])));
        }
        note(asm_err, st.assembly);
      });

  char buf[160];
  std::vector<CheckRecord> out;
  std::snprintf(buf, sizeof buf, "%d trials, worst relative error %.3e", count,
                total.worst);
  out.push_back({"fluxes/consistency", total.consistency == 0, buf});
  out.push_back({"fluxes/interval-bounds", total.interval == 0,
                 "interface values stay within the interval range"});
  out.push_back({"fluxes/e-flux-inequality", total.eflux == 0,
                 "both low-order fluxes satisfy the E-flux test"});
  out.push_back({"fluxes/relative-dissipation", total.dissipation == 0,
                 "interval-extremum flux never exceeds the two-speed bound"});
  out.push_back({"fluxes/assembler-agreement", total.assembly == 0,
                 "assembled interfaces match the scalar flux calls"});
  return out;
}

std::vector<CheckRecord> run_limiter_suite(std::uint64_t seed, int count) {
  struct Stats {
    int collapsed = 0, zero_infeasible = 0, approx_infeasible = 0,
        lp_failed = 0, dominated = 0;
    double worst_violation = 0.0, worst_gap = 0.0;
    void merge(const Stats& o) {
      collapsed += o.collapsed;
      zero_infeasible += o.zero_infeasible;
      approx_infeasible += o.approx_infeasible;
      lp_failed += o.lp_failed;
      dominated += o.dominated;
      worst_violation = std::max(worst_violation, o.worst_violation);
      worst_gap = std::max(worst_gap, o.worst_gap);
    }
  };

  const std::vector<ProblemSpec> problems = {
      builtin_problem("nonconvex_quartic"),
      builtin_problem("buckley_leverett")};
  const double ranges[2][2] = {{-2.5, 2.5}, {-3.0, 3.0}};

  const Stats total = parallel_accumulate<Stats>(
      count, [&](int trial, Stats& st) {
        std::mt19937_64 rng = trial_rng(seed, trial);
        const int p = trial % 2;
        const ProblemSpec& pb = problems[p];
        const int n = 10;
        const RandomStepDraw d =
            draw_admissible(rng, pb, n, ranges[p][0], ranges[p][1]);
        if (d.cap_collapsed) {
          ++st.collapsed;
          return;
        }
        const double dx = pb.grid.dx();

        LimiterIterationConfig cfg;
        cfg.entropy_variant =
            trial % 4 == 3 ? EntropyVariant::tadmor : EntropyVariant::proper;
        const InterfaceFluxSet fx = assemble_interface_fluxes(
            pb, d.y, LowFluxKind::rusanov,
            trial % 3 ? HighFluxKind::central2 : HighFluxKind::central4);
        const CellField y_hat = monotone_update(d.y, fx, dx, d.dt);

        std::vector<LpRow> rows = build_bound_rows(fx, d.y, dx, d.dt);
        const std::vector<LpRow> entropy_rows =
            build_entropy_rows(pb, fx, d.y, y_hat, cfg, d.dt);
        rows.insert(rows.end(), entropy_rows.begin(), entropy_rows.end());

        const std::vector<double> zeros(n + 1, 0.0);
        const double v0 = row_violation(rows, zeros);
        st.worst_violation = std::max(st.worst_violation, v0);
        if (v0 > 1e-9) ++st.zero_infeasible;

        const std::vector<double> approx =
            approximate_limiters(pb, fx, d.y, y_hat, cfg, d.dt);
        const double va = row_violation(rows, approx);
        st.worst_violation = std::max(st.worst_violation, va);
        if (va > 1e-9) ++st.approx_infeasible;

        LinearProgram lp = LinearProgram::boxed(n + 1);
        for (int k = 0; k <= n; ++k) lp.objective[k] = 1.0;
        for (const LpRow& row : rows)
          if (!row.coeffs.empty()) lp.rows.push_back(row);
        const LpSolution sol = solve(lp);
        if (sol.status != LpStatus::optimal) {
          ++st.lp_failed;
          return;
        }
        double approx_sum = 0.0;
        for (double a : approx) approx_sum += a;
        st.worst_gap = std::max(st.worst_gap, approx_sum - sol.objective);
        if (approx_sum > sol.objective + 1e-7) ++st.dominated;
      });

  char buf[160];
  std::vector<CheckRecord> out;
  std::snprintf(buf, sizeof buf,
                "%d states (%d skipped), worst row violation %.3e", count,
                total.collapsed, total.worst_violation);
  out.push_back({"limiters/zero-feasible", total.zero_infeasible == 0, buf});
  out.push_back({"limiters/closed-form-feasible", total.approx_infeasible == 0,
                 "closed-form factors satisfy the rows they approximate"});
  out.push_back({"limiters/program-solves", total.lp_failed == 0,
                 "every feasible program reached optimality"});
  std::snprintf(buf, sizeof buf, "worst objective shortfall %.3e",
                total.worst_gap);
  out.push_back({"limiters/program-dominates", total.dominated == 0, buf});
  return out;
}

std::vector<CheckRecord> run_conservation_suite(std::uint64_t seed,
                                                int count) {
  struct Stats {
    int collapsed = 0, ledger = 0, bounds = 0;
    double worst_ledger = 0.0, worst_slack = 0.0;
    void merge(const Stats& o) {
      collapsed += o.collapsed;
      ledger += o.ledger;
      bounds += o.bounds;
      worst_ledger = std::max(worst_ledger, o.worst_ledger);
      worst_slack = std::max(worst_slack, o.worst_slack);
    }
  };

  const std::vector<ProblemSpec> problems = {
      builtin_problem("nonconvex_quartic"),
      builtin_problem("buckley_leverett")};
  const double ranges[2][2] = {{-2.5, 2.5}, {-3.0, 3.0}};

  const Stats total = parallel_accumulate<Stats>(
      count, [&](int trial, Stats& st) {
        std::mt19937_64 rng = trial_rng(seed, trial);
        const int p = trial % 2;
        const ProblemSpec& pb = problems[p];
        const RandomStepDraw d =
            draw_admissible(rng, pb, 10, ranges[p][0], ranges[p][1]);
        if (d.cap_collapsed) {
          ++st.collapsed;
          return;
        }

        SchemeConfig cfg;
        const int strat = trial % 4;
        cfg.limiter = strat == 0   ? LimiterStrategy::none
                      : strat == 1 ? LimiterStrategy::unlimited
                      : strat == 2 ? LimiterStrategy::exact_lp
                                   : LimiterStrategy::approximate;
        if (cfg.limiter != LimiterStrategy::none)
          cfg.high_flux = HighFluxKind::central2;
        if (cfg.limiter == LimiterStrategy::none ||
            cfg.limiter == LimiterStrategy::unlimited)
          cfg.iteration.entropy_variant = EntropyVariant::none;

        const StepResult r = advance_step(pb, d.y, cfg, d.dt);
        st.worst_ledger = std::max(st.worst_ledger, r.diag.conservation_error);
        if (r.diag.conservation_error > 1e-12) ++st.ledger;
        if (cfg.limiter == LimiterStrategy::none) {
          st.worst_slack =
              std::max(st.worst_slack, -r.diag.min_bound_slack);
          if (r.diag.min_bound_slack < -1e-12) ++st.bounds;
        }
      });

  char buf[160];
  std::vector<CheckRecord> out;
  std::snprintf(buf, sizeof buf,
                "%d steps (%d skipped), worst ledger error %.3e", count,
                total.collapsed, total.worst_ledger);
  out.push_back({"conservation/per-step-ledger", total.ledger == 0, buf});
  std::snprintf(buf, sizeof buf, "worst bound overshoot %.3e",
                total.worst_slack);
  out.push_back({"conservation/monotone-bounds", total.bounds == 0, buf});
  return out;
}

std::vector<CheckRecord> run_entropy_suite(std::uint64_t seed, int count) {
  struct Stats {
    int collapsed = 0, monotone = 0, corrected = 0, unsettled = 0;
    double worst_monotone = 0.0, worst_corrected = 0.0;
    void merge(const Stats& o) {
      collapsed += o.collapsed;
      monotone += o.monotone;
      corrected += o.corrected;
      unsettled += o.unsettled;
      worst_monotone = std::max(worst_monotone, o.worst_monotone);
      worst_corrected = std::max(worst_corrected, o.worst_corrected);
    }
  };

  const std::vector<ProblemSpec> problems = {
      builtin_problem("nonconvex_quartic"),
      builtin_problem("buckley_leverett")};
  const double ranges[2][2] = {{-2.5, 2.5}, {-3.0, 3.0}};

  const Stats total = parallel_accumulate<Stats>(
      count, [&](int trial, Stats& st) {
        std::mt19937_64 rng = trial_rng(seed, trial);
        const int p = trial % 2;
        const ProblemSpec& pb = problems[p];
        const RandomStepDraw d =
            draw_admissible(rng, pb, 10, ranges[p][0], ranges[p][1]);
        if (d.cap_collapsed) {
          ++st.collapsed;
          return;
        }

        // Uncorrected step: both pairings stay nonpositive inside the cap.
        SchemeConfig plain;
        const StepResult r0 = advance_step(pb, d.y, plain, d.dt);
        const double m = std::max(r0.diag.max_proper_residual,
                                  r0.diag.max_tadmor_residual);
        st.worst_monotone = std::max(st.worst_monotone, m);
        if (m > 1e-12) ++st.monotone;

        // Corrected step under the enforced variant.
        SchemeConfig cfg;
        cfg.high_flux = trial % 3 ? HighFluxKind::central2
                                  : HighFluxKind::central4;
        cfg.limiter = trial % 2 ? LimiterStrategy::exact_lp
                                : LimiterStrategy::approximate;
        cfg.iteration.entropy_variant =
            trial % 4 == 3 ? EntropyVariant::tadmor : EntropyVariant::proper;
        const StepResult r1 = advance_step(pb, d.y, cfg, d.dt);
        const double res = cfg.iteration.entropy_variant ==
                                   EntropyVariant::tadmor
                               ? r1.diag.max_tadmor_residual
                               : r1.diag.max_proper_residual;
        st.worst_corrected = std::max(st.worst_corrected, res);
        if (res > 1e-8) ++st.corrected;
        if (!r1.diag.limiter_converged) ++st.unsettled;
      });

  char buf[160];
  std::vector<CheckRecord> out;
  std::snprintf(buf, sizeof buf,
                "%d states (%d skipped), worst uncorrected residual %.3e",
                count, total.collapsed, total.worst_monotone);
  out.push_back({"entropy/monotone-nonpositive", total.monotone == 0, buf});
  std::snprintf(buf, sizeof buf, "worst corrected residual %.3e",
                total.worst_corrected);
  out.push_back({"entropy/corrected-within-tolerance", total.corrected == 0,
                 buf});
  out.push_back({"entropy/iterations-settle", total.unsettled == 0,
                 "every corrected step's iteration converged"});
  return out;
}

}  // namespace entroflux::verify
