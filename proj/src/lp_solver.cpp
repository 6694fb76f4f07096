#include "entroflux/lp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <vector>

namespace entroflux {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// The working form is A.x = 0 where each row i gets a slack column with
// coefficient -1 and bounds equal to the row bounds:
//     sum_j a_ij x_j - s_i = 0,   row.lower <= s_i <= row.upper.
// Structural variables keep their box bounds. A basis is one column per row;
// every variable carries its current value, and nonbasic variables simply sit
// wherever they were last parked (usually a bound). That generalisation keeps
// phase 1 honest: temporarily widened bounds can park a variable away from a
// real bound without breaking any invariant.
struct Tableau {
  int n = 0;       // structural variables
  int m = 0;       // rows == slacks
  int total = 0;   // n + m
  std::vector<std::vector<std::pair<int, double>>> cols;  // per variable
  std::vector<double> lo, hi;      // real bounds
  std::vector<double> wlo, whi;    // working bounds (phase 1 widens these)
  std::vector<double> cost;        // current objective
  std::vector<double> x;           // current values, all variables
  std::vector<int> basic;          // basic[r] = variable in row r
  std::vector<char> in_basis;
  std::vector<std::vector<double>> binv;  // dense inverse basis, m x m
  int iterations = 0;
  int pivots_since_refactor = 0;
  LpOptions opt;
};

bool try_invert_basis(Tableau& t) {
  const int m = t.m;
  // Gauss-Jordan on [B | I] with partial pivoting.
  std::vector<std::vector<double>> a(m, std::vector<double>(2 * m, 0.0));
  for (int r = 0; r < m; ++r) {
    for (const auto& [row, v] : t.cols[t.basic[r]]) a[row][r] = v;
    a[r][m + r] = 1.0;
  }
  for (int c = 0; c < m; ++c) {
    int piv = c;
    for (int r = c + 1; r < m; ++r)
      if (std::fabs(a[r][c]) > std::fabs(a[piv][c])) piv = r;
    if (std::fabs(a[piv][c]) < 1e-13) return false;
    std::swap(a[c], a[piv]);
    const double inv = 1.0 / a[c][c];
    for (int k = c; k < 2 * m; ++k) a[c][k] *= inv;
    for (int r = 0; r < m; ++r) {
      if (r == c) continue;
      const double f = a[r][c];
      if (f == 0.0) continue;
      for (int k = c; k < 2 * m; ++k) a[r][k] -= f * a[c][k];
    }
  }
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c) t.binv[r][c] = a[r][m + c];
  return true;
}

// The product-form updates can drift the basis into numerical dependence.
// Recover by keeping a maximal independent subset of the current basic
// columns (greedy, in position order) and completing it with slack columns,
// which always span. Evicted variables become nonbasic at their current
// values — the tableau allows that.
void rebuild_basis(Tableau& t) {
  const int m = t.m;
  std::vector<int> candidates;
  candidates.reserve(2 * m);
  for (int r = 0; r < m; ++r) candidates.push_back(t.basic[r]);
  for (int j = t.n; j < t.total; ++j)
    if (!t.in_basis[j]) candidates.push_back(j);

  // Eliminated frame: E accumulates the row operations, so a candidate's
  // reduced column is E * col.
  std::vector<std::vector<double>> E(m, std::vector<double>(m, 0.0));
  for (int r = 0; r < m; ++r) E[r][r] = 1.0;
  std::vector<int> chosen;
  chosen.reserve(m);
  std::vector<double> w(m);
  for (int j : candidates) {
    if (static_cast<int>(chosen.size()) == m) break;
    std::fill(w.begin(), w.end(), 0.0);
    for (const auto& [row, v] : t.cols[j])
      for (int r = 0; r < m; ++r) w[r] += v * E[r][row];
    const int k = static_cast<int>(chosen.size());
    int piv = k;
    for (int r = k + 1; r < m; ++r)
      if (std::fabs(w[r]) > std::fabs(w[piv])) piv = r;
    if (std::fabs(w[piv]) < 1e-11) continue;  // dependent on the chosen set
    std::swap(E[k], E[piv]);
    std::swap(w[k], w[piv]);
    const double inv = 1.0 / w[k];
    for (int c = 0; c < m; ++c) E[k][c] *= inv;
    for (int r = 0; r < m; ++r) {
      if (r == k || w[r] == 0.0) continue;
      for (int c = 0; c < m; ++c) E[r][c] -= w[r] * E[k][c];
    }
    chosen.push_back(j);
  }
  if (static_cast<int>(chosen.size()) < m)
    throw std::runtime_error("lp_solver: basis rebuild failed");

  std::fill(t.in_basis.begin(), t.in_basis.end(), 0);
  for (int r = 0; r < m; ++r) {
    t.basic[r] = chosen[r];
    t.in_basis[chosen[r]] = 1;
  }
}

void refactorize(Tableau& t) {
  for (int attempt = 0; attempt < 2; ++attempt) {
    if (try_invert_basis(t)) {
      t.pivots_since_refactor = 0;
      return;
    }
    rebuild_basis(t);
  }
  throw std::runtime_error("lp_solver: singular basis during refactor");
}

// x_B = Binv * (-A_N x_N), overwriting the basic entries of t.x.
void recompute_basic_values(Tableau& t) {
  std::vector<double> rhs(t.m, 0.0);
  for (int j = 0; j < t.total; ++j) {
    if (t.in_basis[j] || t.x[j] == 0.0) continue;
    for (const auto& [row, v] : t.cols[j]) rhs[row] -= v * t.x[j];
  }
  for (int r = 0; r < t.m; ++r) {
    double s = 0.0;
    for (int c = 0; c < t.m; ++c) s += t.binv[r][c] * rhs[c];
    t.x[t.basic[r]] = s;
  }
}

std::vector<double> ftran(const Tableau& t, int j) {
  std::vector<double> w(t.m, 0.0);
  for (const auto& [row, v] : t.cols[j])
    for (int r = 0; r < t.m; ++r) w[r] += v * t.binv[r][row];
  return w;
}

std::vector<double> btran_costs(const Tableau& t) {
  std::vector<double> y(t.m, 0.0);
  for (int r = 0; r < t.m; ++r) {
    const double cb = t.cost[t.basic[r]];
    if (cb == 0.0) continue;
    for (int c = 0; c < t.m; ++c) y[c] += cb * t.binv[r][c];
  }
  return y;
}

enum class CoreResult { optimal, limit };

// Maximise t.cost subject to working bounds, starting from the current
// points/basis. Bland's rule on both the entering and leaving choice.
CoreResult run_simplex(Tableau& t) {
  const int limit = t.opt.max_iterations;
  const double ptol = t.opt.pivot_tol;
  while (true) {
    if (t.iterations >= limit) return CoreResult::limit;
    ++t.iterations;

    const std::vector<double> y = btran_costs(t);
    int enter = -1;
    int dir = 0;
    for (int j = 0; j < t.total; ++j) {
      if (t.in_basis[j]) continue;
      if (t.whi[j] - t.wlo[j] == 0.0) continue;  // fixed
      double d = t.cost[j];
      for (const auto& [row, v] : t.cols[j]) d -= y[row] * v;
      if (d > ptol && t.x[j] < t.whi[j]) {
        enter = j;
        dir = +1;
        break;
      }
      if (d < -ptol && t.x[j] > t.wlo[j]) {
        enter = j;
        dir = -1;
        break;
      }
    }
    if (enter < 0) return CoreResult::optimal;

    const std::vector<double> w = ftran(t, enter);
    // Entering variable's own room before it hits a working bound.
    double t_own =
        dir > 0 ? t.whi[enter] - t.x[enter] : t.x[enter] - t.wlo[enter];
    double t_row = kInf;
    int leave_r = -1;
    double leave_bound = 0.0;
    for (int r = 0; r < t.m; ++r) {
      const double delta = -dir * w[r];  // d x_basic[r] / d step
      const int k = t.basic[r];
      double ratio = kInf;
      double bnd = 0.0;
      if (delta > ptol && t.whi[k] < kInf) {
        ratio = (t.whi[k] - t.x[k]) / delta;
        bnd = t.whi[k];
      } else if (delta < -ptol && t.wlo[k] > -kInf) {
        ratio = (t.x[k] - t.wlo[k]) / (-delta);
        bnd = t.wlo[k];
      }
      if (ratio == kInf) continue;
      if (ratio < 0.0) ratio = 0.0;  // already pinned within tolerance
      if (ratio < t_row - 1e-15 ||
          (ratio < t_row + 1e-15 && (leave_r < 0 || k < t.basic[leave_r]))) {
        t_row = ratio;
        leave_r = r;
        leave_bound = bnd;
      }
    }

    const double step = std::min(t_own, t_row);
    if (step == kInf)
      throw std::runtime_error("lp_solver: unbounded direction");

    if (t_own <= t_row) {
      // The entering variable parks at its own bound; basis unchanged.
      for (int r = 0; r < t.m; ++r) t.x[t.basic[r]] -= dir * step * w[r];
      t.x[enter] = dir > 0 ? t.whi[enter] : t.wlo[enter];
    } else {
      for (int r = 0; r < t.m; ++r) t.x[t.basic[r]] -= dir * step * w[r];
      t.x[enter] += dir * step;
      const int k = t.basic[leave_r];
      t.x[k] = leave_bound;  // pin exactly, no drift
      t.in_basis[k] = 0;
      t.in_basis[enter] = 1;
      t.basic[leave_r] = enter;
      // Product-form update of Binv: pivot on w[leave_r].
      const double piv = w[leave_r];
      if (std::fabs(piv) < 1e-13)
        throw std::runtime_error("lp_solver: vanishing pivot");
      std::vector<double>& prow = t.binv[leave_r];
      const double inv = 1.0 / piv;
      for (int c = 0; c < t.m; ++c) prow[c] *= inv;
      for (int r = 0; r < t.m; ++r) {
        if (r == leave_r) continue;
        const double f = w[r];
        if (f == 0.0) continue;
        for (int c = 0; c < t.m; ++c) t.binv[r][c] -= f * prow[c];
      }
      if (++t.pivots_since_refactor >= 64) {
        refactorize(t);
        recompute_basic_values(t);
      }
    }
  }
}

int first_violating_variable(const Tableau& t) {
  for (int j = 0; j < t.total; ++j) {
    if (t.x[j] < t.lo[j] - t.opt.feasibility_tol ||
        t.x[j] > t.hi[j] + t.opt.feasibility_tol)
      return j;
  }
  return -1;
}

}  // namespace

LinearProgram LinearProgram::boxed(int n) {
  LinearProgram lp;
  lp.n_vars = n;
  lp.objective.assign(n, 0.0);
  lp.var_lower.assign(n, 0.0);
  lp.var_upper.assign(n, 1.0);
  return lp;
}

void LinearProgram::add_row(std::vector<std::pair<int, double>> coeffs,
                            double lower, double upper) {
  rows.push_back(LpRow{std::move(coeffs), lower, upper});
}

LpSolution solve(const LinearProgram& lp, const LpOptions& options) {
  const int n = lp.n_vars;
  const int m = static_cast<int>(lp.rows.size());
  if (static_cast<int>(lp.objective.size()) != n ||
      static_cast<int>(lp.var_lower.size()) != n ||
      static_cast<int>(lp.var_upper.size()) != n)
    throw std::invalid_argument("lp_solver: inconsistent array sizes");
  for (int j = 0; j < n; ++j) {
    if (!std::isfinite(lp.var_lower[j]) || !std::isfinite(lp.var_upper[j]))
      throw std::invalid_argument("lp_solver: variable bounds must be finite");
    if (lp.var_lower[j] > lp.var_upper[j])
      throw std::invalid_argument("lp_solver: empty variable bound interval");
  }
  for (const auto& row : lp.rows) {
    if (row.lower > row.upper)
      throw std::invalid_argument("lp_solver: empty row bound interval");
    for (const auto& [j, v] : row.coeffs) {
      if (j < 0 || j >= n)
        throw std::invalid_argument("lp_solver: coefficient index out of range");
      if (!std::isfinite(v))
        throw std::invalid_argument("lp_solver: non-finite coefficient");
    }
  }

  Tableau t;
  t.n = n;
  t.m = m;
  t.total = n + m;
  t.opt = options;
  if (t.opt.max_iterations <= 0)
    t.opt.max_iterations = std::max(1, 100 * (n + m));
  t.cols.assign(t.total, {});
  for (int i = 0; i < m; ++i) {
    for (const auto& [j, v] : lp.rows[i].coeffs)
      t.cols[j].emplace_back(i, v);
    t.cols[n + i].emplace_back(i, -1.0);
  }
  t.lo.resize(t.total);
  t.hi.resize(t.total);
  for (int j = 0; j < n; ++j) {
    t.lo[j] = lp.var_lower[j];
    t.hi[j] = lp.var_upper[j];
  }
  for (int i = 0; i < m; ++i) {
    t.lo[n + i] = lp.rows[i].lower;
    t.hi[n + i] = lp.rows[i].upper;
  }
  t.wlo = t.lo;
  t.whi = t.hi;
  t.cost.assign(t.total, 0.0);
  t.x.assign(t.total, 0.0);
  for (int j = 0; j < n; ++j) t.x[j] = t.lo[j];
  t.basic.resize(m);
  t.in_basis.assign(t.total, 0);
  for (int i = 0; i < m; ++i) {
    t.basic[i] = n + i;
    t.in_basis[n + i] = 1;
  }
  t.binv.assign(m, std::vector<double>(m, 0.0));
  for (int r = 0; r < m; ++r) t.binv[r][r] = -1.0;  // slack columns are -e_i
  recompute_basic_values(t);

  LpSolution sol;

  // Phase 1: repair one violated variable at a time. The target variable is
  // pushed toward its violated bound while every other currently-violating
  // variable gets its working bounds widened just enough to contain its
  // present value (so it cannot get worse). Each round either makes the
  // target feasible for good or proves the program infeasible, so the number
  // of rounds is at most the initial violation count.
  while (true) {
    const int target = first_violating_variable(t);
    if (target < 0) break;
    t.wlo = t.lo;
    t.whi = t.hi;
    std::fill(t.cost.begin(), t.cost.end(), 0.0);
    for (int j = 0; j < t.total; ++j) {
      if (j == target) continue;
      if (t.x[j] < t.wlo[j]) t.wlo[j] = t.x[j];
      if (t.x[j] > t.whi[j]) t.whi[j] = t.x[j];
    }
    const bool below = t.x[target] < t.lo[target];
    if (below) {
      t.cost[target] = 1.0;
      t.wlo[target] = std::min(t.x[target], t.lo[target]);
      t.whi[target] = t.lo[target];
    } else {
      t.cost[target] = -1.0;
      t.whi[target] = std::max(t.x[target], t.hi[target]);
      t.wlo[target] = t.hi[target];
    }
    const CoreResult res = run_simplex(t);
    if (res == CoreResult::limit) {
      sol.status = LpStatus::iteration_limit;
      sol.iterations = t.iterations;
      return sol;
    }
    if (t.x[target] < t.lo[target] - t.opt.feasibility_tol ||
        t.x[target] > t.hi[target] + t.opt.feasibility_tol) {
      sol.status = LpStatus::infeasible;
      sol.iterations = t.iterations;
      return sol;
    }
    // Snap the target onto its bound if the subproblem ended within
    // tolerance of it, so later rounds treat it as feasible.
    if (below && t.x[target] < t.lo[target]) t.x[target] = t.lo[target];
    if (!below && t.x[target] > t.hi[target]) t.x[target] = t.hi[target];
    if (m > 0) {
      refactorize(t);
      recompute_basic_values(t);
    }
  }

  // Phase 2.
  t.wlo = t.lo;
  t.whi = t.hi;
  for (int j = 0; j < t.total; ++j) t.cost[j] = j < n ? lp.objective[j] : 0.0;
  const CoreResult res = run_simplex(t);
  sol.iterations = t.iterations;
  if (res == CoreResult::limit) {
    sol.status = LpStatus::iteration_limit;
    return sol;
  }

  sol.status = LpStatus::optimal;
  sol.x.assign(t.x.begin(), t.x.begin() + n);
  for (int j = 0; j < n; ++j) {
    // Clean tiny excursions introduced by floating point updates.
    sol.x[j] = std::min(std::max(sol.x[j], lp.var_lower[j]), lp.var_upper[j]);
    sol.objective += lp.objective[j] * sol.x[j];
  }
  return sol;
}

std::string to_lp_text(const LinearProgram& lp) {
  std::string out = "Maximize\n obj:";
  char buf[96];
  for (int j = 0; j < lp.n_vars; ++j) {
    if (lp.objective[j] == 0.0) continue;
    std::snprintf(buf, sizeof buf, " %+.17g x%d", lp.objective[j], j);
    out += buf;
  }
  out += "\nSubject To\n";
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    const LpRow& row = lp.rows[i];
    std::string body;
    for (const auto& [j, v] : row.coeffs) {
      std::snprintf(buf, sizeof buf, " %+.17g x%d", v, j);
      body += buf;
    }
    if (row.lower == row.upper) {
      std::snprintf(buf, sizeof buf, " = %.17g\n", row.lower);
      out += " r" + std::to_string(i) + ":" + body + buf;
    } else {
      if (row.lower > -kInf) {
        std::snprintf(buf, sizeof buf, " >= %.17g\n", row.lower);
        out += " r" + std::to_string(i) + "_lo:" + body + buf;
      }
      if (row.upper < kInf) {
        std::snprintf(buf, sizeof buf, " <= %.17g\n", row.upper);
        out += " r" + std::to_string(i) + "_up:" + body + buf;
      }
    }
  }
  out += "Bounds\n";
  for (int j = 0; j < lp.n_vars; ++j) {
    std::snprintf(buf, sizeof buf, " %.17g <= x%d <= %.17g\n", lp.var_lower[j],
                  j, lp.var_upper[j]);
    out += buf;
  }
  out += "End\n";
  return out;
}

}  // namespace entroflux
