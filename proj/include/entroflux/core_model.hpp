#pragma once

#include <functional>
#include <string>
#include <vector>

namespace entroflux {

/// Scalar flux f(u) together with its derivative and, when available, the
/// analytic critical points needed for exact interval extrema:
///   - fprime_roots: zeros of f'  (interior extrema of f)
///   - fsecond_roots: zeros of f'' (interior extrema of f')
/// When has_analytic_critical_points is false the interval-extremum routines
/// fall back to dense sampling plus golden-section refinement.
struct FluxFunction {
  std::function<double(double)> f;
  std::function<double(double)> fprime;
  std::vector<double> fprime_roots;
  std::vector<double> fsecond_roots;
  bool has_analytic_critical_points = false;
};

/// Convex entropy U with matching entropy flux F (F' = U' f') and the flux
/// potential psi(u) = U'(u) f(u) - F(u). Usecond is optional; when absent,
/// curvature bounds are estimated by sampling Uprime differences. When the
/// interior extrema of U'' are known analytically, list them (possibly
/// empty) and set the flag so interval bounds need only endpoint and
/// candidate evaluations.
struct EntropyPair {
  std::function<double(double)> U;
  std::function<double(double)> Uprime;
  std::function<double(double)> F;
  std::function<double(double)> psi;
  std::function<double(double)> Usecond;
  std::vector<double> usecond_extrema;
  bool has_analytic_curvature = false;
};

/// Uniform grid of n_cells cells covering [x_min, x_max].
struct Grid1D {
  double x_min = 0.0;
  double x_max = 1.0;
  int n_cells = 0;

  double dx() const { return (x_max - x_min) / n_cells; }
  double cell_center(int i) const { return x_min + (i + 0.5) * dx(); }
  // Interface k sits between cells k-1 and k, k in [0, n_cells].
  double interface_position(int k) const { return x_min + k * dx(); }
};

/// Cell-average field with two frozen ghost layers per side. Out-of-range
/// reads resolve to the constant far-field states, which is the right
/// boundary treatment for Riemann-type problems whose waves never reach the
/// domain ends.
struct CellField {
  std::vector<double> values;
  double left_state = 0.0;
  double right_state = 0.0;

  int n() const { return static_cast<int>(values.size()); }

  // Valid for i in [-2, n()+1]; the two ghost layers per side are frozen.
  double at(int i) const {
    if (i < 0) return left_state;
    if (i >= n()) return right_state;
    return values[static_cast<size_t>(i)];
  }

  bool all_finite() const;
};

/// Full problem description: what to solve and on which grid.
struct ProblemSpec {
  std::string name;
  Grid1D grid;
  FluxFunction flux;
  EntropyPair entropy;
  std::function<double(double)> initial_condition;
  double left_state = 0.0;
  double right_state = 0.0;
  double end_time = 0.0;
  double fixed_dt = 0.0;        // 0 means no preset step; run adaptively
  double default_courant = 0.9; // adaptive-mode target for the monotone ratio

  /// Sample the initial condition at cell centers and attach the far-field
  /// ghost states.
  CellField initial_field() const;
};

enum class ExtremumMode { minimum, maximum };

/// max over s in [min(a,b), max(a,b)] of |f'(s)|. Uses the analytic critical
/// points of f' when the flux carries them, otherwise dense sampling (>= 1024
/// points) with golden-section refinement of each interior bracket.
double max_abs_fprime_on_interval(const FluxFunction& flux, double a, double b);

/// min or max of f over [min(a,b), max(a,b)], same candidate strategy with
/// the roots of f'.
double extremum_f_on_interval(const FluxFunction& flux, double a, double b,
                              ExtremumMode mode);

/// Same as extremum_f_on_interval but also reports where the extremum is
/// attained. Ties break toward the smallest argument.
struct LocatedExtremum {
  double value = 0.0;
  double arg = 0.0;
};
LocatedExtremum extremum_f_on_interval_located(const FluxFunction& flux,
                                               double a, double b,
                                               ExtremumMode mode);

/// Largest U'' over [min(a,b), max(a,b)], via Usecond when present, sampled
/// otherwise.
double max_usecond_on_interval(const EntropyPair& entropy, double a, double b);

/// Named benchmark problems:
///   nonconvex_quartic   f(u) = (u^2-1)(u^2-4)/4 on [0,2], states 2 / -2
///   buckley_leverett    f(u) = 4u^2/(4u^2+(1-u)^2) on [-0.5,0.5], states -3 / 3
///   linear_advection    f(u) = u, square pulse (plumbing sanity case)
/// Throws std::invalid_argument for unknown names.
ProblemSpec builtin_problem(const std::string& name);

const std::vector<std::string>& builtin_problem_names();

}  // namespace entroflux
