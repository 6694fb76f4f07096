#pragma once

#include <string>
#include <vector>

namespace entroflux {

/// One linear constraint: lower <= sum coeffs . x <= upper. Either side may
/// be infinite. Coefficients are stored sparsely as (variable, value) pairs.
struct LpRow {
  std::vector<std::pair<int, double>> coeffs;
  double lower;
  double upper;
};

/// maximize objective . x  subject to  var_lower <= x <= var_upper and the
/// rows. Variable bounds must be finite (the intended use is the unit box);
/// row bounds may be one-sided.
struct LinearProgram {
  int n_vars = 0;
  std::vector<double> objective;
  std::vector<double> var_lower;
  std::vector<double> var_upper;
  std::vector<LpRow> rows;

  /// Convenience constructor for n variables boxed to [0,1] with zero
  /// objective.
  static LinearProgram boxed(int n);

  void add_row(std::vector<std::pair<int, double>> coeffs, double lower,
               double upper);
};

enum class LpStatus { optimal, infeasible, iteration_limit };

struct LpSolution {
  LpStatus status = LpStatus::iteration_limit;
  std::vector<double> x;
  double objective = 0.0;
  int iterations = 0;
};

struct LpOptions {
  double feasibility_tol = 1e-9;
  double pivot_tol = 1e-11;
  int max_iterations = 0;  // 0: use 100 * (n_vars + n_rows)
};

/// Bounded-variable primal simplex, Bland's anti-cycling rule, two phases.
/// Deterministic: identical inputs produce identical iterates and output.
LpSolution solve(const LinearProgram& lp, const LpOptions& options = {});

/// Plain-text dump of the program (LP file syntax) for debugging.
std::string to_lp_text(const LinearProgram& lp);

}  // namespace entroflux
