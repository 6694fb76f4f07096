#include "entroflux/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace entroflux {

namespace {

// ============================================================
// small numeric helpers
// ============================================================

constexpr double kGoldenRatio = 0.6180339887498949;  // (sqrt(5)-1)/2

// Golden-section search for the maximum of g on [a, b], refined until the
// bracket shrinks below rel_tol relative to the argument scale.
double golden_section_max(const std::function<double(double)>& g, double a,
                          double b, double rel_tol) {
  double x1 = b - kGoldenRatio * (b - a);
  double x2 = a + kGoldenRatio * (b - a);
  double g1 = g(x1);
  double g2 = g(x2);
  const double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
  while (b - a > rel_tol * scale) {
    if (g1 < g2) {
      a = x1;
      x1 = x2;
      g1 = g2;
      x2 = a + kGoldenRatio * (b - a);
      g2 = g(x2);
    } else {
      b = x2;
      x2 = x1;
      g2 = g1;
      x1 = b - kGoldenRatio * (b - a);
      g1 = g(x1);
    }
  }
  return 0.5 * (a + b);
}

// Interior candidate locations for extrema of g over [lo, hi] when no
// analytic critical points are known: dense sampling followed by
// golden-section refinement of every local-maximum bracket.
std::vector<double> sampled_maximum_candidates(
    const std::function<double(double)>& g, double lo, double hi) {
  constexpr int kSamples = 1024;
  std::vector<double> out;
  if (hi <= lo) return out;
  const double step = (hi - lo) / kSamples;
  std::vector<double> vals(kSamples + 1);
  for (int k = 0; k <= kSamples; ++k) vals[k] = g(lo + k * step);
  for (int k = 1; k < kSamples; ++k) {
    if (vals[k] >= vals[k - 1] && vals[k] >= vals[k + 1]) {
      out.push_back(golden_section_max(g, lo + (k - 1) * step,
                                       lo + (k + 1) * step, 1e-10));
    }
  }
  return out;
}

// Real roots of a*x^3 + b*x^2 + c*x + d, ascending. Used for analytic
// critical-point lists of rational fluxes.
std::vector<double> cubic_real_roots(double a, double b, double c, double d) {
  std::vector<double> roots;
  if (a == 0.0) {
    if (b != 0.0) {
      const double disc = c * c - 4.0 * b * d;
      if (disc >= 0.0) {
        const double s = std::sqrt(disc);
        roots = {(-c - s) / (2.0 * b), (-c + s) / (2.0 * b)};
      }
    } else if (c != 0.0) {
      roots = {-d / c};
    }
  } else {
    // Depressed form t^3 + p t + q with x = t - b/(3a).
    const double B = b / a, C = c / a, D = d / a;
    const double p = C - B * B / 3.0;
    const double q = 2.0 * B * B * B / 27.0 - B * C / 3.0 + D;
    const double shift = -B / 3.0;
    const double disc = 0.25 * q * q + p * p * p / 27.0;
    if (disc > 0.0) {
      const double s = std::sqrt(disc);
      const double t = std::cbrt(-0.5 * q + s) + std::cbrt(-0.5 * q - s);
      roots = {t + shift};
    } else if (p == 0.0 && q == 0.0) {
      roots = {shift};
    } else {
      const double pi = std::acos(-1.0);
      const double r = std::sqrt(-p / 3.0);
      const double phi = std::acos(std::clamp(
          3.0 * q / (2.0 * p) * std::sqrt(-3.0 / p), -1.0, 1.0));
      for (int k = 0; k < 3; ++k) {
        roots.push_back(2.0 * r * std::cos((phi - 2.0 * pi * k) / 3.0) + shift);
      }
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

// Adaptive Simpson quadrature, used to cross-check closed-form entropy
// fluxes at problem construction time.
double simpson_rec(const std::function<double(double)>& g, double a, double fa,
                   double m, double fm, double b, double fb, double whole,
                   double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = g(lm), frm = g(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::fabs(left + right - whole) < 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return simpson_rec(g, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(g, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& g, double a, double b,
                 double tol) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = g(a), fm = g(m), fb = g(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(g, a, fa, m, fm, b, fb, whole, tol, 40);
}

void append_in_range(std::vector<double>& dst, const std::vector<double>& src,
                     double lo, double hi) {
  for (double r : src) {
    if (r > lo && r < hi) dst.push_back(r);
  }
}

void validate(const ProblemSpec& p) {
  if (p.grid.n_cells <= 0) throw std::invalid_argument("grid has no cells");
  if (!(p.grid.x_max > p.grid.x_min))
    throw std::invalid_argument("empty spatial domain");
  if (!(p.end_time > 0.0)) throw std::invalid_argument("end_time must be > 0");
  if (p.fixed_dt < 0.0) throw std::invalid_argument("negative fixed_dt");
}

}  // namespace

// ============================================================
// CellField / ProblemSpec
// ============================================================

bool CellField::all_finite() const {
  for (double v : values) {
    if (!std::isfinite(v)) return false;
  }
  return std::isfinite(left_state) && std::isfinite(right_state);
}

CellField ProblemSpec::initial_field() const {
  CellField field;
  field.values.resize(static_cast<size_t>(grid.n_cells));
  for (int i = 0; i < grid.n_cells; ++i) {
    field.values[static_cast<size_t>(i)] = initial_condition(grid.cell_center(i));
  }
  field.left_state = left_state;
  field.right_state = right_state;
  return field;
}

// ============================================================
// interval extrema
// ============================================================

double max_abs_fprime_on_interval(const FluxFunction& flux, double a,
                                  double b) {
  const double lo = std::min(a, b), hi = std::max(a, b);
  auto g = [&flux](double u) { return std::fabs(flux.fprime(u)); };
  std::vector<double> candidates = {lo, hi};
  if (flux.has_analytic_critical_points) {
    // |f'| peaks interiorly only where f'' vanishes.
    append_in_range(candidates, flux.fsecond_roots, lo, hi);
  } else {
    auto interior = sampled_maximum_candidates(g, lo, hi);
    candidates.insert(candidates.end(), interior.begin(), interior.end());
  }
  double best = 0.0;
  for (double c : candidates) best = std::max(best, g(c));
  return best;
}

LocatedExtremum extremum_f_on_interval_located(const FluxFunction& flux,
                                               double a, double b,
                                               ExtremumMode mode) {
  const double lo = std::min(a, b), hi = std::max(a, b);
  const double sign = (mode == ExtremumMode::maximum) ? 1.0 : -1.0;
  auto g = [&flux, sign](double u) { return sign * flux.f(u); };
  std::vector<double> candidates = {lo, hi};
  if (flux.has_analytic_critical_points) {
    append_in_range(candidates, flux.fprime_roots, lo, hi);
  } else {
    auto interior = sampled_maximum_candidates(g, lo, hi);
    candidates.insert(candidates.end(), interior.begin(), interior.end());
  }
  std::sort(candidates.begin(), candidates.end());
  LocatedExtremum best{g(candidates.front()), candidates.front()};
  for (size_t k = 1; k < candidates.size(); ++k) {
    const double v = g(candidates[k]);
    if (v > best.value) best = {v, candidates[k]};
  }
  best.value *= sign;
  return best;
}

double extremum_f_on_interval(const FluxFunction& flux, double a, double b,
                              ExtremumMode mode) {
  return extremum_f_on_interval_located(flux, a, b, mode).value;
}

double max_usecond_on_interval(const EntropyPair& entropy, double a,
                               double b) {
  const double lo = std::min(a, b), hi = std::max(a, b);
  if (entropy.Usecond) {
    auto g = [&entropy](double u) { return entropy.Usecond(u); };
    std::vector<double> candidates = {lo, hi};
    if (entropy.has_analytic_curvature) {
      append_in_range(candidates, entropy.usecond_extrema, lo, hi);
    } else {
      auto interior = sampled_maximum_candidates(g, lo, hi);
      candidates.insert(candidates.end(), interior.begin(), interior.end());
    }
    double best = -std::numeric_limits<double>::infinity();
    for (double c : candidates) best = std::max(best, g(c));
    return best;
  }
  // Difference-quotient fallback on Uprime.
  constexpr int kSamples = 256;
  if (hi <= lo) {
    const double h = std::max(1e-6, 1e-6 * std::fabs(lo));
    return (entropy.Uprime(lo + h) - entropy.Uprime(lo - h)) / (2.0 * h);
  }
  const double step = (hi - lo) / kSamples;
  double best = 0.0;
  for (int k = 0; k < kSamples; ++k) {
    const double x0 = lo + k * step, x1 = x0 + step;
    best = std::max(best, (entropy.Uprime(x1) - entropy.Uprime(x0)) / step);
  }
  return best;
}

// ============================================================
// builtin problems
// ============================================================

namespace {

EntropyPair square_entropy_with(std::function<double(double)> F,
                                std::function<double(double)> psi) {
  EntropyPair e;
  e.U = [](double u) { return 0.5 * u * u; };
  e.Uprime = [](double u) { return u; };
  e.Usecond = [](double) { return 1.0; };
  e.has_analytic_curvature = true;  // constant curvature: endpoints suffice
  e.F = std::move(F);
  e.psi = std::move(psi);
  return e;
}

ProblemSpec make_nonconvex_quartic() {
  ProblemSpec p;
  p.name = "nonconvex_quartic";
  p.grid = {0.0, 2.0, 100};
  p.flux.f = [](double u) {
    return 0.25 * (u * u - 1.0) * (u * u - 4.0);
  };
  p.flux.fprime = [](double u) { return u * u * u - 2.5 * u; };
  p.flux.fprime_roots = {-std::sqrt(2.5), 0.0, std::sqrt(2.5)};
  p.flux.fsecond_roots = {-std::sqrt(5.0 / 6.0), std::sqrt(5.0 / 6.0)};
  p.flux.has_analytic_critical_points = true;
  p.entropy = square_entropy_with(
      [](double u) {
        const double u3 = u * u * u;
        return (u * u / 5.0 - 5.0 / 6.0) * u3;
      },
      [](double u) {
        const double u3 = u * u * u;
        return u3 * u * u / 20.0 - 5.0 / 12.0 * u3 + u;
      });
  p.initial_condition = [](double x) { return x <= 1.0 ? 2.0 : -2.0; };
  p.left_state = 2.0;
  p.right_state = -2.0;
  p.end_time = 1.2;
  p.fixed_dt = 0.002;
  return p;
}

ProblemSpec make_buckley_leverett() {
  ProblemSpec p;
  p.name = "buckley_leverett";
  p.grid = {-0.5, 0.5, 80};
  auto denom = [](double u) { return 5.0 * u * u - 2.0 * u + 1.0; };
  p.flux.f = [denom](double u) { return 4.0 * u * u / denom(u); };
  p.flux.fprime = [denom](double u) {
    const double d = denom(u);
    return 8.0 * u * (1.0 - u) / (d * d);
  };
  p.flux.fprime_roots = {0.0, 1.0};
  // f'' vanishes where 10u^3 - 15u^2 + 1 = 0.
  p.flux.fsecond_roots = cubic_real_roots(10.0, -15.0, 0.0, 1.0);
  p.flux.has_analytic_critical_points = true;
  auto F = [denom](double u) {
    const double d = denom(u);
    return -4.0 / 25.0 *
           ((u + 2.0) / d + std::log(d) -
            1.5 * std::atan(0.5 * (5.0 * u - 1.0)));
  };
  auto f = p.flux.f;
  p.entropy = square_entropy_with(
      F, [f, F](double u) { return u * f(u) - F(u); });
  p.initial_condition = [](double x) { return x < 0.0 ? -3.0 : 3.0; };
  p.left_state = -3.0;
  p.right_state = 3.0;
  p.end_time = 1.0;
  p.fixed_dt = 0.0;  // no canonical step; run adaptively
  p.default_courant = 0.3;

  // The closed-form F above is easy to mistype; cross-check it against a
  // direct quadrature of U' f' before letting anything use it.
  auto fprime = p.flux.fprime;
  auto integrand = [fprime](double s) { return s * fprime(s); };
  for (double u : {-3.0, -1.5, -0.5, 0.5, 1.0, 2.0, 3.0}) {
    const double expect = integrate(integrand, 0.0, u, 1e-10);
    if (std::fabs(F(u) - F(0.0) - expect) > 1e-6) {
      throw std::logic_error("entropy flux formula fails quadrature check");
    }
  }
  return p;
}

ProblemSpec make_linear_advection() {
  ProblemSpec p;
  p.name = "linear_advection";
  p.grid = {0.0, 1.0, 100};
  p.flux.f = [](double u) { return u; };
  p.flux.fprime = [](double) { return 1.0; };
  p.flux.has_analytic_critical_points = true;  // no interior critical points
  p.entropy = square_entropy_with([](double u) { return 0.5 * u * u; },
                                  [](double u) { return 0.5 * u * u; });
  p.initial_condition = [](double x) {
    return (x >= 0.1 && x <= 0.3) ? 1.0 : 0.0;
  };
  p.left_state = 0.0;
  p.right_state = 0.0;
  p.end_time = 0.5;
  p.fixed_dt = p.grid.dx();  // unit Courant: the monotone bound held exactly
  return p;
}

}  // namespace

ProblemSpec builtin_problem(const std::string& name) {
  ProblemSpec p;
  if (name == "nonconvex_quartic") {
    p = make_nonconvex_quartic();
  } else if (name == "buckley_leverett") {
    p = make_buckley_leverett();
  } else if (name == "linear_advection") {
    p = make_linear_advection();
  } else {
    throw std::invalid_argument("unknown builtin problem: " + name);
  }
  validate(p);
  return p;
}

const std::vector<std::string>& builtin_problem_names() {
  static const std::vector<std::string> names = {
      "nonconvex_quartic", "buckley_leverett", "linear_advection"};
  return names;
}

}  // namespace entroflux
