#pragma once

// Shared helpers for the limiter test binaries: random states and a
// conservative admissible time step (monotone interval-speed bound plus the
// per-cell entropy margin caps) computed independently of the library's own
// step control.

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "entroflux/core_model.hpp"
#include "entroflux/numerical_fluxes.hpp"
#include "entroflux/verify.hpp"

namespace testsupport {

inline entroflux::CellField random_field(std::mt19937_64& rng, int n,
                                         double lo, double hi) {
  entroflux::CellField f;
  f.values.resize(n);
  for (int i = 0; i < n; ++i)
    f.values[i] = entroflux::verify::uniform(rng, lo, hi);
  f.left_state = entroflux::verify::uniform(rng, lo, hi);
  f.right_state = entroflux::verify::uniform(rng, lo, hi);
  return f;
}

// Largest dt (scaled by `safety`) for which the uncorrected low-order update
// keeps neighbour bounds and both cell entropy inequalities. Low flux fixed
// to the interval-speed two-point flux used throughout the tests.
inline double safe_step_rusanov(const entroflux::ProblemSpec& pb,
                                const entroflux::CellField& y, double safety) {
  using namespace entroflux;
  const int n = y.n();
  const double dx = pb.grid.dx();
  const double inf = std::numeric_limits<double>::infinity();

  double ymin = std::min(y.left_state, y.right_state);
  double ymax = std::max(y.left_state, y.right_state);
  for (double v : y.values) {
    ymin = std::min(ymin, v);
    ymax = std::max(ymax, v);
  }
  const double usmax = max_usecond_on_interval(pb.entropy, ymin, ymax);

  std::vector<double> M(n + 1), h(n + 1), H(n + 1);
  for (int k = 0; k <= n; ++k) {
    const double ul = y.at(k - 1), ur = y.at(k);
    M[k] = max_abs_fprime_on_interval(pb.flux, ul, ur);
    h[k] = rusanov_flux(pb.flux, ul, ur);
    H[k] = rusanov_entropy_flux(pb.flux, pb.entropy, ul, ur);
  }

  double dt = inf;
  for (int i = 0; i < n; ++i) {
    // Incremental-form coefficients of the low-order update: the new value is
    // a convex combination of the three-point stencil iff
    // (dt/dx)*(cr + dl) <= 1, with cr = (M - a)/2 on the right interface and
    // dl = (M + a)/2 on the left (a = secant slope of f).
    const double dyr = y.at(i + 1) - y.at(i);
    const double dyl = y.at(i) - y.at(i - 1);
    const double ar =
        dyr != 0.0 ? (pb.flux.f(y.at(i + 1)) - pb.flux.f(y.at(i))) / dyr : 0.0;
    const double al =
        dyl != 0.0 ? (pb.flux.f(y.at(i)) - pb.flux.f(y.at(i - 1))) / dyl : 0.0;
    const double cr = dyr != 0.0 ? 0.5 * (M[i + 1] - ar) : 0.0;
    const double dl = dyl != 0.0 ? 0.5 * (M[i] + al) : 0.0;
    if (cr + dl > 0.0) dt = std::min(dt, dx / (cr + dl));

    const double dh = h[i + 1] - h[i];
    if (std::fabs(dh) < 1e-13 || usmax <= 0.0) continue;
    const double dH = H[i + 1] - H[i];
    const double margin = pb.entropy.Uprime(y.values[i]) * dh - dH;
    if (margin > 0.0) dt = std::min(dt, 2.0 * dx * margin / (usmax * dh * dh));

    // Entropy-variable pairing margin for the same cell.
    auto vpsi = [&](int j, double& v, double& psi) {
      const double u = y.at(j);
      v = pb.entropy.Uprime(u);
      psi = v * pb.flux.f(u) - pb.entropy.F(u);
    };
    double vl, psil, vc, psic, vr, psir;
    vpsi(i - 1, vl, psil);
    vpsi(i, vc, psic);
    vpsi(i + 1, vr, psir);
    const double tm = -0.5 * ((h[i + 1] * (vr - vc) - (psir - psic)) +
                              (h[i] * (vc - vl) - (psic - psil)));
    if (tm > 0.0) dt = std::min(dt, 2.0 * dx * tm / (usmax * dh * dh));
  }
  if (dt == inf) dt = dx;
  return safety * dt;
}

}  // namespace testsupport
