#include "entroflux/numerical_fluxes.hpp"

#include <stdexcept>

namespace entroflux {

double rusanov_flux_with_coefficient(const FluxFunction& flux, double yl,
                                     double yr, double coeff) {
  return 0.5 * (flux.f(yl) + flux.f(yr) - coeff * (yr - yl));
}

double rusanov_entropy_flux_with_coefficient(const EntropyPair& entropy,
                                             double yl, double yr,
                                             double coeff) {
  return 0.5 * (entropy.F(yl) + entropy.F(yr) -
                coeff * (entropy.U(yr) - entropy.U(yl)));
}

double rusanov_flux(const FluxFunction& flux, double yl, double yr) {
  return rusanov_flux_with_coefficient(
      flux, yl, yr, max_abs_fprime_on_interval(flux, yl, yr));
}

double rusanov_entropy_flux(const FluxFunction& flux, const EntropyPair& entropy,
                            double yl, double yr) {
  return rusanov_entropy_flux_with_coefficient(
      entropy, yl, yr, max_abs_fprime_on_interval(flux, yl, yr));
}

double godunov_flux(const FluxFunction& flux, double yl, double yr) {
  const ExtremumMode mode =
      (yl <= yr) ? ExtremumMode::minimum : ExtremumMode::maximum;
  return extremum_f_on_interval(flux, yl, yr, mode);
}

double godunov_entropy_flux(const FluxFunction& flux, const EntropyPair& entropy,
                            double yl, double yr) {
  const ExtremumMode mode =
      (yl <= yr) ? ExtremumMode::minimum : ExtremumMode::maximum;
  return entropy.F(extremum_f_on_interval_located(flux, yl, yr, mode).arg);
}

double central_flux_2(double f_i, double f_ip1) {
  return 0.5 * (f_i + f_ip1);
}

double central_flux_4(double f_im1, double f_i, double f_ip1, double f_ip2) {
  return 7.0 / 12.0 * (f_i + f_ip1) - 1.0 / 12.0 * (f_im1 + f_ip2);
}

double central_entropy_flux_2(double F_i, double F_ip1) {
  return central_flux_2(F_i, F_ip1);
}

double central_entropy_flux_4(double F_im1, double F_i, double F_ip1,
                              double F_ip2) {
  return central_flux_4(F_im1, F_i, F_ip1, F_ip2);
}

double tadmor_entropy_flux(const EntropyPair& entropy, double ul, double ur,
                           double h_num) {
  return 0.5 * (entropy.Uprime(ul) + entropy.Uprime(ur)) * h_num -
         0.5 * (entropy.psi(ul) + entropy.psi(ur));
}

InterfaceFluxSet assemble_interface_fluxes(const ProblemSpec& problem,
                                           const CellField& y, LowFluxKind low,
                                           HighFluxKind high) {
  const int n = y.n();
  if (n == 0) throw std::invalid_argument("empty field");
  InterfaceFluxSet s;
  s.h_low.resize(n + 1);
  s.h_high.resize(n + 1);
  s.h_ad.resize(n + 1);
  s.H_low.resize(n + 1);
  s.H_high.resize(n + 1);
  s.H_ad.resize(n + 1);

  // Point values over the ghost-extended range [-2, n+1], offset by +2.
  std::vector<double> fv(n + 4), Fv(n + 4);
  for (int i = -2; i <= n + 1; ++i) {
    fv[i + 2] = problem.flux.f(y.at(i));
    Fv[i + 2] = problem.entropy.F(y.at(i));
  }

  for (int k = 0; k <= n; ++k) {
    const double yl = y.at(k - 1);
    const double yr = y.at(k);
    switch (low) {
      case LowFluxKind::rusanov: {
        const double coeff = max_abs_fprime_on_interval(problem.flux, yl, yr);
        s.h_low[k] = rusanov_flux_with_coefficient(problem.flux, yl, yr, coeff);
        s.H_low[k] = rusanov_entropy_flux_with_coefficient(problem.entropy, yl,
                                                           yr, coeff);
        break;
      }
      case LowFluxKind::godunov: {
        const ExtremumMode mode =
            (yl <= yr) ? ExtremumMode::minimum : ExtremumMode::maximum;
        const LocatedExtremum ext =
            extremum_f_on_interval_located(problem.flux, yl, yr, mode);
        s.h_low[k] = ext.value;
        s.H_low[k] = problem.entropy.F(ext.arg);
        break;
      }
    }
    switch (high) {
      case HighFluxKind::central2:
        s.h_high[k] = central_flux_2(fv[k + 1], fv[k + 2]);
        s.H_high[k] = central_entropy_flux_2(Fv[k + 1], Fv[k + 2]);
        break;
      case HighFluxKind::central4:
        s.h_high[k] = central_flux_4(fv[k], fv[k + 1], fv[k + 2], fv[k + 3]);
        s.H_high[k] =
            central_entropy_flux_4(Fv[k], Fv[k + 1], Fv[k + 2], Fv[k + 3]);
        break;
      case HighFluxKind::none:
        s.h_high[k] = s.h_low[k];
        s.H_high[k] = s.H_low[k];
        break;
    }
    s.h_ad[k] = s.h_high[k] - s.h_low[k];
    s.H_ad[k] = s.H_high[k] - s.H_low[k];
  }
  return s;
}

}  // namespace entroflux
