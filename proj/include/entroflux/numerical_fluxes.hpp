#pragma once

#include "entroflux/core_model.hpp"

namespace entroflux {

enum class LowFluxKind { rusanov, godunov };
enum class HighFluxKind { central2, central4, none };

/// Per-interface flux data for one hybrid step. Every array has
/// n_cells + 1 entries; entry k belongs to the interface between cells k-1
/// and k (ghost cells supply the missing neighbors at the ends). h_* are
/// numerical fluxes, H_* the matching numerical entropy fluxes, and the
/// *_ad arrays the antidiffusive differences high - low.
struct InterfaceFluxSet {
  std::vector<double> h_low, h_high, h_ad;
  std::vector<double> H_low, H_high, H_ad;

  int n_interfaces() const { return static_cast<int>(h_low.size()); }
};

/// Local Lax-Friedrichs flux with the dissipation coefficient taken as the
/// exact max of |f'| over the state interval.
double rusanov_flux(const FluxFunction& flux, double yl, double yr);

/// Entropy flux paired with rusanov_flux: same stencil and the same interval
/// coefficient applied to the entropy differences.
double rusanov_entropy_flux(const FluxFunction& flux, const EntropyPair& entropy,
                            double yl, double yr);

// Variants with the dissipation coefficient supplied by the caller, so one
// interval max can serve both the flux and its entropy flux at an interface.
double rusanov_flux_with_coefficient(const FluxFunction& flux, double yl,
                                     double yr, double coeff);
double rusanov_entropy_flux_with_coefficient(const EntropyPair& entropy,
                                             double yl, double yr,
                                             double coeff);

/// Exact Riemann (interval extremum) flux: min of f over [yl, yr] when
/// yl <= yr, max over [yr, yl] otherwise.
double godunov_flux(const FluxFunction& flux, double yl, double yr);

/// Entropy flux paired with godunov_flux: F evaluated where the interval
/// extremum of f is attained (ties break toward the smaller state).
double godunov_entropy_flux(const FluxFunction& flux, const EntropyPair& entropy,
                            double yl, double yr);

// Central (entropy-neutral) high-order fluxes, as plain stencil weights on
// point values. The entropy versions apply the same weights to F values.
double central_flux_2(double f_i, double f_ip1);
double central_flux_4(double f_im1, double f_i, double f_ip1, double f_ip2);
double central_entropy_flux_2(double F_i, double F_ip1);
double central_entropy_flux_4(double F_im1, double F_i, double F_ip1,
                              double F_ip2);

/// Entropy flux of the comparison type built from an arbitrary numerical
/// flux h_num at the interface: (v_l+v_r)/2 * h_num - (psi_l+psi_r)/2 with
/// v = U'. Consistent: reduces to F(u) when both states equal u.
double tadmor_entropy_flux(const EntropyPair& entropy, double ul, double ur,
                           double h_num);

/// Evaluate the full low/high/antidiffusive flux family for one field.
InterfaceFluxSet assemble_interface_fluxes(const ProblemSpec& problem,
                                           const CellField& y, LowFluxKind low,
                                           HighFluxKind high);

}  // namespace entroflux
