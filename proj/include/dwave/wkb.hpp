#pragma once

#include <vector>

#include "dwave/geometry.hpp"
#include "dwave/numerics.hpp"

namespace dwave {

/// Spectral parameters of one quasimode branch: mu^2 = 1 + E + iF with h the
/// semiclassical parameter and eps the gluing abscissa (inside the exact
/// quadratic barrier region, damping-free).
struct SpectralSplit {
  double h = 0.0;
  double E = 0.0;
  double F = 0.0;
  double eps = 0.25;
  cplx mu;  // exact sqrt(1 + E + iF), principal branch

  static SpectralSplit make(double h, double E, double F, double eps = 0.25);
  cplx rho() const;  // h/(2i) - E/2 - iF/2
};

/// Eikonal slope sqrt(1 + E - W(z)); positive branch.
double eikonal_slope(const SurfaceProfile& m, double E, double z);

/// A(E) = int_{-eps}^{eps} sqrt(E + z^2) dz, closed form.
double barrier_action(double E, double eps);
/// Same quantity by adaptive quadrature (independent route).
double barrier_action_quadrature(double E, double eps, double tol = 1e-12);

/// B(E) = int_0^{2pi} sqrt(1 + E - W(z)) dz; integrand split at z = 0 where
/// it is |z|-like at E = 0.
double loop_action(const SurfaceProfile& m, double E, double tol = 1e-13);
/// dB/dE by quadrature of the derivative integrand (log-divergent as E -> 0).
double loop_action_derivative(const SurfaceProfile& m, double E,
                              double tol = 1e-12);

/// c0(E) = int_eps^{2pi-eps} (2 phi')^{-1} ds.
double loop_halftime(const SurfaceProfile& m, double E, double eps);
/// c1(a,E) = int_0^{2pi} a (2 phi')^{-1} ds; requires a == 0 on |z| <= eps.
double damping_exposure(const SurfaceProfile& m, const DampingProfile& a,
                        double E, double eps);

/// Transport factor across the barrier window [-eps, eps]:
/// sigma(eps) = exp(-(F/2h) int_{-eps}^{eps} dz / sqrt(E + z^2))
///            = exp(-(F/h) log((eps + sqrt(eps^2+E))/sqrt(E))).
double barrier_amplitude_factor(const SpectralSplit& s);

/// Leading outer transport amplitude gauged to 1 at z = eps, valid on
/// [eps, 2pi - eps].  direction +1 moves right (phase +phi), -1 left.
cplx transport_amplitude(const SurfaceProfile& m, const DampingProfile& a,
                         const SpectralSplit& s, double z, int direction = +1);

/// One WKB branch sampled on a grid: tag selects the eikonal sign and the
/// gauge point where the phase vanishes.
struct WkbBranch {
  enum class Tag { out_plus, out_minus, in_plus, in_minus };
  Tag tag;
  double gauge_z = 0.0;
  std::vector<double> z;
  std::vector<double> phase;      // phi(z), real
  std::vector<cplx> amplitude;    // sigma_0(z)
};
WkbBranch sample_branch(const SurfaceProfile& m, const DampingProfile& a,
                        const SpectralSplit& s, WkbBranch::Tag tag,
                        const std::vector<double>& zgrid);

/// Cumulative outer data from eps along [eps, 2pi - eps]: phase integral,
/// int 1/phi', int a/phi' at the requested points (fixed-order Gauss per
/// segment; points must be increasing, within the outer window).
struct OuterCumulative {
  std::vector<double> z;
  std::vector<double> phase;   // int_eps^z phi'
  std::vector<double> inv;     // int_eps^z 1/phi'
  std::vector<double> damp;    // int_eps^z a/phi'
};
OuterCumulative outer_cumulative(const SurfaceProfile& m,
                                 const DampingProfile& a, double E, double eps,
                                 const std::vector<double>& points);

}  // namespace dwave
