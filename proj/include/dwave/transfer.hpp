#pragma once

#include "dwave/geometry.hpp"
#include "dwave/numerics.hpp"
#include "dwave/wkb.hpp"

namespace dwave {

/// Connection scalar across the exact quadratic barrier top,
///   Phi(t) = (2 pi)^{-1/2} Gamma(1/2 - it) e^{t pi/2} e^{-i t ln h} e^{i pi/4},
/// evaluated at t = (E + iF)/(2h).
cplx transfer_exact(cplx t, double h);

/// Stirling asymptotics of Phi at t = (E+iF)/2h: argument modulo 2pi and the
/// real exponent log|Phi| (valid for E/h bounded below, F = O(h)).
struct StirlingTransfer {
  double arg = 0.0;
  double re_exp = 0.0;
};
StirlingTransfer transfer_stirling(double E, double F, double h);

struct TransferEvaluation {
  cplx phi;
  double stirling_arg = 0.0;
  double tau_exp = 0.0;  // Stirling real exponent
  double E = 0.0, F = 0.0, h = 0.0;
};
TransferEvaluation evaluate_transfer(double E, double F, double h);

/// Residuals of the barrier matching relations given a measured amplitude
/// ratio gamma_out/gamma_in and phase offset rho_out - rho_in:
///   amp_res   = | |T| * gamma_ratio - sigma(eps) |
///   phase_res = | Arg T + rho_diff - A(E)/h |  reduced mod 2pi.
struct MatchingResiduals {
  double amp_res = 0.0;
  double phase_res = 0.0;
};
MatchingResiduals matching_residuals(const SpectralSplit& s, double gamma_ratio,
                                     double rho_diff);

/// Loop monodromy factor e^{i(B-A)/h} e^{-c0 F/h + mu c1} accumulated by the
/// rightward branch from eps to 2pi - eps.
cplx monodromy_factor(const SurfaceProfile& m, const DampingProfile& a,
                      const SpectralSplit& s);

}  // namespace dwave
