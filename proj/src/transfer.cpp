#include "dwave/transfer.hpp"

#include <cmath>
#include <numbers>

namespace dwave {

cplx transfer_exact(cplx t, double h) {
  const double pi = std::numbers::pi;
  cplx zg = 0.5 - cplx(0.0, 1.0) * t;
  // poles of Gamma at zg = -n
  if (std::abs(zg - std::round(zg.real())) < 1e-10 && zg.real() < 0.5)
    throw std::domain_error("transfer_exact: Gamma pole at 1/2 - it");
  cplx log_phi = log_gamma(zg) - 0.5 * std::log(2.0 * pi) + t * (pi / 2.0) -
                 cplx(0.0, 1.0) * t * std::log(h) + cplx(0.0, pi / 4.0);
  return std::exp(log_phi);
}

StirlingTransfer transfer_stirling(double E, double F, double h) {
  const double pi = std::numbers::pi;
  StirlingTransfer out;
  double half_plus = 0.5 + F / (2.0 * h);
  out.arg = (E / (2.0 * h)) * (1.0 - std::log(E / 2.0)) + pi / 4.0 -
            (h / E) * half_plus * half_plus + (F / E) * half_plus;
  out.re_exp = (F / (2.0 * h)) * std::log(E / 2.0);
  // first Stirling correction 1/(12 z) at z = 1/2 - i(E+iF)/2h; without it
  // the argument error is O(h/E) rather than the O((h/E)^3) of the series
  cplx corr = 1.0 / (12.0 * cplx(0.5 + F / (2.0 * h), -E / (2.0 * h)));
  out.arg += corr.imag();
  return out;
}

TransferEvaluation evaluate_transfer(double E, double F, double h) {
  TransferEvaluation ev;
  ev.E = E;
  ev.F = F;
  ev.h = h;
  ev.phi = transfer_exact(cplx(E, F) / (2.0 * h), h);
  StirlingTransfer st = transfer_stirling(E, F, h);
  ev.stirling_arg = st.arg;
  ev.tau_exp = st.re_exp;
  return ev;
}

MatchingResiduals matching_residuals(const SpectralSplit& s, double gamma_ratio,
                                     double rho_diff) {
  MatchingResiduals out;
  cplx T = transfer_exact(cplx(s.E, s.F) / (2.0 * s.h), s.h);
  double sigma = barrier_amplitude_factor(s);
  out.amp_res = std::abs(std::abs(T) * gamma_ratio - sigma);
  double raw = std::arg(T) + rho_diff - barrier_action(s.E, s.eps) / s.h;
  out.phase_res = std::abs(std::remainder(raw, two_pi));
  return out;
}

cplx monodromy_factor(const SurfaceProfile& m, const DampingProfile& a,
                      const SpectralSplit& s) {
  double A = barrier_action(s.E, s.eps);
  double B = loop_action(m, s.E);
  double c0 = loop_halftime(m, s.E, s.eps);
  double c1 = damping_exposure(m, a, s.E, s.eps);
  cplx k_eps = -c0 * s.F / s.h + s.mu * c1;
  return std::exp(cplx(0.0, (B - A) / s.h) + k_eps);
}

}  // namespace dwave
