#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dwave/geometry.hpp"
#include "dwave/transfer.hpp"
#include "dwave/wkb.hpp"

using namespace dwave;
namespace {
const double kPi = std::numbers::pi;
}

TEST_CASE("transfer scalar modulus law on the real axis") {
  // |Phi(t)|^2 = e^{pi t} / (2 cosh(pi t)) = (1 + tanh(pi t)) / 2
  for (double t = -10.0; t <= 20.0; t += 0.73) {
    cplx phi = transfer_exact(cplx(t, 0.0), 0.05);
    double law = 0.5 * (1.0 + std::tanh(kPi * t));
    CHECK(std::abs(std::norm(phi) - law) <= 1e-12);
  }
  CHECK(std::abs(transfer_exact(cplx(0.0, 0.0), 0.1)) ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-13));
  CHECK(std::abs(transfer_exact(cplx(20.0, 0.0), 0.1)) ==
        doctest::Approx(1.0).epsilon(1e-10));
  // the pure phase factor e^{-i t ln h} does not change the modulus
  double m1 = std::abs(transfer_exact(cplx(2.0, 0.0), 0.1));
  double m2 = std::abs(transfer_exact(cplx(2.0, 0.0), 0.003));
  CHECK(m1 == doctest::Approx(m2).epsilon(1e-13));
}

TEST_CASE("transfer pole") {
  // 1/2 - it hits -1 at t = -1.5i
  CHECK_THROWS(transfer_exact(cplx(0.0, -1.5), 0.1));
}

TEST_CASE("stirling asymptotics of the transfer scalar") {
  // fixed E, F proportional to h: argument converges with order >= 2.5
  double E = 0.3;
  std::vector<double> lh, larg;
  for (double h : {0.02, 0.01, 0.005}) {
    double F = 0.2 * h;
    cplx phi = transfer_exact(cplx(E, F) / (2.0 * h), h);
    StirlingTransfer st = transfer_stirling(E, F, h);
    double darg = std::abs(std::remainder(std::arg(phi) - st.arg, two_pi));
    double dre = std::abs(std::log(std::abs(phi)) - st.re_exp);
    lh.push_back(std::log(h));
    larg.push_back(std::log(darg));
    CHECK(dre <= 10.0 * h * h / (E * E));
  }
  LinearFit lf = fit_line(lh, larg);
  CHECK(lf.slope >= 2.5);

  // F = 0 -> re_exp = 0
  CHECK(transfer_stirling(0.3, 0.0, 0.01).re_exp == 0.0);

  // halving h at F ~ h shrinks the arg error by ~8x
  auto darg_at = [&](double h) {
    cplx phi = transfer_exact(cplx(E, 0.2 * h) / (2.0 * h), h);
    return std::abs(std::remainder(
        std::arg(phi) - transfer_stirling(E, 0.2 * h, h).arg, two_pi));
  };
  double r = darg_at(0.02) / darg_at(0.01);
  CHECK(r >= 5.0);
  CHECK(r <= 12.0);
}

TEST_CASE("matching residuals definitional zero") {
  SpectralSplit s = SpectralSplit::make(0.01, 0.06, 0.002, 0.25);
  cplx T = transfer_exact(cplx(s.E, s.F) / (2.0 * s.h), s.h);
  double sigma = barrier_amplitude_factor(s);
  double gamma_ratio = sigma / std::abs(T);
  double rho_diff = barrier_action(s.E, s.eps) / s.h - std::arg(T);
  MatchingResiduals mr = matching_residuals(s, gamma_ratio, rho_diff);
  CHECK(mr.amp_res <= 1e-13);
  CHECK(mr.phase_res <= 1e-10);

  // undamped symmetric case: amp residual with unit gamma ratio is |1 - |T||
  SpectralSplit s0 = SpectralSplit::make(0.01, 0.06, 0.0, 0.25);
  cplx T0 = transfer_exact(cplx(s0.E, 0.0) / (2.0 * s0.h), s0.h);
  MatchingResiduals mr0 = matching_residuals(s0, 1.0, 0.0);
  CHECK(mr0.amp_res == doctest::Approx(std::abs(1.0 - std::abs(T0))).epsilon(1e-12));
}

TEST_CASE("monodromy factor structure") {
  SurfaceProfile m;
  DampingProfile zero = DampingProfile::constant_profile(0.0);
  SpectralSplit s0 = SpectralSplit::make(0.01, 0.05, 0.0, 0.25);
  cplx mono = monodromy_factor(m, zero, s0);
  CHECK(std::abs(std::abs(mono) - 1.0) <= 1e-12);  // pure phase when a=0, F=0

  DampingProfile a = DampingProfile::ramp_profile();
  SpectralSplit s = SpectralSplit::make(0.01, 0.05, 0.002, 0.25);
  cplx md = monodromy_factor(m, a, s);
  double c0 = loop_halftime(m, s.E, s.eps);
  double c1 = damping_exposure(m, a, s.E, s.eps);
  double want_log = -c0 * s.F / s.h + (s.mu * c1).real();
  CHECK(std::log(std::abs(md)) == doctest::Approx(want_log).epsilon(1e-12));
}
