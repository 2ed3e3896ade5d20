#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dwave/fourier.hpp"
#include "dwave/geometry.hpp"

using namespace dwave;
namespace {
const double kPi = std::numbers::pi;
}

TEST_CASE("effective potential near the barrier top and at the far side") {
  SurfaceProfile m;
  CHECK(m.W(0.0) == 1.0);
  CHECK(m.eval(0.0).dW == 0.0);
  double zg = m.glue_halfwidth();
  // exactly quadratic inside the glue region
  for (double z : {0.0, zg / 4, zg / 2, 0.99 * zg, -zg / 3}) {
    CHECK(m.W(z) == 1.0 - z * z);
    CHECK(m.eval(z).dW == -2.0 * z);
  }
  // background family value at the far critical point
  CHECK(m.W(kPi) == doctest::Approx(1.0 / 9.0).epsilon(1e-14));
  double d = 1e-5;
  double fd = (m.W(kPi + d) - m.W(kPi - d)) / (2 * d);
  CHECK(std::abs(fd) <= 1e-8);
}

TEST_CASE("evenness, periodicity, and the two critical points") {
  SurfaceProfile m;
  auto zs = random_uniform(42, 64, -10.0, 10.0);
  for (double z : zs) {
    CHECK(m.W(z) == doctest::Approx(m.W(-z)).epsilon(1e-15));
    CHECK(m.W(z) == doctest::Approx(m.W(z + two_pi)).epsilon(1e-14));
    CHECK(m.R(z) == doctest::Approx(m.R(-z)).epsilon(1e-15));
  }
  // W' has no zero in (delta, pi - delta): max at 0, min at pi only
  for (int i = 1; i < 200; ++i) {
    double z = 0.005 + (kPi - 0.01) * i / 200.0;
    CHECK(m.eval(z).dW < 0.0);
  }
  CHECK(m.W(0.0) > m.W(0.3));
  CHECK(m.W(kPi) < m.W(3.0));
}

TEST_CASE("finite differences agree with the analytic derivatives") {
  SurfaceProfile m;
  const double d = 1e-4;
  for (double z = 0.02; z < two_pi; z += 0.119) {
    auto e = m.eval(z);
    // 4th-order centered stencils at step 1e-4
    double fdR = (-m.R(z + 2 * d) + 8 * m.R(z + d) - 8 * m.R(z - d) +
                  m.R(z - 2 * d)) / (12 * d);
    double fdR2 = (-m.R(z + 2 * d) + 16 * m.R(z + d) - 30 * m.R(z) +
                   16 * m.R(z - d) - m.R(z - 2 * d)) / (12 * d * d);
    double fdW = (-m.W(z + 2 * d) + 8 * m.W(z + d) - 8 * m.W(z - d) +
                  m.W(z - 2 * d)) / (12 * d);
    CHECK(std::abs(fdR - e.dR) <= 1e-6 * (1.0 + std::abs(e.dR)));
    CHECK(std::abs(fdR2 - e.d2R) <= 1e-6 * (1.0 + std::abs(e.d2R)));
    CHECK(std::abs(fdW - e.dW) <= 1e-6 * (1.0 + std::abs(e.dW)));
  }
}

TEST_CASE("subpotential closed form") {
  // constant warp: derivatives vanish
  CHECK(subpotential_from_w(0.7, 0.0, 0.0) == 0.0);
  // exact quadratic region at z = 0: W = 1, W' = 0, W'' = -2 -> V1 = 1/2
  CHECK(subpotential_from_w(1.0, 0.0, -2.0) == doctest::Approx(0.5));
}

TEST_CASE("subpotential matches the conjugation oracle on random functions") {
  // oracle: apply -R^{-1} d/dz (R d/dz) to u = R^{-1/2} v spectrally and
  // compare with -v'' + V1 v
  SurfaceProfile m;
  const int n = 1 << 12;
  PeriodicSpectral fft(n);
  auto z = fft.nodes();
  std::vector<double> rv(n), v1v(n);
  for (int i = 0; i < n; ++i) {
    rv[i] = m.R(z[i]);
    v1v[i] = m.subpotential(z[i]);
  }
  auto coef = random_uniform(11, 40, -1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<cplx> v(n);
    for (int i = 0; i < n; ++i) {
      double x = z[i];
      v[i] = coef[(2 * trial) % 40] * std::cos((trial % 5 + 1) * x) +
             coef[(2 * trial + 1) % 40] * std::sin((trial % 7 + 1) * x + 0.3) +
             0.2 * std::cos((trial % 3 + 2) * x + 0.1 * trial);
    }
    std::vector<cplx> u(n);
    for (int i = 0; i < n; ++i) u[i] = v[i] / std::sqrt(rv[i]);
    auto du = fft.derivative(u, 1);
    std::vector<cplx> rdu(n);
    for (int i = 0; i < n; ++i) rdu[i] = rv[i] * du[i];
    auto drdu = fft.derivative(rdu, 1);
    std::vector<cplx> lhs(n);  // R^{1/2} * ( -R^{-1} (R u')' )
    for (int i = 0; i < n; ++i) lhs[i] = -drdu[i] / std::sqrt(rv[i]);
    auto d2v = fft.derivative(v, 2);
    double num = 0.0, den = 0.0;
    for (int i = 0; i < n; ++i) {
      cplx rhs = -d2v[i] + v1v[i] * v[i];
      num += std::norm(lhs[i] - rhs);
      den += std::norm(rhs);
    }
    CHECK(std::sqrt(num / den) <= 1e-6);
  }
}

TEST_CASE("damping profile support and saturation") {
  DampingProfile a = DampingProfile::ramp_profile();
  for (double z = -0.5; z <= 0.5; z += 0.01) CHECK(a.a(z) == 0.0);
  for (double z = 0.9; z <= kPi; z += 0.05) CHECK(a.a(z) == 1.0);
  auto zs = random_uniform(5, 32, 0.0, kPi);
  for (double z : zs) {
    CHECK(a.a(z) == doctest::Approx(a.a(-z)).epsilon(1e-15));
    CHECK(a.a(z) == doctest::Approx(a.a(z + two_pi)).epsilon(1e-14));
    CHECK(a.a(z) >= 0.0);
    CHECK(a.a(z) <= 1.0);
  }
  // analytic derivatives vs finite differences
  for (double z : {0.55, 0.62, 0.71, 0.84, 0.88}) {
    double d = 1e-6;
    double fd1 = (a.a(z + d) - a.a(z - d)) / (2 * d);
    double fd2 = (a.a(z + d) - 2 * a.a(z) + a.a(z - d)) / (d * d);
    CHECK(a.da(z) == doctest::Approx(fd1).epsilon(1e-5));
    CHECK(a.d2a(z) == doctest::Approx(fd2).epsilon(1e-3));
  }
}

TEST_CASE("damping regularity bounds") {
  std::vector<double> grid;
  for (double x = -3.1; x <= 3.1; x += 1e-3) grid.push_back(x);

  // default profile: order 8, finite constants
  DampingProfile a = DampingProfile::ramp_profile();
  auto reg = check_damping_regularity(a, grid);
  CHECK(reg.pass);
  CHECK(reg.c0 == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(reg.c1 > 0.0);
  CHECK(reg.c1 < 100.0);
  CHECK(reg.c2 < 1e4);

  // constant damping: derivatives vanish
  DampingProfile one = DampingProfile::constant_profile(1.0);
  auto regc = check_damping_regularity(one, grid);
  CHECK(regc.pass);
  CHECK(regc.c0 == doctest::Approx(1.0));
  CHECK(regc.c1 <= 1e-10);
  CHECK(regc.c2 <= 1e-10);

  // smoothed x_+^6 ramp passes
  DampingProfile p6 = DampingProfile::ramp_profile(0.3, 0.5, 6);
  CHECK(check_damping_regularity(p6, grid).pass);

  // order-2 power violates the k > 2 hypothesis: the first-derivative
  // ratio grows without bound as the grid approaches the support boundary
  DampingProfile p2 = DampingProfile::power_profile(0.0, 1.0, 2);
  std::vector<double> coarse, fine;
  for (double x = 1e-3; x <= 0.5; x *= 1.35) coarse.push_back(x);
  for (double x = 1e-6; x <= 0.5; x *= 1.35) fine.push_back(x);
  auto reg_coarse = check_damping_regularity(p2, coarse);
  auto reg_fine = check_damping_regularity(p2, fine);
  CHECK_FALSE(reg_fine.pass);
  CHECK(reg_fine.k_used == doctest::Approx(3.0));
  CHECK(reg_fine.c1 >= 3.0 * reg_coarse.c1);
}

TEST_CASE("control status") {
  SurfaceProfile m;
  CHECK(control_status(DampingProfile::ramp_profile(), m) ==
        ControlStatus::imperfect_at_z0);
  CHECK(control_status(DampingProfile::constant_profile(1.0), m) ==
        ControlStatus::perfect);
  // 1d circle/interval model: a single bump controls everything
  DampingProfile bump = DampingProfile::ramp_profile(
      0.5, 0.4, 8, DampingProfile::Domain::interval_x);
  CHECK(control_status(bump, m) == ControlStatus::perfect);
}

TEST_CASE("config round trip and sampling") {
  SurfaceProfile m(0.27, 0.31);
  auto kv = m.to_config();
  SurfaceProfile m2 = SurfaceProfile::from_config(kv);
  CHECK(m2.glue_halfwidth() == doctest::Approx(0.27));
  CHECK(m2.blend_width() == doctest::Approx(0.31));
  CHECK_THROWS(SurfaceProfile::from_config({{"family", "torus_of_doom"}}));

  DampingProfile a = DampingProfile::ramp_profile(0.45, 0.35, 6);
  DampingProfile a2 = DampingProfile::from_config(a.to_config());
  CHECK(a2.flat_halfwidth() == doctest::Approx(0.45));
  CHECK(a2.vanishing_order() == 6);

  auto rows = sample_profiles(m, a, 64);
  CHECK(rows.size() == 64);
  CHECK(rows[0][1] == doctest::Approx(1.0));  // R(0) = W(0)^{-1/2}
  CHECK(rows[0][3] == 0.0);
}
