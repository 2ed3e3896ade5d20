#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dwave/lapack.hpp"
#include "dwave/quasimode.hpp"
#include "dwave/spectral_oracle.hpp"

using namespace dwave;

TEST_CASE("mode operator structure") {
  SurfaceProfile m;
  DampingProfile a = DampingProfile::ramp_profile();
  ModeOperator op = assemble_mode(8, m, a, 64);
  // conjugated operator is symmetric; original operator self-adjoint in R dz
  CHECK((op.l_sym - op.l_sym.transpose()).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(weighted_symmetry_defect(op) <= 1e-10);
  // nonnegative up to the subpotential: lowest eigenvalue >= -1e-8 k^2
  auto evs = eig_sym_values(op.l_sym);
  CHECK(evs.front() >= -1e-8 * 64.0);
  // centrifugal term floor: min_j k^2 W(z_j) = k^2 min W
  double mn = 1e300;
  for (int j = 0; j < op.n; ++j) mn = std::min(mn, m.W(op.z[j]));
  CHECK(mn == doctest::Approx(1.0 / 9.0).epsilon(1e-6));
  CHECK_THROWS(assemble_mode(8, m, a, 63));  // odd grid
}

TEST_CASE("undamped pencil: real, symmetric spectrum matching sqrt(lambda)") {
  SurfaceProfile m;
  DampingProfile zero = DampingProfile::constant_profile(0.0);
  ModeOperator op = assemble_mode(8, m, zero, 64);
  ComplexBox box{-20.0, 20.0, -5.0, 5.0};
  auto spec = qep_spectrum(op, box, 1e-8);
  REQUIRE(!spec.empty());
  auto evs = eig_sym_values(op.l_sym);
  for (const auto& p : spec) {
    CHECK(std::abs(p.tau.imag()) <= 1e-8 * 8.0);
    // tau -> -conj(tau) symmetry: the mirrored value is present
    bool found = false;
    for (const auto& q : spec)
      if (std::abs(q.tau + std::conj(p.tau)) <= 1e-7) found = true;
    CHECK(found);
    if (p.tau.real() > 0.5) {
      double best = 1e300;
      for (double lam : evs)
        if (lam > 0) best = std::min(best, std::abs(std::sqrt(lam) - p.tau.real()));
      CHECK(best <= 1e-8 * 8.0);
    }
  }
}

TEST_CASE("parity-split solver equals the plain companion") {
  SurfaceProfile m;
  DampingProfile a = DampingProfile::ramp_profile();
  int n = 64, k = 8;
  ModeOperator op = assemble_mode(k, m, a, n);
  ComplexBox box{2.0, 12.0, -0.1, 1.1};
  auto spec = qep_spectrum(op, box, 1e-8);
  REQUIRE(!spec.empty());

  // independent route: unsplit real companion in s = i tau
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int j = 0; j < n; ++j) comp(j, j) = -op.a_diag(j);
  comp.topRightCorner(n, n) = -op.l_sym;
  comp.bottomLeftCorner(n, n).setIdentity();
  RealEig eig = eig_dense(comp, false);
  std::vector<cplx> taus;
  for (auto s : eig.values) {
    cplx tau = cplx(0, -1) * s;
    if (box.contains(tau)) taus.push_back(tau);
  }
  CHECK(taus.size() == spec.size());
  for (const auto& p : spec) {
    double best = 1e300;
    for (auto t : taus) best = std::min(best, std::abs(t - p.tau));
    CHECK(best <= 1e-7);
  }
}

TEST_CASE("imaginary part identity and band") {
  SurfaceProfile m;
  DampingProfile a = DampingProfile::ramp_profile();
  ModeOperator op = assemble_mode(8, m, a, 64);
  auto spec = qep_spectrum(op, ComplexBox{2.0, 12.0, -0.1, 1.1}, 1e-8);
  REQUIRE(!spec.empty());
  for (const auto& p : spec) {
    // pair the pencil with the eigenvector: Im tau = int a |psi|^2 / (2 ||psi||^2)
    double num = 0.0, den = 0.0;
    for (int j = 0; j < op.n; ++j) {
      num += op.a_diag(j) * std::norm(p.psi(j));
      den += std::norm(p.psi(j));
    }
    CHECK(p.tau.imag() == doctest::Approx(num / (2.0 * den)).epsilon(1e-6));
    CHECK(p.tau.imag() >= -1e-6);
    CHECK(p.tau.imag() <= a.sup() / 2.0 + 1e-6);
  }
}

TEST_CASE("grid doubling drift at a modest mode") {
  SurfaceProfile m;
  DampingProfile a = DampingProfile::ramp_profile();
  int k = 20;
  ModeOperator op1 = assemble_mode(k, m, a, 800);
  ModeOperator op2 = assemble_mode(k, m, a, 1600);
  auto s1 = qep_spectrum(op1, default_window(k), 1e-8);
  auto s2 = qep_spectrum(op2, default_window(k), 1e-8);
  REQUIRE(!s1.empty());
  for (const auto& p : s1) {
    double best = 1e300;
    for (const auto& q : s2) best = std::min(best, std::abs(p.tau - q.tau));
    CHECK(best <= 1e-6 * k);
  }
}

TEST_CASE("constructed quasimode sits on the oracle spectrum") {
  SurfaceProfile m;
  DampingProfile a = DampingProfile::ramp_profile();
  int k = 50;
  Quasimode q = build_quasimode(m, a, k, {});
  ModeOperator op = assemble_mode(k, m, a, 2000);
  auto spec = qep_spectrum(op, default_window(k), 1e-8);
  REQUIRE(!spec.empty());
  QuasiEigenvalue pred;
  pred.k = k;
  pred.h = q.h;
  pred.E = q.E;
  pred.F = q.F;
  pred.mu = q.mu;
  pred.tau = q.mu / q.h;
  MatchResult mr = match_quasimode(pred, spec);
  CHECK(q.h * mr.distance <= 5e-3);
  CHECK(spec[mr.index].parity == 1);
  double im_dev = std::abs(spec[mr.index].tau.imag() - pred.tau.imag()) /
                  pred.tau.imag();
  CHECK(im_dev <= 0.1);

  // exact-match and empty-window behavior
  QuasiEigenvalue exact = pred;
  exact.tau = spec[mr.index].tau;
  CHECK(match_quasimode(exact, spec).distance == 0.0);
  CHECK_THROWS(match_quasimode(pred, {}));
}
