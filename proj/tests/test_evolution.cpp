#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dwave/evolution.hpp"
#include "dwave/quasimode.hpp"

using namespace dwave;

TEST_CASE("fit_decay recovers synthetic exponentials") {
  DecayRecord rec;
  rec.e0 = 1.0;
  for (int i = 0; i <= 2000; ++i) {
    double t = i * 0.02;
    rec.t.push_back(t);
    rec.energy.push_back(std::exp(-t));
  }
  FitResult f = fit_decay(rec, DecayModel::exp);
  CHECK(f.rate == doctest::Approx(1.0).epsilon(1e-6));

  DecayRecord flat;
  flat.e0 = 1.0;
  for (int i = 0; i <= 100; ++i) {
    flat.t.push_back(i * 0.1);
    flat.energy.push_back(1.0);
  }
  CHECK_THROWS_AS(fit_decay(flat, DecayModel::exp), InsufficientDecayError);

  // sqrt model on synthetic e^{-2 c sqrt t}
  DecayRecord sub;
  sub.e0 = 1.0;
  for (int i = 1; i <= 3000; ++i) {
    double t = i * 0.05;
    sub.t.push_back(t);
    sub.energy.push_back(std::exp(-2.0 * 0.7 * std::sqrt(t)));
  }
  FitResult fs = fit_decay(sub, DecayModel::subexp_sqrt);
  CHECK(fs.rate == doctest::Approx(0.7).epsilon(1e-4));
}

TEST_CASE("per-mode evolution: conservation, dissipation, rate") {
  SurfaceProfile m;
  DampingProfile a = DampingProfile::ramp_profile();
  int k = 50;
  Quasimode q = build_quasimode(m, a, k, {});
  cplx tau = q.mu / q.h;
  std::vector<cplx> psi1(q.u.size());
  for (std::size_t j = 0; j < q.u.size(); ++j)
    psi1[j] = cplx(0, 1) * tau * q.u[j];

  // undamped basis conserves the energy
  {
    DampingProfile zero = DampingProfile::constant_profile(0.0);
    ModeBasis basis0(k, m, zero);
    ModeRunOptions ropt;
    ropt.t_final = 50.0;
    ModeRun run = evolve_mode(basis0, q.u, psi1, ropt);
    double drift = 0.0;
    for (double e : run.record.energy)
      drift = std::max(drift, std::abs(e - run.record.e0));
    CHECK(drift <= 1e-8 * run.record.e0);
  }

  // damped run decays at 2 Im tau and satisfies the per-step energy balance
  ModeBasis basis(k, m, a);
  ModeRunOptions ropt;
  ropt.t_final = 14.0;
  ModeRun run = evolve_mode(basis, q.u, psi1, ropt);
  CHECK(run.tail_mass <= 1e-8);
  CHECK(run.record.dissipation_defect <= 1e-8);
  for (std::size_t i = 1; i < run.record.energy.size(); ++i)
    CHECK(run.record.energy[i] <= run.record.energy[i - 1] * (1.0 + 1e-10));
  FitResult fit = fit_decay(run.record, DecayModel::exp);
  CHECK(fit.rate == doctest::Approx(2.0 * tau.imag()).epsilon(0.2));
  // E(0) equals the energy functional of the data
  double e0_direct = 0.0;
  {
    Eigen::VectorXcd c = basis.project(q.u);
    Eigen::VectorXcd cd = basis.project(psi1);
    e0_direct = cd.squaredNorm() + basis.eigenvalues().dot(
        c.array().abs2().matrix());
  }
  CHECK(run.record.e0 == doctest::Approx(e0_direct).epsilon(1e-12));
}

TEST_CASE("sobolev norms") {
  SurfaceProfile m;
  DampingProfile a = DampingProfile::ramp_profile();
  ModeBasis b100(100, m, a);
  ModeBasis b200(200, m, a);
  // fixed z-profile
  int n = b100.grid_size();
  std::vector<cplx> prof(n);
  for (int j = 0; j < n; ++j) {
    double z = two_pi * j / n;
    prof[j] = std::exp(cplx(0, 3.0 * z)) * (2.0 + std::cos(z));
  }
  // s = 0 is the plain L2 norm
  double l2 = 0.0;
  for (auto& v : prof) l2 += std::norm(v);
  l2 = std::sqrt(l2 * two_pi / n);
  CHECK(b100.sobolev_norm(prof, 0.0) == doctest::Approx(l2).epsilon(1e-10));
  // doubling k doubles the s = 1 norm of a fixed profile
  std::vector<cplx> prof2(b200.grid_size());
  for (int j = 0; j < b200.grid_size(); ++j) {
    double z = two_pi * j / b200.grid_size();
    prof2[j] = std::exp(cplx(0, 3.0 * z)) * (2.0 + std::cos(z));
  }
  double r = b200.sobolev_norm(prof2, 1.0) / b100.sobolev_norm(prof, 1.0);
  CHECK(r == doctest::Approx(2.0).epsilon(0.01));

  // quasimode pair norm scales like |tau|^{2 + 2 delta}
  double delta = 0.1;
  double prev = 0.0;
  for (int k : {50, 100, 200}) {
    Quasimode q = build_quasimode(m, a, k, {});
    cplx tau = q.mu / q.h;
    std::vector<cplx> psi1(q.u.size());
    for (std::size_t j = 0; j < q.u.size(); ++j) psi1[j] = cplx(0, 1) * tau * q.u[j];
    ModeBasis bb(k, m, a);
    double n0 = bb.sobolev_norm(q.u, 1.0 + delta);
    double n1 = bb.sobolev_norm(psi1, delta);
    double pair2 = n0 * n0 + n1 * n1;
    double scaled = pair2 / std::pow(std::abs(tau), 2.0 + 2.0 * delta);
    if (prev > 0.0) {
      CHECK(scaled / prev <= 2.0);
      CHECK(scaled / prev >= 0.5);
    }
    prev = scaled;
  }
}

TEST_CASE("overdamped circle: conservation, dissipation, grid stability") {
  DampingProfile zero = DampingProfile::constant_profile(0.0);
  OverdampedOptions opt;
  opt.t_final = 50.0;
  std::vector<double> f(opt.n);
  for (int j = 0; j < opt.n; ++j) {
    double x = two_pi * j / opt.n;
    f[j] = std::cos(x) + 0.3 * std::sin(2.0 * x);
  }
  DecayRecord rc = evolve_overdamped(zero, f, opt);
  double drift = 0.0;
  for (double e : rc.energy) drift = std::max(drift, std::abs(e - rc.e0));
  CHECK(drift <= 1e-8 * rc.e0);

  DampingProfile a = DampingProfile::ramp_profile();
  opt.t_final = 80.0;
  DecayRecord r1 = evolve_overdamped(a, f, opt);
  CHECK(r1.dissipation_defect <= 1e-8);
  for (std::size_t i = 1; i < r1.energy.size(); ++i)
    CHECK(r1.energy[i] <= r1.energy[i - 1] * (1.0 + 1e-10));
  FitResult f1 = fit_decay(r1, DecayModel::exp);
  CHECK(f1.rate > 0.0);

  OverdampedOptions opt2 = opt;
  opt2.n = 512;
  std::vector<double> f2(opt2.n);
  for (int j = 0; j < opt2.n; ++j) {
    double x = two_pi * j / opt2.n;
    f2[j] = std::cos(x) + 0.3 * std::sin(2.0 * x);
  }
  FitResult fr2 = fit_decay(evolve_overdamped(a, f2, opt2), DecayModel::exp);
  CHECK(std::abs(fr2.rate - f1.rate) / f1.rate <= 0.05);
}

TEST_CASE("decay envelope construction") {
  // two synthetic exponentials: the envelope is their max and the fitted
  // bound stays below it
  std::vector<double> rates{0.5, 0.05};
  std::vector<double> pref{0.0, -3.0};
  Envelope env = decay_envelope(rates, pref, 10.0, 1e4, 80);
  for (std::size_t i = 0; i < env.t.size(); ++i) {
    double want = std::max(-0.5 * env.t[i], -3.0 - 0.05 * env.t[i]);
    CHECK(env.value[i] == doctest::Approx(want).epsilon(1e-12));
    CHECK(env.fitted_log_cinv - 2.0 * env.fitted_c * std::sqrt(env.t[i]) <=
          env.value[i] + 1e-9);
  }
  CHECK(env.fitted_c > 0.0);
  CHECK(std::isfinite(env.fitted_c));
}

TEST_CASE("duhamel comparison stays controlled by the residual") {
  SurfaceProfile m;
  DampingProfile a = DampingProfile::ramp_profile();
  int k = 50;
  Quasimode q = build_quasimode(m, a, k, {});
  cplx tau = q.mu / q.h;
  double resid = quasimode_residual(q, m, a) / (q.h * q.h);  // unscaled ||R||
  ModeBasis basis(k, m, a);
  std::vector<cplx> psi1(q.u.size());
  for (std::size_t j = 0; j < q.u.size(); ++j) psi1[j] = cplx(0, 1) * tau * q.u[j];
  ModeRunOptions ropt;
  double t_duh = std::pow(std::log(std::abs(tau)), 2.0);
  ropt.t_final = t_duh;
  ropt.snapshot_stride = 25;
  ModeRun run = evolve_mode(basis, q.u, psi1, ropt);
  Eigen::VectorXcd c0 = run.snap_c.front();
  double worst = 0.0;
  for (std::size_t si = 0; si < run.snap_t.size(); ++si) {
    cplx phase = std::exp(cplx(0, 1) * tau * run.snap_t[si]);
    double h1 = 0.0, l2 = 0.0;
    for (int i = 0; i < basis.modes(); ++i) {
      cplx dc = run.snap_c[si](i) - phase * c0(i);
      cplx dd = run.snap_cdot[si](i) - cplx(0, 1) * tau * phase * c0(i);
      h1 += (1.0 + basis.eigenvalues()(i)) * std::norm(dc);
      l2 += std::norm(dd);
    }
    worst = std::max(worst, std::sqrt(h1) + std::sqrt(l2));
  }
  CHECK(worst <= 20.0 * std::log(std::abs(tau)) * resid);
}
