#include "dwave/evolution.hpp"

#include <cmath>

#include "dwave/fourier.hpp"
#include "dwave/lapack.hpp"

namespace dwave {

FitResult fit_decay(const DecayRecord& rec, DecayModel model,
                    double mode_im_tau, double floor_rel) {
  if (rec.t.size() < 50)
    throw InsufficientDecayError("fit_decay: fewer than 50 samples");
  if (rec.energy.back() > 0.5 * rec.e0)
    throw InsufficientDecayError("fit_decay: E(T)/E(0) > 0.5");
  // fit below the initial transient and above the scheme noise floor
  double upper = 0.25 * rec.e0;
  if (rec.energy.back() > 0.25 * rec.e0) upper = rec.e0 * 1.01;
  std::vector<double> x, y;
  double floor_abs = floor_rel * rec.e0;
  for (std::size_t i = 0; i < rec.t.size(); ++i) {
    if (rec.energy[i] <= floor_abs) break;
    if (rec.energy[i] > upper) continue;
    x.push_back(model == DecayModel::subexp_sqrt ? std::sqrt(rec.t[i])
                                                 : rec.t[i]);
    y.push_back(std::log(rec.energy[i]));
  }
  if (x.size() < 50) throw InsufficientDecayError("fit_decay: too few samples above floor");
  double lo = std::exp(y.front()), hi = std::exp(y.back());
  if (hi > 1e-2 * lo)
    throw InsufficientDecayError("fit_decay: less than two decades of decay");
  FitResult out;
  if (model == DecayModel::mode) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
      s += y[i] + 2.0 * mode_im_tau * x[i];
    out.intercept = s / x.size();
    out.rate = 2.0 * mode_im_tau;
    double rs = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      double r = y[i] - (out.intercept - out.rate * x[i]);
      rs += r * r;
    }
    out.rms = std::sqrt(rs / x.size());
    return out;
  }
  LinearFit lf = fit_line(x, y);
  out.rate = -lf.slope;           // exp model; subexp: slope = -2c
  if (model == DecayModel::subexp_sqrt) out.rate = -lf.slope / 2.0;
  out.intercept = lf.intercept;
  out.rms = lf.rms_residual;
  out.r2 = lf.r2;
  return out;
}

// ---------------------------------------------------------------------------

ModeBasis::ModeBasis(int k, const SurfaceProfile& m, const DampingProfile& a,
                     int grid_n, double window_halfwidth) : k_(k) {
  n_ = grid_n > 0 ? grid_n : std::max(512, 8 * k);
  if (n_ % 2) ++n_;
  dz_ = two_pi / n_;
  z_.resize(n_);
  auto d2 = spectral_minus_d2_matrix(n_);
  Eigen::MatrixXd l = Eigen::Map<Eigen::MatrixXd>(d2.data(), n_, n_);
  Eigen::VectorXd adiag(n_);
  for (int j = 0; j < n_; ++j) {
    z_[j] = two_pi * j / n_;
    auto ev = m.eval(z_[j]);
    l(j, j) += static_cast<double>(k) * k * ev.W +
               subpotential_from_w(ev.W, ev.dW, ev.d2W);
    adiag(j) = a.a(z_[j]);
  }
  double lo = std::max(0.0, k - window_halfwidth);
  double hi = k + window_halfwidth;
  SymEigRange er = eig_sym_range(l, lo * lo, hi * hi);
  if (er.values.empty())
    throw std::runtime_error("ModeBasis: empty spectral window");
  lambda_ = er.values;
  lambda_vec_ = Eigen::Map<Eigen::VectorXd>(lambda_.data(), lambda_.size());
  vecs_ = std::move(er.vectors);
  damp_.noalias() = vecs_.transpose() * adiag.asDiagonal() * vecs_;
  damp_ = 0.5 * (damp_ + damp_.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(damp_);
  damp_q_ = es.eigenvectors();
  damp_d_ = es.eigenvalues().cwiseMax(0.0);
}

namespace {
Eigen::VectorXcd real_mat_mul(const Eigen::MatrixXd& m,
                              const Eigen::VectorXcd& v) {
  Eigen::VectorXd vr = v.real(), vi = v.imag();
  return (m * vr).cast<cplx>() + cplx(0, 1) * (m * vi).cast<cplx>();
}
Eigen::VectorXcd real_mat_tmul(const Eigen::MatrixXd& m,
                               const Eigen::VectorXcd& v) {
  Eigen::VectorXd vr = v.real(), vi = v.imag();
  return (m.transpose() * vr).cast<cplx>() +
         cplx(0, 1) * (m.transpose() * vi).cast<cplx>();
}
}  // namespace

Eigen::VectorXcd ModeBasis::project(const std::vector<cplx>& psi,
                                    double* tail_mass) const {
  std::vector<cplx> samples =
      static_cast<int>(psi.size()) == n_ ? psi : resample_periodic(psi, n_);
  Eigen::VectorXcd pv = Eigen::Map<const Eigen::VectorXcd>(samples.data(), n_);
  Eigen::VectorXcd c = real_mat_tmul(vecs_, pv) * std::sqrt(dz_);
  if (tail_mass) {
    double total = pv.squaredNorm() * dz_;
    double head = c.squaredNorm();
    *tail_mass = total > 0.0 ? std::max(0.0, total - head) / total : 0.0;
  }
  return c;
}

std::vector<cplx> ModeBasis::synthesize(const Eigen::VectorXcd& c) const {
  Eigen::VectorXcd f = real_mat_mul(vecs_, c) / std::sqrt(dz_);
  return {f.data(), f.data() + f.size()};
}

double ModeBasis::sobolev_norm(const std::vector<cplx>& psi, double s) const {
  PeriodicSpectral fft(static_cast<int>(psi.size()));
  auto uh = fft.forward(psi);
  double k2 = static_cast<double>(k_) * k_;
  double acc = 0.0;
  for (int j = 0; j < fft.size(); ++j) {
    double xi = fft.wavenumber(j);
    acc += std::pow(1.0 + k2 + xi * xi, s) * std::norm(uh[j]);
  }
  // Parseval: ||u||_{L2}^2 = (2 pi / N^2) sum |uhat|^2
  return std::sqrt(acc * two_pi) / fft.size();
}

// ---------------------------------------------------------------------------

namespace {

void rotate(Eigen::VectorXcd& c, Eigen::VectorXcd& cd,
            const Eigen::VectorXd& omega, double dt) {
  for (int i = 0; i < c.size(); ++i) {
    double w = omega(i);
    double cs = std::cos(w * dt), sn = std::sin(w * dt);
    cplx ci = c(i), di = cd(i);
    if (w > 0.0) {
      c(i) = cs * ci + sn / w * di;
      cd(i) = -w * sn * ci + cs * di;
    } else {
      c(i) = ci + dt * di;
    }
  }
}

}  // namespace

ModeRun evolve_mode(const ModeBasis& basis, const std::vector<cplx>& psi0,
                    const std::vector<cplx>& psi1, const ModeRunOptions& opt) {
  ModeRun run;
  Eigen::VectorXcd c = basis.project(psi0, &run.tail_mass);
  double tail1 = 0.0;
  Eigen::VectorXcd cd = basis.project(psi1, &tail1);
  run.tail_mass = std::max(run.tail_mass, tail1);

  const int m = basis.modes();
  Eigen::VectorXd omega = basis.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXd& q = basis.damp_q_;
  const Eigen::VectorXd& d = basis.damp_d_;

  double dt = opt.dt_factor / basis.k();
  int steps = static_cast<int>(std::ceil(opt.t_final / dt));
  int stride = std::max(1, steps / opt.max_samples);

  auto energy = [&]() {
    return cd.squaredNorm() + basis.eigenvalues().dot(
        (c.array().abs2()).matrix());
  };

  run.record.e0 = energy();
  run.record.t.push_back(0.0);
  run.record.energy.push_back(run.record.e0);
  if (opt.snapshot_stride > 0) {
    run.snap_t.push_back(0.0);
    run.snap_c.push_back(c);
    run.snap_cdot.push_back(cd);
  }

  Eigen::VectorXd decay_full = (-d.array() * dt).exp();
  double max_defect = 0.0;
  for (int step = 1; step <= steps; ++step) {
    rotate(c, cd, omega, 0.5 * dt);
    // damping stage: cd <- Q e^{-D dt} Q^T cd, psi frozen
    Eigen::VectorXcd g = real_mat_tmul(q, cd);
    double before = g.squaredNorm();
    double dissipated = 0.0;
    for (int i = 0; i < m; ++i)
      dissipated += std::norm(g(i)) * (1.0 - std::exp(-2.0 * d(i) * dt));
    g.array() *= decay_full.array().cast<cplx>();
    double after = g.squaredNorm();
    max_defect = std::max(max_defect,
                          std::abs((before - after) - dissipated) / dt);
    cd = real_mat_mul(q, g);
    rotate(c, cd, omega, 0.5 * dt);
    if (step % stride == 0 || step == steps) {
      run.record.t.push_back(step * dt);
      run.record.energy.push_back(energy());
    }
    if (opt.snapshot_stride > 0 && step % opt.snapshot_stride == 0) {
      run.snap_t.push_back(step * dt);
      run.snap_c.push_back(c);
      run.snap_cdot.push_back(cd);
    }
  }
  run.record.dissipation_defect = max_defect / run.record.e0;
  return run;
}

// ---------------------------------------------------------------------------

DecayRecord evolve_overdamped(const DampingProfile& a,
                              const std::vector<double>& f,
                              const OverdampedOptions& opt) {
  const int n = opt.n;
  const double dx = two_pi / n;
  PeriodicSpectral fft(n);

  // initial data: u = 0, u_t = f with the mean removed
  std::vector<cplx> ut(n);
  double mean = 0.0;
  std::vector<double> fs(f);
  if (static_cast<int>(f.size()) != n)
    throw std::invalid_argument("evolve_overdamped: data size mismatch");
  for (double v : fs) mean += v;
  mean /= n;
  for (int j = 0; j < n; ++j) ut[j] = fs[j] - mean;
  std::vector<cplx> u(n, 0.0);

  // midpoint damping coefficients a_{j+1/2}
  std::vector<double> amid(n);
  for (int j = 0; j < n; ++j) amid[j] = a.a(dx * (j + 0.5));

  // Crank-Nicolson factor for the viscous stage: (I + dt/2 K) x = (I - dt/2 K) v,
  // K = D^T diag(a_mid) D / dx^2
  const double dt = opt.dt;
  auto build_cn = [&](double scale) {
    std::vector<cplx> diag(n), lower(n - 1), upper(n - 1);
    double c = scale / (dx * dx);
    for (int j = 0; j < n; ++j) {
      double am = amid[(j - 1 + n) % n];
      double ap = amid[j];
      diag[j] = 1.0 + c * (am + ap);
      if (j + 1 < n) upper[j] = -c * ap;
      if (j > 0) lower[j - 1] = -c * amid[j - 1];
    }
    cplx corner = -c * amid[n - 1];
    return TridiagLU(std::move(diag), std::move(lower), std::move(upper),
                     corner, corner);
  };
  TridiagLU cn_plus = build_cn(0.5 * dt);

  auto apply_k = [&](const std::vector<cplx>& v) {
    std::vector<cplx> out(n);
    for (int j = 0; j < n; ++j) {
      cplx dplus = (v[(j + 1) % n] - v[j]) / dx;
      cplx dminus = (v[j] - v[(j - 1 + n) % n]) / dx;
      out[j] = -(amid[j] * dplus - amid[(j - 1 + n) % n] * dminus) / dx;
    }
    return out;
  };

  auto grad_sq = [&](const std::vector<cplx>& v) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += std::norm((v[(j + 1) % n] - v[j]) / dx);
    return s * dx;
  };
  auto l2sq = [&](const std::vector<cplx>& v) {
    double s = 0.0;
    for (auto& x : v) s += std::norm(x);
    return s * dx;
  };
  auto energy = [&]() { return l2sq(ut) + grad_sq(u); };

  DecayRecord rec;
  rec.e0 = energy();
  rec.t.push_back(0.0);
  rec.energy.push_back(rec.e0);

  int steps = static_cast<int>(std::ceil(opt.t_final / dt));
  int stride = std::max(1, steps / opt.max_samples);
  double max_defect = 0.0;

  auto rotate_fourier = [&](double tau) {
    auto uh = fft.forward(u);
    auto vh = fft.forward(ut);
    for (int j = 0; j < n; ++j) {
      double w = std::abs(fft.wavenumber(j));
      cplx ui = uh[j], vi = vh[j];
      if (w > 0) {
        uh[j] = std::cos(w * tau) * ui + std::sin(w * tau) / w * vi;
        vh[j] = -w * std::sin(w * tau) * ui + std::cos(w * tau) * vi;
      } else {
        uh[j] = ui + tau * vi;
      }
    }
    u = fft.inverse(uh);
    ut = fft.inverse(vh);
  };

  for (int step = 1; step <= steps; ++step) {
    rotate_fourier(0.5 * dt);
    // viscous stage: v' = -K v, Crank-Nicolson
    std::vector<cplx> kv = apply_k(ut);
    std::vector<cplx> rhs(n);
    for (int j = 0; j < n; ++j) rhs[j] = ut[j] - 0.5 * dt * kv[j];
    std::vector<cplx> ut_new = cn_plus.solve(rhs);
    // midpoint dissipation identity (exact for CN)
    double before = l2sq(ut), after = l2sq(ut_new);
    double dissipated = 0.0;
    for (int j = 0; j < n; ++j) {
      cplx mid = 0.5 * (ut[j] + ut_new[j]);
      cplx dmid = (0.5 * (ut[(j + 1) % n] + ut_new[(j + 1) % n]) - mid) / dx;
      dissipated += amid[j] * std::norm(dmid);
    }
    dissipated *= 2.0 * dt * dx;
    max_defect = std::max(max_defect, std::abs((before - after) - dissipated) / dt);
    ut = std::move(ut_new);
    rotate_fourier(0.5 * dt);
    if (step % stride == 0 || step == steps) {
      rec.t.push_back(step * dt);
      rec.energy.push_back(energy());
    }
  }
  rec.dissipation_defect = max_defect / rec.e0;
  return rec;
}

Envelope decay_envelope(const std::vector<double>& rates,
                        const std::vector<double>& log_prefactors, double t_lo,
                        double t_hi, int n_pts) {
  Envelope env;
  env.t.resize(n_pts);
  env.value.resize(n_pts);
  std::vector<double> sq(n_pts), lf(n_pts);
  for (int i = 0; i < n_pts; ++i) {
    double t = t_lo * std::pow(t_hi / t_lo, static_cast<double>(i) / (n_pts - 1));
    env.t[i] = t;
    double best = -1e300;
    for (std::size_t j = 0; j < rates.size(); ++j)
      best = std::max(best, log_prefactors[j] - rates[j] * t);
    env.value[i] = best;  // log of the envelope
    sq[i] = std::sqrt(t);
    lf[i] = best;
  }
  LinearFit fit = fit_line(sq, lf);
  env.fitted_c = -fit.slope / 2.0;
  // choose the intercept so the bound C^{-1} e^{-2c sqrt t} lies below f
  double log_cinv = 1e300;
  for (int i = 0; i < n_pts; ++i)
    log_cinv = std::min(log_cinv, lf[i] + 2.0 * env.fitted_c * sq[i]);
  env.fitted_log_cinv = log_cinv;
  double worst = 0.0;
  for (int i = 0; i < n_pts; ++i)
    worst = std::max(worst, (log_cinv - 2.0 * env.fitted_c * sq[i]) - lf[i]);
  env.max_below = worst;
  return env;
}

}  // namespace dwave
