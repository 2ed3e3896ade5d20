#include "dwave/resolvent.hpp"

#include <cmath>
#include <random>

namespace dwave {

double barrier_potential(double x, double top_halfwidth, double cut) {
  SmoothStep step;
  double s = std::abs(x);
  if (s >= cut) return 0.0;
  double beta = 1.0 - step.value((s - top_halfwidth) / (cut - top_halfwidth));
  return (1.0 - x * x) * beta;
}

SemiclassicalOp::SemiclassicalOp(ResolventVariant variant, cplx z, double h,
                                 const DampingProfile& a,
                                 const SurfaceProfile& m,
                                 int points_per_wavelength)
    : variant_(variant), z_(z), h_(h) {
  if (h <= 0.0) throw std::invalid_argument("SemiclassicalOp: h <= 0");
  n_ = static_cast<int>(std::ceil(points_per_wavelength / h));
  if (n_ % 2) ++n_;
  dx_ = two_pi / n_;
  x_.resize(n_);
  a_mid_.resize(n_);
  v_eff_.resize(n_);
  diag_.resize(n_);
  lower_.resize(n_ - 1);
  upper_.resize(n_ - 1);

  cplx rootz = std::sqrt(z);
  bool viscous = variant != ResolventVariant::multiplicative_barrier;
  bool barrier = variant != ResolventVariant::viscous_flat;

  for (int j = 0; j < n_; ++j) {
    x_[j] = dx_ * j;
    a_mid_[j] = a.a(dx_ * (j + 0.5));
    v_eff_[j] = barrier ? m.W(x_[j]) : 0.0;
  }
  double w = h_ * h_ / (dx_ * dx_);
  for (int j = 0; j < n_; ++j) {
    cplx cm = 1.0, cp = 1.0;
    if (viscous) {
      cm += cplx(0, 1) * rootz * a_mid_[(j - 1 + n_) % n_] / h_;
      cp += cplx(0, 1) * rootz * a_mid_[j] / h_;
    }
    diag_[j] = w * (cm + cp) + v_eff_[j] - z;
    if (!viscous) diag_[j] += cplx(0, 1) * rootz * h_ * a.a(x_[j]);
    if (j + 1 < n_) upper_[j] = -w * cp;
    if (j > 0) lower_[j - 1] = -w * cm;
  }
  cplx cwrap = 1.0;
  if (viscous) cwrap += cplx(0, 1) * rootz * a_mid_[n_ - 1] / h_;
  corner_ = -w * cwrap;
  lu_ = std::make_unique<TridiagLU>(diag_, lower_, upper_, corner_, corner_);
}

std::vector<cplx> SemiclassicalOp::apply(const std::vector<cplx>& u) const {
  std::vector<cplx> out(n_);
  for (int j = 0; j < n_; ++j) {
    cplx acc = diag_[j] * u[j];
    if (j > 0) acc += lower_[j - 1] * u[j - 1];
    if (j + 1 < n_) acc += upper_[j] * u[j + 1];
    if (j == 0) acc += corner_ * u[n_ - 1];
    if (j == n_ - 1) acc += corner_ * u[0];
    out[j] = acc;
  }
  return out;
}

double SemiclassicalOp::smallest_singular_value(double rel_tol, int max_iter,
                                                std::uint64_t seed) const {
  for (int attempt = 0; attempt < 3; ++attempt) {
    std::mt19937_64 rng(seed + 1000 * attempt);
    std::normal_distribution<double> gauss;
    std::vector<cplx> x(n_);
    double nrm = 0.0;
    for (auto& v : x) {
      v = cplx(gauss(rng), gauss(rng));
      nrm += std::norm(v);
    }
    nrm = std::sqrt(nrm);
    for (auto& v : x) v /= nrm;
    double lam_old = 0.0;
    for (int it = 0; it < max_iter; ++it) {
      std::vector<cplx> y = lu_->solve(x);
      std::vector<cplx> w = lu_->solve_adjoint(y);
      double lam = 0.0, wn = 0.0;
      for (int j = 0; j < n_; ++j) {
        lam += (w[j] * std::conj(x[j])).real();
        wn += std::norm(w[j]);
      }
      wn = std::sqrt(wn);
      for (int j = 0; j < n_; ++j) x[j] = w[j] / wn;
      if (it > 2 && std::abs(lam - lam_old) <= rel_tol * std::abs(lam))
        return 1.0 / std::sqrt(lam);
      lam_old = lam;
    }
  }
  throw std::runtime_error("smallest_singular_value: iteration did not settle");
}

AprioriResiduals apriori_check(const SemiclassicalOp& op,
                               const std::vector<cplx>& u,
                               const std::vector<cplx>& g) {
  if (op.variant() == ResolventVariant::multiplicative_barrier)
    throw std::invalid_argument("apriori_check: viscous variants only");
  const int n = op.size();
  const double dx = op.dx();
  const double h = op.h();
  cplx rootz = std::sqrt(op.z());
  double grad2 = 0.0, agrad2 = 0.0, usq = 0.0, vusq = 0.0;
  cplx gu = 0.0;
  const auto& amid = op.damping_mid();
  const auto& veff = op.potential();
  for (int j = 0; j < n; ++j) {
    cplx du = (u[(j + 1) % n] - u[j]) / dx;
    double hd2 = std::norm(h * du);
    grad2 += hd2 * dx;
    agrad2 += amid[j] * hd2 * dx;
    usq += std::norm(u[j]) * dx;
    vusq += veff[j] * std::norm(u[j]) * dx;
    gu += g[j] * std::conj(u[j]) * dx;
  }
  AprioriResiduals out;
  out.re = std::abs(grad2 - rootz.imag() / h * agrad2 + vusq -
                    op.z().real() * usq - gu.real());
  out.im = std::abs(rootz.real() / h * agrad2 - op.z().imag() * usq - gu.imag());
  return out;
}

ResolventScan scan_inverse_norm(ResolventVariant variant,
                                const std::vector<cplx>& z_list,
                                const std::vector<double>& h_list,
                                const DampingProfile& a,
                                const SurfaceProfile& m,
                                int points_per_wavelength) {
  ResolventScan scan;
  scan.variant = variant;
  scan.h_list = h_list;
  scan.z_list = z_list;
  scan.s_min.resize(z_list.size() * h_list.size());
  std::vector<double> log_invh, log_invs;
  for (std::size_t iz = 0; iz < z_list.size(); ++iz) {
    for (std::size_t ih = 0; ih < h_list.size(); ++ih) {
      SemiclassicalOp op(variant, z_list[iz], h_list[ih], a, m,
                         points_per_wavelength);
      double s = op.smallest_singular_value();
      scan.s_min[iz * h_list.size() + ih] = s;
      if (std::abs(z_list[iz] - cplx(1.0, 0.0)) < 1e-12) {
        log_invh.push_back(std::log(1.0 / h_list[ih]));
        log_invs.push_back(std::log(1.0 / s));
      }
    }
  }
  if (log_invh.size() >= 2) {
    LinearFit f = fit_line(log_invh, log_invs);
    scan.fitted_nu = f.slope;
    scan.fit_r2 = f.r2;
  }
  return scan;
}

CutoffScan cutoff_resolvent_estimate(bool with_barrier,
                                     const std::vector<double>& h_list,
                                     double z_energy, double halfwidth,
                                     int points_per_wavelength,
                                     double chi_halfwidth) {
  CutoffScan out;
  out.h_list = h_list;
  SmoothStep step;
  const double x_chi = chi_halfwidth;
  const double x_abs = halfwidth - 3.0;
  for (double h : h_list) {
    int n = static_cast<int>(std::ceil(points_per_wavelength * 2.0 * halfwidth /
                                       (two_pi * h)));
    double dx = 2.0 * halfwidth / (n + 1);
    std::vector<cplx> diag(n), lower(n - 1), upper(n - 1);
    std::vector<double> chi(n);
    double w = h * h / (dx * dx);
    for (int j = 0; j < n; ++j) {
      double x = -halfwidth + (j + 1) * dx;
      double vb = with_barrier ? barrier_potential(x) : 0.0;
      double wa = step.value((std::abs(x) - x_abs));
      diag[j] = 2.0 * w + vb - z_energy + cplx(0.0, wa);
      chi[j] = x_chi <= 0.0 ? 0.0 : 1.0 - step.value(std::abs(x) - (x_chi - 1.0));
      if (j + 1 < n) upper[j] = -w;
      if (j > 0) lower[j - 1] = -w;
    }
    TridiagLU lu(diag, lower, upper);
    // power iteration for || chi Q^{-1} chi ||
    std::mt19937_64 rng(17);
    std::normal_distribution<double> gauss;
    std::vector<cplx> x(n);
    double nrm = 0.0;
    for (auto& v : x) {
      v = cplx(gauss(rng), gauss(rng));
      nrm += std::norm(v);
    }
    for (auto& v : x) v /= std::sqrt(nrm);
    double lam = 0.0;
    for (int it = 0; it < 300; ++it) {
      std::vector<cplx> t(n);
      for (int j = 0; j < n; ++j) t[j] = chi[j] * x[j];
      t = lu.solve(t);
      for (int j = 0; j < n; ++j) t[j] *= chi[j];
      // adjoint
      std::vector<cplx> s(n);
      for (int j = 0; j < n; ++j) s[j] = chi[j] * t[j];
      s = lu.solve_adjoint(s);
      for (int j = 0; j < n; ++j) s[j] *= chi[j];
      double lam_new = 0.0, sn = 0.0;
      for (int j = 0; j < n; ++j) {
        lam_new += (s[j] * std::conj(x[j])).real();
        sn += std::norm(s[j]);
      }
      sn = std::sqrt(sn);
      if (sn < 1e-300) {
        lam = 0.0;
        break;
      }
      for (int j = 0; j < n; ++j) x[j] = s[j] / sn;
      if (it > 2 && std::abs(lam_new - lam) < 1e-3 * std::abs(lam_new)) {
        lam = lam_new;
        break;
      }
      lam = lam_new;
    }
    out.norm.push_back(std::sqrt(std::max(lam, 0.0)));
  }
  for (double v : out.norm)
    if (v <= 0.0 || h_list.size() < 2) return out;  // degenerate scan: no fit
  std::vector<double> li, ln, lc;
  for (std::size_t i = 0; i < h_list.size(); ++i) {
    li.push_back(std::log(1.0 / h_list[i]));
    ln.push_back(std::log(out.norm[i]));
    lc.push_back(std::log(out.norm[i]) -
                 std::log(std::log(1.0 / h_list[i]) / h_list[i]));
  }
  LinearFit f = fit_line(li, ln);
  out.fitted_nu = f.slope;
  out.plain_rms = f.rms_residual;
  double mean = 0.0;
  for (double v : lc) mean += v;
  mean /= lc.size();
  double var = 0.0;
  for (double v : lc) var += (v - mean) * (v - mean);
  out.log_corrected_rms = std::sqrt(var / lc.size());
  return out;
}

}  // namespace dwave
