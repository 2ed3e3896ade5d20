#include "dwave/quasimode.hpp"

#include <boost/numeric/odeint.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "dwave/fourier.hpp"
#include "dwave/quantize.hpp"

namespace dwave {

namespace {

using State = std::array<cplx, 2>;  // (psi, psi')

struct BarrierOde {
  double inv_h2;
  cplx shift;  // E + iF
  void operator()(const State& y, State& dy, double z) const {
    dy[0] = y[1];
    dy[1] = -(z * z + shift) * y[0] * inv_h2;
  }
};

void integrate_half(const SpectralSplit& s, const std::vector<double>& pts,
                    const State& y0, std::vector<cplx>& vals,
                    std::vector<cplx>& ders) {
  namespace ode = boost::numeric::odeint;
  BarrierOde rhs{1.0 / (s.h * s.h), cplx(s.E, s.F)};
  vals.resize(pts.size());
  ders.resize(pts.size());
  auto stepper =
      ode::make_controlled<ode::runge_kutta_fehlberg78<State>>(1e-13, 1e-13);
  State y = y0;
  double z = 0.0;
  std::size_t idx = 0;
  while (idx < pts.size() && pts[idx] <= 1e-300) {
    vals[idx] = y0[0];
    ders[idx] = y0[1];
    ++idx;
  }
  for (; idx < pts.size(); ++idx) {
    double target = pts[idx];
    ode::integrate_adaptive(stepper, rhs, y, z, target,
                            std::min(0.05 * s.h, target - z));
    z = target;
    vals[idx] = y[0];
    ders[idx] = y[1];
  }
}

}  // namespace

InnerSamples inner_solve(const SpectralSplit& s, const std::vector<double>& pts) {
  for (double p : pts)
    if (std::abs(p) > 2.0 * s.eps + 1e-12)
      throw std::invalid_argument("inner_solve: point outside [-2 eps, 2 eps]");
  std::vector<double> absld(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) absld[i] = std::abs(pts[i]);
  std::vector<double> sorted = absld;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(
      std::unique(sorted.begin(), sorted.end(),
                  [](double a, double b) { return std::abs(a - b) < 1e-15; }),
      sorted.end());
  std::vector<cplx> ev, evd, ov, ovd;
  integrate_half(s, sorted, State{1.0, 0.0}, ev, evd);
  integrate_half(s, sorted, State{0.0, 1.0}, ov, ovd);
  auto locate = [&](double x) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), x - 1e-15);
    return static_cast<std::size_t>(it - sorted.begin());
  };
  InnerSamples out;
  out.z = pts;
  out.even.resize(pts.size());
  out.even_d.resize(pts.size());
  out.odd.resize(pts.size());
  out.odd_d.resize(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::size_t j = locate(absld[i]);
    double sgn = pts[i] < 0.0 ? -1.0 : 1.0;
    out.even[i] = ev[j];
    out.even_d[i] = sgn * evd[j];
    out.odd[i] = sgn * ov[j];
    out.odd_d[i] = ovd[j];
  }
  return out;
}

namespace {

// 15-point Gauss-Legendre (duplicated locally for complex integrands)
template <typename F>
auto gauss15c(F&& f, double a, double b) -> decltype(f(0.0)) {
  static const double xk[8] = {0.0,
                               0.2011940939974345,
                               0.3941513470775634,
                               0.5709721726085388,
                               0.7244177313601701,
                               0.8482065834104272,
                               0.9372733924007060,
                               0.9879925180204854};
  static const double wk[8] = {0.2025782419255613, 0.1984314853271116,
                               0.1861610000155622, 0.1662692058169939,
                               0.1395706779261543, 0.1071592204671719,
                               0.0703660474881081, 0.0307532419961173};
  double c = 0.5 * (a + b), r = 0.5 * (b - a);
  auto acc = wk[0] * f(c);
  for (int i = 1; i < 8; ++i)
    acc += wk[i] * (f(c + r * xk[i]) + f(c - r * xk[i]));
  return r * acc;
}

// pointwise geometry of the outer WKB field at energy E
struct FieldPoint {
  double phi_p;        // phi'
  double log_pref_d;   // d/dz log[(eps^2+E)^{1/4} / sqrt(phi')] = -phi''/2phi'
  cplx rate;           // (a mu - F/h) / (2 phi')
  cplx log_s_dd_plus;  // (log sigma_0)'' + ((log sigma_0)')^2, direction +
  cplx log_s_dd_minus;
};

struct OuterEval {
  const SurfaceProfile* m;
  const DampingProfile* a;
  SpectralSplit s;

  FieldPoint point(double z) const {
    auto ev = m->eval(z);
    FieldPoint p;
    double q = 1.0 + s.E - ev.W;
    p.phi_p = std::sqrt(q);
    double phi_pp = -ev.dW / (2.0 * p.phi_p);
    double phi_ppp =
        -ev.d2W / (2.0 * p.phi_p) - ev.dW * ev.dW / (4.0 * q * p.phi_p);
    p.log_pref_d = -phi_pp / (2.0 * p.phi_p);
    double av = a->a(z);
    double avd = a->da(z);
    p.rate = (av * s.mu - s.F / s.h) / (2.0 * p.phi_p);
    // (log sigma_0^d)' = log_pref_d + d * rate
    cplx dlog_rate =
        avd * s.mu / (2.0 * p.phi_p) - (av * s.mu - s.F / s.h) * phi_pp /
                                           (2.0 * q);
    double dlog_pref =
        -phi_ppp / (2.0 * p.phi_p) + phi_pp * phi_pp / (2.0 * q);
    for (int d : {+1, -1}) {
      cplx l1 = p.log_pref_d + static_cast<double>(d) * p.rate;
      cplx l2 = dlog_pref + static_cast<double>(d) * dlog_rate;
      cplx val = l1 * l1 + l2;  // sigma0''/sigma0
      (d > 0 ? p.log_s_dd_plus : p.log_s_dd_minus) = val;
    }
    return p;
  }

  // transport correction integrand i sigma0''/(2 d phi' sigma0)
  cplx corr_integrand(double z, int d) const {
    FieldPoint p = point(z);
    cplx sdd = d > 0 ? p.log_s_dd_plus : p.log_s_dd_minus;
    return cplx(0.0, 1.0) * sdd / (2.0 * d * p.phi_p);
  }
};

// cumulative field data at the requested increasing points of [eps, 2pi-eps]
struct OuterData {
  std::vector<double> z;
  std::vector<double> phase, i_inv, i_damp;
  std::vector<cplx> corr_p, corr_m;  // int of the correction integrands
};

OuterData outer_data(const OuterEval& oe, const std::vector<double>& pts) {
  OuterData od;
  od.z = pts;
  const std::size_t n = pts.size();
  od.phase.resize(n);
  od.i_inv.resize(n);
  od.i_damp.resize(n);
  od.corr_p.resize(n);
  od.corr_m.resize(n);
  double left = oe.s.eps;
  double ap = 0, ai = 0, ad = 0;
  cplx cp = 0, cm = 0;
  const double panel_cap = 0.01;  // keeps the Gauss panels resolving W and a
  for (std::size_t j = 0; j < n; ++j) {
    double right = pts[j];
    if (right < left - 1e-12)
      throw std::invalid_argument("outer_data: points not increasing");
    int panels = std::max(1, static_cast<int>(std::ceil((right - left) / panel_cap)));
    for (int p = 0; p < panels; ++p) {
      double a0 = left + (right - left) * p / panels;
      double a1 = left + (right - left) * (p + 1) / panels;
      ap += gauss15c([&](double t) { return oe.point(t).phi_p; }, a0, a1);
      ai += gauss15c([&](double t) { return 1.0 / oe.point(t).phi_p; }, a0, a1);
      ad += gauss15c([&](double t) { return oe.a->a(t) / oe.point(t).phi_p; },
                     a0, a1);
      cp += gauss15c([&](double t) { return oe.corr_integrand(t, +1); }, a0, a1);
      cm += gauss15c([&](double t) { return oe.corr_integrand(t, -1); }, a0, a1);
    }
    od.phase[j] = ap;
    od.i_inv[j] = ai;
    od.i_damp[j] = ad;
    od.corr_p[j] = cp;
    od.corr_m[j] = cm;
    left = right;
  }
  return od;
}

struct WaveVals {
  cplx w_plus, w_minus;    // values of the two corrected branches
  cplx dw_plus, dw_minus;  // h * d/dz
};

WaveVals outer_waves(const OuterEval& oe, double z, double phase, double i_inv,
                     double i_damp, cplx corr_p, cplx corr_m) {
  const SpectralSplit& s = oe.s;
  FieldPoint p = oe.point(z);
  double pref = std::pow(s.eps * s.eps + s.E, 0.25) / std::sqrt(p.phi_p);
  cplx grow = -(s.F / (2.0 * s.h)) * i_inv + (s.mu / 2.0) * i_damp;
  cplx ph = std::exp(cplx(0.0, phase / s.h));
  WaveVals wv;
  for (int d : {+1, -1}) {
    cplx s0 = pref * std::exp(static_cast<double>(d) * grow);
    cplx corr = d > 0 ? corr_p : corr_m;
    cplx sig = s0 * (1.0 + s.h * corr);
    cplx w = (d > 0 ? ph : 1.0 / ph) * sig;
    cplx l1 = p.log_pref_d + static_cast<double>(d) * p.rate;  // sigma0'/sigma0
    cplx g = oe.corr_integrand(z, d);
    cplx dlog_sig = l1 + s.h * g / (1.0 + s.h * corr);
    cplx dw = w * (cplx(0.0, d * p.phi_p) + s.h * dlog_sig);
    if (d > 0) {
      wv.w_plus = w;
      wv.dw_plus = dw;
    } else {
      wv.w_minus = w;
      wv.dw_minus = dw;
    }
  }
  return wv;
}

struct Connection {
  cplx A, B;              // outer coefficients from the matching at +eps
  cplx c_even, c_odd;     // inner-copy coefficients from the seam at 2pi - eps
  cplx seam_defect;       // log(c_even); zero at an even periodic mode
  cplx midpoint_defect;   // log standing-wave ratio at z = pi; branch-safe
  double cond = 0.0;
};

Connection connect(const OuterEval& oe) {
  const SpectralSplit& s = oe.s;
  InnerSamples in = inner_solve(s, {s.eps, -s.eps});
  cplx ve = in.even[0];
  cplx hde = s.h * in.even_d[0];

  WaveVals we = outer_waves(oe, s.eps, 0.0, 0.0, 0.0, 0.0, 0.0);
  Eigen::Matrix2cd mat;
  mat << we.w_plus, we.w_minus, we.dw_plus, we.dw_minus;
  Eigen::Vector2cd rhs(ve, hde);
  Eigen::Vector2cd ab = mat.colPivHouseholderQr().solve(rhs);

  Connection c;
  c.A = ab(0);
  c.B = ab(1);
  Eigen::JacobiSVD<Eigen::Matrix2cd> svd(mat);
  c.cond = svd.singularValues()(0) / svd.singularValues()(1);

  const double pi = two_pi / 2.0;
  OuterData od = outer_data(oe, {pi, two_pi - s.eps});
  WaveVals wm =
      outer_waves(oe, pi, od.phase[0], od.i_inv[0], od.i_damp[0], od.corr_p[0],
                  od.corr_m[0]);
  c.midpoint_defect = std::log(-(c.A * wm.dw_plus) / (c.B * wm.dw_minus));

  // transport to the seam and express in the inner pair at -eps; the
  // Wronskian of (psi_e, psi_o) is 1, so Cramer is explicit
  WaveVals wend = outer_waves(oe, two_pi - s.eps, od.phase[1], od.i_inv[1],
                              od.i_damp[1], od.corr_p[1], od.corr_m[1]);
  cplx v_r = c.A * wend.w_plus + c.B * wend.w_minus;
  cplx dv_r = (c.A * wend.dw_plus + c.B * wend.dw_minus) / s.h;
  cplx pe = in.even[1], dpe = in.even_d[1];  // at -eps
  cplx po = in.odd[1], dpo = in.odd_d[1];
  cplx wr = pe * dpo - dpe * po;  // = 1 up to solver accuracy
  c.c_even = (v_r * dpo - dv_r * po) / wr;
  c.c_odd = (dv_r * pe - v_r * dpe) / wr;
  c.seam_defect = std::log(c.c_even);
  return c;
}

}  // namespace

double chi_weight(double z, double eps) {
  SmoothStep step;
  if (z < 0.0) return 0.0;
  if (z <= eps) return step.value(z / eps);
  if (z <= two_pi) return 1.0;
  if (z <= two_pi + eps) return 1.0 - step.value((z - two_pi) / eps);
  return 0.0;
}

Quasimode build_quasimode(const SurfaceProfile& m, const DampingProfile& a,
                          int k, const QuasimodeOptions& opt) {
  if (opt.eps > m.glue_halfwidth() + 1e-12)
    throw std::invalid_argument("build_quasimode: eps outside the exact region");
  Quasimode q;
  q.k = k;
  q.h = 1.0 / k;
  q.eps = opt.eps;

  auto [mm, e0] = bohr_sommerfeld(k, m, opt.e_max);
  q.m = mm;
  q.E0 = e0;
  q.F0 = determine_F(e0, q.h, a, m, opt.eps);

  double E = q.E0, F = q.F0;
  auto eval_conn = [&](double ee, double ff) {
    OuterEval oe{&m, &a, SpectralSplit::make(q.h, ee, ff, opt.eps)};
    Connection c = connect(oe);
    if (c.cond > opt.cond_limit)
      throw std::runtime_error(
          "build_quasimode: degenerate matching system; retry with another eps");
    return c;
  };

  if (opt.refine) {
    double gap = two_pi * q.h / loop_action_derivative(m, std::max(E, 1e-8));
    // stage 1 homes in through the branch-safe midpoint ratio, stage 2
    // zeroes the even seam coefficient (the monodromy condition proper)
    for (int stage = 0; stage < 2; ++stage) {
      auto defect = [&](double ee, double ff) {
        Connection c = eval_conn(ee, ff);
        return stage == 0 ? c.midpoint_defect : c.seam_defect;
      };
      cplx g = defect(E, F);
      double tol = stage == 0 ? 1e-6 : opt.refine_tol;
      for (int it = 0; it < opt.max_newton && std::abs(g) > tol; ++it) {
        double de = 1e-6 * std::max(E, 0.1 * gap);
        double df = 1e-6 * std::max(std::abs(F), 1e-3 * q.h);
        cplx ge = (defect(E + de, F) - g) / de;
        cplx gf = (defect(E, F + df) - g) / df;
        Eigen::Matrix2d jac;
        jac << ge.real(), gf.real(), ge.imag(), gf.imag();
        Eigen::Vector2d rhs(-g.real(), -g.imag());
        Eigen::Vector2d st = jac.colPivHouseholderQr().solve(rhs);
        // keep steps inside the quantization cell and E positive
        double sc = 1.0;
        if (std::abs(st(0)) > 0.45 * gap) sc = 0.45 * gap / std::abs(st(0));
        double fcap = std::max(4.0 * std::abs(q.F0), 0.2 * q.h);
        if (std::abs(st(1)) * sc > fcap) sc = fcap / std::abs(st(1));
        while (E + sc * st(0) <= 0.0) sc *= 0.5;
        double e_try = E, f_try = F;
        cplx g_try = g;
        for (int bt = 0; bt < 5; ++bt) {
          e_try = E + sc * st(0);
          f_try = F + sc * st(1);
          g_try = defect(e_try, f_try);
          if (std::abs(g_try) < std::abs(g)) break;
          sc *= 0.5;
        }
        E = e_try;
        F = f_try;
        g = g_try;
      }
    }
    q.refine_defect = std::abs(eval_conn(E, F).seam_defect);
  } else {
    q.refine_defect = std::abs(eval_conn(E, F).seam_defect);
  }
  q.E = E;
  q.F = F;

  SpectralSplit s = SpectralSplit::make(q.h, E, F, opt.eps);
  q.mu = s.mu;
  OuterEval oe{&m, &a, s};

  int n = opt.points_per_wavelength * k;
  if (n % 2) ++n;
  q.z.resize(n);
  for (int j = 0; j < n; ++j) q.z[j] = two_pi * j / n;

  Connection c = connect(oe);
  q.matching_cond = c.cond;

  std::vector<double> inner_pts, outer_pts, copy_pts;
  for (double z : q.z) {
    if (z <= opt.eps)
      inner_pts.push_back(z);
    else if (z < two_pi - opt.eps)
      outer_pts.push_back(z);
    else
      copy_pts.push_back(z - two_pi);
  }
  InnerSamples in0 = inner_solve(s, inner_pts);
  OuterData od = outer_data(oe, outer_pts);
  q.seam_even = c.c_even;
  q.seam_odd = c.c_odd;

  {
    int nm = 64;
    std::vector<double> pts(nm);
    for (int j = 0; j < nm; ++j) pts[j] = opt.eps * j / (nm - 1);
    InnerSamples ov = inner_solve(s, pts);
    double mv = 0.0, md = 0.0;
    for (int j = 0; j < nm; ++j) {
      cplx dvv = (q.seam_even - 1.0) * ov.even[j] + q.seam_odd * ov.odd[j];
      cplx dvd = (q.seam_even - 1.0) * ov.even_d[j] + q.seam_odd * ov.odd_d[j];
      mv = std::max(mv, std::abs(dvv));
      md = std::max(md, std::abs(dvd));
    }
    q.mismatch_value = mv;
    q.mismatch_deriv = md;
  }

  InnerSamples incopy = inner_solve(s, copy_pts);
  q.u.resize(n);
  std::size_t ii = 0, oi = 0, ci = 0;
  for (int j = 0; j < n; ++j) {
    double z = q.z[j];
    cplx val;
    if (z <= opt.eps) {
      cplx v0 = in0.even[ii];
      cplx v1 = q.seam_even * in0.even[ii] + q.seam_odd * in0.odd[ii];
      double w = chi_weight(z, opt.eps);
      val = w * v0 + (1.0 - w) * v1;
      ++ii;
    } else if (z < two_pi - opt.eps) {
      WaveVals wv = outer_waves(oe, z, od.phase[oi], od.i_inv[oi], od.i_damp[oi],
                                od.corr_p[oi], od.corr_m[oi]);
      val = c.A * wv.w_plus + c.B * wv.w_minus;
      ++oi;
    } else {
      val = q.seam_even * incopy.even[ci] + q.seam_odd * incopy.odd[ci];
      ++ci;
    }
    q.u[j] = val;
  }

  double dz = two_pi / n;
  double nrm = 0.0;
  for (auto& v : q.u) nrm += std::norm(v);
  nrm = std::sqrt(nrm * dz);
  for (auto& v : q.u) v /= nrm;
  return q;
}

double quasimode_residual(const Quasimode& q, const SurfaceProfile& m,
                          const DampingProfile& a,
                          std::optional<cplx> mu_override) {
  const int n = static_cast<int>(q.u.size());
  cplx mu = mu_override.value_or(q.mu);
  PeriodicSpectral fft(n);
  std::vector<cplx> d2 = fft.derivative(q.u, 2);
  double h2 = q.h * q.h;
  double nr = 0.0, nu = 0.0;
  for (int j = 0; j < n; ++j) {
    double z = q.z[j];
    auto ev = m.eval(z);
    double v1 = subpotential_from_w(ev.W, ev.dW, ev.d2W);
    cplx pu = -h2 * d2[j] + (ev.W - mu * mu + h2 * v1) * q.u[j] +
              cplx(0.0, 1.0) * q.h * mu * a.a(z) * q.u[j];
    nr += std::norm(pu);
    nu += std::norm(q.u[j]);
  }
  return std::sqrt(nr / nu);
}

}  // namespace dwave
