#include "dwave/wkb.hpp"

#include <cmath>
#include <stdexcept>

namespace dwave {

SpectralSplit SpectralSplit::make(double h, double E, double F, double eps) {
  if (h <= 0.0) throw std::invalid_argument("SpectralSplit: h <= 0");
  if (eps <= 0.0) throw std::invalid_argument("SpectralSplit: eps <= 0");
  SpectralSplit s;
  s.h = h;
  s.E = E;
  s.F = F;
  s.eps = eps;
  s.mu = std::sqrt(cplx(1.0 + E, F));
  return s;
}

cplx SpectralSplit::rho() const { return cplx(-E / 2.0, -h / 2.0 - F / 2.0); }

double eikonal_slope(const SurfaceProfile& m, double E, double z) {
  double q = 1.0 + E - m.W(z);
  if (q < 0.0) {
    if (q > -1e-14) q = 0.0;
    else throw std::domain_error("eikonal_slope: classically forbidden point");
  }
  return std::sqrt(q);
}

double barrier_action(double E, double eps) {
  if (E <= 0.0) throw std::domain_error("barrier_action: E <= 0");
  double root = std::sqrt(eps * eps + E);
  return eps * root + E * std::log((eps + root) / std::sqrt(E));
}

double barrier_action_quadrature(double E, double eps, double tol) {
  if (E <= 0.0) throw std::domain_error("barrier_action_quadrature: E <= 0");
  return integrate([E](double z) { return std::sqrt(E + z * z); }, -eps, eps,
                   tol);
}

double loop_action(const SurfaceProfile& m, double E, double tol) {
  if (1.0 + E - m.W(two_pi / 2.0) < 0.0)
    throw std::domain_error("loop_action: E below the admissible range");
  auto f = [&](double z) { return eikonal_slope(m, E, z); };
  // even integrand; z = 0 is the |z|-type point at E = 0
  return 2.0 * integrate(f, 0.0, two_pi / 2.0, tol);
}

double loop_action_derivative(const SurfaceProfile& m, double E, double tol) {
  if (E <= 0.0) throw std::domain_error("loop_action_derivative: E <= 0");
  auto f = [&](double z) { return 0.5 / eikonal_slope(m, E, z); };
  return 2.0 * integrate(f, 0.0, two_pi / 2.0, tol);
}

double loop_halftime(const SurfaceProfile& m, double E, double eps) {
  auto f = [&](double z) { return 0.5 / eikonal_slope(m, E, z); };
  return integrate(f, eps, two_pi - eps, 1e-12);
}

double damping_exposure(const SurfaceProfile& m, const DampingProfile& a,
                        double E, double eps) {
  for (double z = 0.0; z <= eps; z += eps / 64.0)
    if (a.a(z) != 0.0)
      throw std::domain_error(
          "damping_exposure: damping does not vanish on |z| <= eps");
  auto f = [&](double z) { return a.a(z) * 0.5 / eikonal_slope(m, E, z); };
  // a == 0 on [0, eps] and [2pi - eps, 2pi], so integrate the live part
  return integrate(f, eps, two_pi - eps, 1e-12);
}

double barrier_amplitude_factor(const SpectralSplit& s) {
  if (s.E <= 0.0) throw std::domain_error("barrier_amplitude_factor: E <= 0");
  double L = std::log((s.eps + std::sqrt(s.eps * s.eps + s.E)) / std::sqrt(s.E));
  return std::exp(-(s.F / s.h) * L);
}

namespace {

// 15-point Gauss-Legendre on [a, b]
template <typename F>
auto gauss15(F&& f, double a, double b) -> decltype(f(0.0)) {
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

}  // namespace

OuterCumulative outer_cumulative(const SurfaceProfile& m,
                                 const DampingProfile& a, double E, double eps,
                                 const std::vector<double>& points) {
  OuterCumulative out;
  out.z = points;
  const std::size_t n = points.size();
  out.phase.resize(n);
  out.inv.resize(n);
  out.damp.resize(n);
  double left = eps;
  double acc_p = 0.0, acc_i = 0.0, acc_a = 0.0;
  const double panel_cap = 0.01;
  for (std::size_t j = 0; j < n; ++j) {
    double right = points[j];
    if (right < left - 1e-12)
      throw std::invalid_argument("outer_cumulative: points not increasing");
    if (right > two_pi - eps + 1e-12)
      throw std::invalid_argument("outer_cumulative: point outside window");
    int panels = std::max(1, static_cast<int>(std::ceil((right - left) / panel_cap)));
    for (int p = 0; p < panels; ++p) {
      double a0 = left + (right - left) * p / panels;
      double a1 = left + (right - left) * (p + 1) / panels;
      acc_p += gauss15([&](double z) { return eikonal_slope(m, E, z); }, a0, a1);
      acc_i += gauss15([&](double z) { return 1.0 / eikonal_slope(m, E, z); }, a0, a1);
      acc_a += gauss15([&](double z) { return a.a(z) / eikonal_slope(m, E, z); }, a0, a1);
    }
    out.phase[j] = acc_p;
    out.inv[j] = acc_i;
    out.damp[j] = acc_a;
    left = right;
  }
  return out;
}

cplx transport_amplitude(const SurfaceProfile& m, const DampingProfile& a,
                         const SpectralSplit& s, double z, int direction) {
  if (s.E <= 0.0) throw std::domain_error("transport_amplitude: E <= 0");
  if (z < s.eps - 1e-12 || z > two_pi - s.eps + 1e-12)
    throw std::domain_error("transport_amplitude: z outside [eps, 2pi-eps]");
  double phi_p = eikonal_slope(m, s.E, z);
  double i_inv = integrate(
      [&](double t) { return 1.0 / eikonal_slope(m, s.E, t); }, s.eps, z, 1e-12);
  double i_damp = integrate(
      [&](double t) { return a.a(t) / eikonal_slope(m, s.E, t); }, s.eps, z,
      1e-12);
  double sgn = direction >= 0 ? 1.0 : -1.0;
  cplx expo = sgn * (-(s.F / (2.0 * s.h)) * i_inv + (s.mu / 2.0) * i_damp);
  double pref = std::pow(s.eps * s.eps + s.E, 0.25) / std::sqrt(phi_p);
  return pref * std::exp(expo);
}

WkbBranch sample_branch(const SurfaceProfile& m, const DampingProfile& a,
                        const SpectralSplit& s, WkbBranch::Tag tag,
                        const std::vector<double>& zgrid) {
  WkbBranch br;
  br.tag = tag;
  br.z = zgrid;
  // +: rightward phase, gauge at its entry point; paper's convention
  //   phi_+^{in}(-eps) = 0, phi_+^{out}(+eps) = 0,
  //   phi_-^{in}(+eps) = 0, phi_-^{out}(-eps) = 0.
  double sign = (tag == WkbBranch::Tag::out_plus || tag == WkbBranch::Tag::in_plus)
                    ? 1.0
                    : -1.0;
  switch (tag) {
    case WkbBranch::Tag::out_plus: br.gauge_z = s.eps; break;
    case WkbBranch::Tag::in_plus: br.gauge_z = -s.eps; break;
    case WkbBranch::Tag::in_minus: br.gauge_z = s.eps; break;
    case WkbBranch::Tag::out_minus: br.gauge_z = -s.eps; break;
  }
  br.phase.resize(zgrid.size());
  br.amplitude.resize(zgrid.size());
  for (std::size_t j = 0; j < zgrid.size(); ++j) {
    double z = zgrid[j];
    double ph = integrate(
        [&](double t) { return eikonal_slope(m, s.E, t); }, br.gauge_z, z, 1e-12);
    double i_inv = integrate(
        [&](double t) { return 1.0 / eikonal_slope(m, s.E, t); }, br.gauge_z, z,
        1e-12);
    double i_damp = integrate(
        [&](double t) { return a.a(t) / eikonal_slope(m, s.E, t); }, br.gauge_z,
        z, 1e-12);
    br.phase[j] = sign * ph;
    double phi_p = eikonal_slope(m, s.E, z);
    double phi_g = eikonal_slope(m, s.E, br.gauge_z);
    cplx expo = sign * (-(s.F / (2.0 * s.h)) * i_inv + (s.mu / 2.0) * i_damp);
    br.amplitude[j] = std::sqrt(phi_g / phi_p) * std::exp(expo);
  }
  return br;
}

}  // namespace dwave
