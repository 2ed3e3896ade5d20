#include "dwave/numerics.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <random>

namespace dwave {

double wrap_angle(double z) {
  double w = std::remainder(z, two_pi);
  if (w <= -std::numbers::pi) w += two_pi;
  return w;
}

namespace {
using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
  if (a == b) return 0.0;
  return GK::integrate(f, a, b, 14, tol);
}

cplx integrate_c(const std::function<cplx(double)>& f, double a, double b,
                 double tol) {
  double re = integrate([&](double x) { return f(x).real(); }, a, b, tol);
  double im = integrate([&](double x) { return f(x).imag(); }, a, b, tol);
  return {re, im};
}

double integrate_split(const std::function<double(double)>& f, double a, double b,
                       std::span<const double> breaks, double tol) {
  double total = 0.0;
  double left = a;
  for (double c : breaks) {
    if (c <= left || c >= b) continue;
    total += integrate(f, left, c, tol);
    left = c;
  }
  total += integrate(f, left, b, tol);
  return total;
}

namespace {
inline double bump_exp(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }
}  // namespace

double SmoothStep::value(double s) const {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  double p = bump_exp(s);
  double q = bump_exp(1.0 - s);
  return p / (p + q);
}

double SmoothStep::deriv(double s) const {
  if (s <= 0.0 || s >= 1.0) return 0.0;
  double p = bump_exp(s);
  double q = bump_exp(1.0 - s);
  double dp = p / (s * s);
  double dq = -q / ((1.0 - s) * (1.0 - s));
  double d = p + q;
  return (dp * q - p * dq) / (d * d);
}

double SmoothStep::deriv2(double s) const {
  if (s <= 0.0 || s >= 1.0) return 0.0;
  double p = bump_exp(s);
  double q = bump_exp(1.0 - s);
  double s2 = s * s, t = 1.0 - s, t2 = t * t;
  double dp = p / s2;
  double dq = -q / t2;
  double d2p = p * (1.0 - 2.0 * s) / (s2 * s2);
  double d2q = q * (2.0 * s - 1.0) / (t2 * t2);
  double d = p + q;
  double num1 = d2p * q - p * d2q;
  double num2 = dp * q - p * dq;
  return num1 / (d * d) - 2.0 * num2 * (dp + dq) / (d * d * d);
}

double bisect(const std::function<double(double)>& f, double lo, double hi,
              double ftol, double xtol) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo * fhi > 0.0)
    throw std::invalid_argument("bisect: bracket does not change sign");
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if (std::abs(fm) <= ftol || 0.5 * (hi - lo) <= xtol * (1.0 + std::abs(mid)))
      return mid;
    if (flo * fm <= 0.0) {
      hi = mid;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  return 0.5 * (lo + hi);
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_line: need at least two points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    syy += y[i] * y[i];
  }
  double det = n * sxx - sx * sx;
  if (det == 0.0) throw std::invalid_argument("fit_line: degenerate abscissae");
  LinearFit out;
  out.slope = (n * sxy - sx * sy) / det;
  out.intercept = (sy - out.slope * sx) / n;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double r = y[i] - (out.slope * x[i] + out.intercept);
    ss_res += r * r;
  }
  double ss_tot = syy - sy * sy / n;
  out.rms_residual = std::sqrt(ss_res / n);
  out.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return out;
}

cplx log_gamma(cplx z) {
  // Lanczos, g = 7, 9 terms.
  static const double coef[9] = {
      0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
      771.32342877765313,       -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7};
  const double pi = std::numbers::pi;
  if (z.real() < 0.5) {
    // reflection; poles of Gamma at z = 0, -1, -2, ...
    double nearest = std::round(z.real());
    if (nearest <= 0.0 && std::abs(z.real() - nearest) < 1e-12 &&
        std::abs(z.imag()) < 1e-12)
      throw std::domain_error("log_gamma: pole of Gamma");
    cplx spz = std::sin(pi * z);
    return std::log(pi) - std::log(spz) - log_gamma(1.0 - z);
  }
  cplx zm = z - 1.0;
  cplx x = coef[0];
  for (int i = 1; i < 9; ++i) x += coef[i] / (zm + static_cast<double>(i));
  cplx t = zm + 7.5;
  return 0.5 * std::log(2.0 * pi) + (zm + 0.5) * std::log(t) - t + std::log(x);
}

std::vector<double> random_uniform(std::uint64_t seed, std::size_t n, double lo,
                                   double hi) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> out(n);
  for (auto& v : out) v = dist(rng);
  return out;
}

}  // namespace dwave
