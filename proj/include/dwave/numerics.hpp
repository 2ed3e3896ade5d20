#pragma once

#include <complex>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace dwave {

using cplx = std::complex<double>;

inline constexpr double two_pi = 6.283185307179586476925286766559;

/// Wrap an angle to (-pi, pi].
double wrap_angle(double z);

/// Adaptive Gauss-Kronrod integral of f over [a, b].
/// Splits are the caller's job; tol is the requested relative tolerance.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-13);

cplx integrate_c(const std::function<cplx(double)>& f, double a, double b,
                 double tol = 1e-13);

/// Piecewise integral split at interior breakpoints (sorted, inside (a,b)).
double integrate_split(const std::function<double(double)>& f, double a, double b,
                       std::span<const double> breaks, double tol = 1e-13);

/// C^inf step: 0 for s <= 0, 1 for s >= 1, strictly increasing between.
/// Built from exp(-1/s); value/derivative/second derivative.
struct SmoothStep {
  double value(double s) const;
  double deriv(double s) const;
  double deriv2(double s) const;
};

/// Bisection for a continuous monotone f on [lo, hi] with f(lo)*f(hi) <= 0.
/// Returns x with |f(x)| resolved to ftol or the bracket shrunk to xtol.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double ftol = 1e-13, double xtol = 1e-15);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;  // of the fitted y values
  double r2 = 0.0;
};

LinearFit fit_line(std::span<const double> x, std::span<const double> y);

/// log Gamma(z), principal branch, Lanczos(g=7).  Relative accuracy ~1e-13
/// away from the poles; throws std::domain_error at the poles.
cplx log_gamma(cplx z);

/// Simple deterministic RNG helpers for test inputs.
std::vector<double> random_uniform(std::uint64_t seed, std::size_t n, double lo,
                                   double hi);

}  // namespace dwave
