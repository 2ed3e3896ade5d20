#include "dwave/fourier.hpp"

#include <fftw3.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dwave {

PeriodicSpectral::PeriodicSpectral(int n, double period)
    : n_(n), period_(period) {
  if (n < 2) throw std::invalid_argument("PeriodicSpectral: n < 2");
  fftw_complex* tmp = fftw_alloc_complex(static_cast<std::size_t>(n));
  plan_fwd_ = fftw_plan_dft_1d(n, tmp, tmp, FFTW_FORWARD, FFTW_ESTIMATE);
  plan_bwd_ = fftw_plan_dft_1d(n, tmp, tmp, FFTW_BACKWARD, FFTW_ESTIMATE);
  fftw_free(tmp);
}

PeriodicSpectral::~PeriodicSpectral() {
  fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
}

std::vector<double> PeriodicSpectral::nodes() const {
  std::vector<double> z(n_);
  for (int j = 0; j < n_; ++j) z[j] = period_ * j / n_;
  return z;
}

double PeriodicSpectral::wavenumber(int j) const {
  int m = j <= n_ / 2 ? j : j - n_;
  return two_pi * m / period_;
}

std::vector<cplx> PeriodicSpectral::forward(const std::vector<cplx>& u) const {
  if (static_cast<int>(u.size()) != n_)
    throw std::invalid_argument("PeriodicSpectral: size mismatch");
  std::vector<cplx> out = u;
  fftw_execute_dft(static_cast<fftw_plan>(plan_fwd_),
                   reinterpret_cast<fftw_complex*>(out.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

std::vector<cplx> PeriodicSpectral::inverse(const std::vector<cplx>& uh) const {
  if (static_cast<int>(uh.size()) != n_)
    throw std::invalid_argument("PeriodicSpectral: size mismatch");
  std::vector<cplx> out = uh;
  fftw_execute_dft(static_cast<fftw_plan>(plan_bwd_),
                   reinterpret_cast<fftw_complex*>(out.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  const double inv = 1.0 / n_;
  for (auto& v : out) v *= inv;
  return out;
}

std::vector<cplx> PeriodicSpectral::multiplier(
    const std::vector<cplx>& u, const std::function<cplx(double)>& m) const {
  std::vector<cplx> uh = forward(u);
  for (int j = 0; j < n_; ++j) uh[j] *= m(wavenumber(j));
  // the Nyquist slot carries both +/-N/2; zero it for odd-symmetric multipliers
  return inverse(uh);
}

std::vector<cplx> PeriodicSpectral::derivative(const std::vector<cplx>& u,
                                               int p) const {
  std::vector<cplx> uh = forward(u);
  for (int j = 0; j < n_; ++j) {
    double xi = wavenumber(j);
    if (p % 2 == 1 && n_ % 2 == 0 && j == n_ / 2) {
      uh[j] = 0.0;  // unpaired Nyquist mode has no well-defined odd derivative
      continue;
    }
    uh[j] *= std::pow(cplx(0.0, xi), p);
  }
  return inverse(uh);
}

std::vector<cplx> resample_periodic(const std::vector<cplx>& u, int n_out) {
  const int n_in = static_cast<int>(u.size());
  if (n_out == n_in) return u;
  PeriodicSpectral fin(n_in);
  PeriodicSpectral fout(n_out);
  std::vector<cplx> uh = fin.forward(u);
  std::vector<cplx> vh(static_cast<std::size_t>(n_out), cplx(0.0, 0.0));
  int keep = std::min(n_in, n_out) / 2;
  for (int m = -keep + 1; m < keep; ++m) {
    int ji = m >= 0 ? m : m + n_in;
    int jo = m >= 0 ? m : m + n_out;
    vh[jo] = uh[ji];
  }
  auto out = fout.inverse(vh);
  const double scale = static_cast<double>(n_out) / n_in;
  for (auto& v : out) v *= scale;
  return out;
}

std::vector<double> spectral_minus_d2_matrix(int n, double period) {
  // Eigen-decomposition form: -d2 = F^* diag(xi^2) F; assembled directly from
  // the closed-form trigonometric kernel for even n, generic n via the sum.
  std::vector<double> a(static_cast<std::size_t>(n) * n, 0.0);
  const double scale = two_pi / period;
  // entry (j,l) = (1/n) sum_m xi_m^2 cos(2 pi m (j-l)/n)
  std::vector<double> kernel(n, 0.0);
  for (int d = 0; d < n; ++d) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) {
      int m = j <= n / 2 ? j : j - n;
      if (n % 2 == 0 && j == n / 2) m = n / 2;  // Nyquist: cosine-only mode
      double xi = scale * m;
      s += xi * xi * std::cos(two_pi * m * d / n);
    }
    kernel[d] = s / n;
  }
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) a[static_cast<std::size_t>(j) * n + l] =
        kernel[(j - l + n) % n];
  return a;
}

}  // namespace dwave
