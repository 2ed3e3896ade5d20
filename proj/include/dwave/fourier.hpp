#pragma once

#include <functional>
#include <vector>

#include "dwave/numerics.hpp"

namespace dwave {

/// Spectral calculus for 2pi-periodic grids z_j = 2*pi*j/N.
/// Wraps FFTW complex transforms; one plan pair per instance.
class PeriodicSpectral {
 public:
  explicit PeriodicSpectral(int n, double period = two_pi);
  ~PeriodicSpectral();
  PeriodicSpectral(const PeriodicSpectral&) = delete;
  PeriodicSpectral& operator=(const PeriodicSpectral&) = delete;

  int size() const { return n_; }
  double period() const { return period_; }
  std::vector<double> nodes() const;

  /// d^p/dz^p of samples, computed through the Fourier side.
  std::vector<cplx> derivative(const std::vector<cplx>& u, int p) const;

  std::vector<cplx> forward(const std::vector<cplx>& u) const;   // unnormalized
  std::vector<cplx> inverse(const std::vector<cplx>& uh) const;  // has the 1/N

  /// Fourier multiplier m(xi) applied to u; xi is the signed wavenumber
  /// 2*pi*m/period.
  std::vector<cplx> multiplier(const std::vector<cplx>& u,
                               const std::function<cplx(double)>& m) const;

  /// Signed wavenumber of Fourier slot j (FFTW ordering).
  double wavenumber(int j) const;

 private:
  int n_;
  double period_;
  void* plan_fwd_;
  void* plan_bwd_;
};

/// Trigonometric resampling of periodic samples onto a coarser/finer grid of
/// the same period (exact on resolved modes).
std::vector<cplx> resample_periodic(const std::vector<cplx>& u, int n_out);

/// Dense N x N matrix of -d^2/dz^2 on the periodic grid, spectrally exact for
/// resolved modes.  Row-major, symmetric.
std::vector<double> spectral_minus_d2_matrix(int n, double period = two_pi);

}  // namespace dwave
