#pragma once

#include <vector>

#include "dwave/geometry.hpp"
#include "dwave/numerics.hpp"

namespace dwave {

/// One quasi-eigenvalue of the stationary damped wave operator at angular
/// mode k: mu^2 = 1 + E + iF, tau = mu/h, h = 1/k.
struct QuasiEigenvalue {
  int k = 0;
  double h = 0.0;
  int m = 0;  // loop-action quantization integer
  double E = 0.0;
  double F = 0.0;
  cplx mu;
  cplx tau;
};

struct NoRootError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Smallest m with 2 pi m / k >= B(0) + eta and the root of
/// B(E) = 2 pi m / k in (0, e_max]; B is increasing so the root is unique.
std::pair<int, double> bohr_sommerfeld(int k, const SurfaceProfile& m,
                                       double e_max = 0.5, double eta = 1e-8);

/// Synthetic-solver variant for unit tests: same bracketing/bisection logic
/// against a caller-supplied increasing action function.
std::pair<int, double> bohr_sommerfeld_custom(
    int k, const std::function<double(double)>& action, double e_max,
    double eta = 1e-8);

/// Leading-order imaginary shift F = 2 h c1(a,E) / |log E|.
double determine_F(double E, double h, const DampingProfile& a,
                   const SurfaceProfile& m, double eps);

std::vector<QuasiEigenvalue> quasi_eigenvalue_sequence(
    const std::vector<int>& k_list, const SurfaceProfile& m,
    const DampingProfile& a, double eps, double e_max = 0.5, int k_min = 50);

}  // namespace dwave
