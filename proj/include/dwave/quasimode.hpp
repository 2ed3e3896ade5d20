#pragma once

#include <optional>
#include <vector>

#include "dwave/geometry.hpp"
#include "dwave/numerics.hpp"
#include "dwave/wkb.hpp"

namespace dwave {

struct QuasimodeOptions {
  double eps = 0.25;              // gluing abscissa, <= glue halfwidth
  int points_per_wavelength = 40;
  bool refine = true;             // tune (E, F) on the midpoint symmetry defect
  double refine_tol = 1e-10;
  int max_newton = 16;
  double e_max = 0.5;
  double cond_limit = 1e8;
};

/// Even/odd solutions of the exact barrier model
/// ((hD)^2 - z^2 - E - iF) psi = 0 with data (1,0) / (0,1) at z = 0.
struct InnerSamples {
  std::vector<double> z;
  std::vector<cplx> even, even_d;
  std::vector<cplx> odd, odd_d;
};
InnerSamples inner_solve(const SpectralSplit& s, const std::vector<double>& pts);

struct Quasimode {
  int k = 0;
  double h = 0.0;
  int m = 0;
  double E = 0.0, F = 0.0;    // parameters of the build (refined when enabled)
  double E0 = 0.0, F0 = 0.0;  // leading-order quantization seeds
  cplx mu;
  double eps = 0.0;
  std::vector<double> z;  // uniform nodes on [0, 2pi)
  std::vector<cplx> u;    // unit discrete L2(dz) norm
  // gluing diagnostics
  cplx seam_even, seam_odd;     // inner-copy coefficients at the 2pi seam
  double mismatch_value = 0.0;  // sup |v(z+2pi) - v(z)| on the overlap
  double mismatch_deriv = 0.0;  // sup |d/dz (v(z+2pi) - v(z))|
  double matching_cond = 0.0;
  double refine_defect = 0.0;  // |h v'(pi)/v(pi)| after tuning
  double residual_l2 = -1.0;
};

/// Full pipeline: leading-order quantization, inner/outer gluing, optional
/// (E, F) refinement, chi-periodization, normalization.
Quasimode build_quasimode(const SurfaceProfile& m, const DampingProfile& a,
                          int k, const QuasimodeOptions& opt = {});

/// || P^h_{mu,a} u || / || u || with the conjugated operator
/// (hD)^2 + W - mu^2 + h^2 V1 + i h mu a, spectral differentiation.
/// mu_override detunes the operator for negative controls.
double quasimode_residual(const Quasimode& q, const SurfaceProfile& m,
                          const DampingProfile& a,
                          std::optional<cplx> mu_override = std::nullopt);

/// Periodization bump: chi(z) rises 0 -> 1 on [0, eps], is 1 on [eps, 2pi],
/// falls on [2pi, 2pi + eps] with chi(z) + chi(z + 2pi) = 1 exactly.
double chi_weight(double z, double eps);

}  // namespace dwave
