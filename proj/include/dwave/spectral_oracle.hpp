#pragma once

#include <Eigen/Dense>

#include <vector>

#include "dwave/geometry.hpp"
#include "dwave/numerics.hpp"
#include "dwave/quantize.hpp"

namespace dwave {

/// Per-angular-mode stationary operator, conjugated to the flat measure:
/// l_sym = -d2/dz2 + k^2 W + V1 (dense spectral discretization, symmetric),
/// together with the damping samples; self-adjoint for the R dz product in
/// the original variables.
struct ModeOperator {
  int k = 0;
  int n = 0;
  std::vector<double> z;
  Eigen::MatrixXd l_sym;
  Eigen::VectorXd a_diag;
  Eigen::VectorXd r_weight;  // R(z)
};

ModeOperator assemble_mode(int k, const SurfaceProfile& m,
                           const DampingProfile& a, int n);

struct ComplexBox {
  double re_lo, re_hi, im_lo, im_hi;
  bool contains(cplx t) const {
    return t.real() >= re_lo && t.real() <= re_hi && t.imag() >= im_lo &&
           t.imag() <= im_hi;
  }
};

struct OracleEigenpair {
  cplx tau;
  Eigen::VectorXcd psi;   // on the conjugated (flat-measure) grid
  double residual = 0.0;  // ||(-tau^2 + L + i tau a) psi|| / (|tau|^2 ||psi||)
  int parity = 0;         // +1 even, -1 odd
};

/// Quadratic pencil -tau^2 + L + i tau a by companion linearization in
/// s = i tau (real companion), dense eigensolve per parity sector.
std::vector<OracleEigenpair> qep_spectrum(const ModeOperator& op,
                                          const ComplexBox& window,
                                          double residual_tol = 1e-8);

/// Default window [k-2, k+2] x [-0.1, 1.1].
ComplexBox default_window(int k);

struct MatchResult {
  double distance = 0.0;
  cplx nearest;
  int index = -1;
};
MatchResult match_quasimode(const QuasiEigenvalue& pred,
                            const std::vector<OracleEigenpair>& spec);

/// Weighted-inner-product symmetry defect of the reconstructed original
/// operator on random vectors (should be at machine level).
double weighted_symmetry_defect(const ModeOperator& op, std::uint64_t seed = 7);

}  // namespace dwave
