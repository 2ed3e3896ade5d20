#pragma once

#include <Eigen/Dense>

#include <vector>

#include "dwave/numerics.hpp"

namespace dwave {

struct ResolutionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Sampled eigenbasis of the semiclassical oscillator (1/2)((hD)^2 + x^2) on
/// a uniform grid of [-L, L]; eigenvalue of mode k is h(k + 1/2).
class HermiteBasisGrid {
 public:
  HermiteBasisGrid(int n_modes, double h, int grid_points = 0);

  int modes() const { return n_modes_; }
  double h() const { return h_; }
  double halfwidth() const { return half_l_; }
  double dx() const { return dx_; }
  const std::vector<double>& nodes() const { return x_; }
  double eigenvalue(int k) const { return h_ * (k + 0.5); }
  /// mode k sampled on the grid
  Eigen::VectorXd mode(int k) const { return basis_.col(k); }

  std::vector<cplx> coefficients(const std::vector<cplx>& f) const;
  std::vector<cplx> synthesize(const std::vector<cplx>& coef) const;
  /// relative l2 mass of coefficients beyond mode n_modes/2
  double tail_mass(const std::vector<cplx>& f) const;

 private:
  int n_modes_;
  double h_;
  double half_l_;
  double dx_;
  std::vector<double> x_;
  Eigen::MatrixXd basis_;  // grid_points x n_modes
};

/// I(t) f = sum_k e^{i t lambda_k / h} <f, H_k> H_k.  Throws ResolutionError
/// when the coefficient tail of f exceeds tail_tol.
std::vector<cplx> fio_apply(double t, const std::vector<cplx>& f,
                            const HermiteBasisGrid& basis,
                            double tail_tol = 1e-10);

/// || I(pi/4)((hD)^2 - x^2) f + 2 (x hD + h/(2i)) I(pi/4) f || / ||f||:
/// zero up to discretization for the exact oscillator conjugation.
double egorov_check(const std::vector<cplx>& f, const HermiteBasisGrid& basis,
                    double tail_tol = 1e-10);

/// Homogeneous model solutions of (x d/dx + i rho/h) v = 0:
/// v_+ = 1_{x>0} x^{-i rho/h}, v_- (x) = v_+(-x); same formula in the
/// frequency representation.
enum class ModelBranch { plus, minus };
enum class ModelRep { position, frequency };
cplx model_solution(double x, cplx rho, double h, ModelBranch branch,
                    ModelRep rep = ModelRep::position);

}  // namespace dwave
