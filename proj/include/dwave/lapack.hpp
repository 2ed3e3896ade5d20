#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

#include "dwave/numerics.hpp"

namespace dwave {

/// Eigenvalues + right eigenvectors of a real dense matrix (LAPACK dgeev).
struct RealEig {
  std::vector<cplx> values;
  Eigen::MatrixXcd vectors;  // column i pairs with values[i]
};
RealEig eig_dense(const Eigen::MatrixXd& a, bool want_vectors = true);

/// Selected eigenpairs of a dense symmetric matrix with eigenvalues in
/// (vl, vu] (LAPACK dsyevr).
struct SymEigRange {
  std::vector<double> values;
  Eigen::MatrixXd vectors;
};
SymEigRange eig_sym_range(const Eigen::MatrixXd& a, double vl, double vu);

/// All eigenvalues (no vectors) of a dense symmetric matrix.
std::vector<double> eig_sym_values(const Eigen::MatrixXd& a);

/// LU-factored complex tridiagonal system with optional periodic corner
/// entries, solved by Woodbury rank-2 correction.  Supports A x = b and
/// A^* x = b from one factorization.
class TridiagLU {
 public:
  /// diag has n entries, lower/upper have n-1; corner_ul = A(0, n-1),
  /// corner_ll = A(n-1, 0); pass 0 for an open (Dirichlet) chain.
  TridiagLU(std::vector<cplx> diag, std::vector<cplx> lower,
            std::vector<cplx> upper, cplx corner_ul = 0.0, cplx corner_ll = 0.0);

  int size() const { return n_; }
  std::vector<cplx> solve(const std::vector<cplx>& b) const;
  std::vector<cplx> solve_adjoint(const std::vector<cplx>& b) const;

 private:
  std::vector<cplx> solve_tri(const std::vector<cplx>& b, char trans) const;

  int n_;
  bool cyclic_;
  cplx alpha_, beta_;  // corner values (0,n-1) and (n-1,0)
  std::vector<cplx> dl_, d_, du_, du2_;
  std::vector<int> ipiv_;
  // precomputed A_tri^{-1} U and A_tri^{-*} V columns + 2x2 capacitances
  std::vector<cplx> ainv_u0_, ainv_u1_, ainvh_v0_, ainvh_v1_;
  Eigen::Matrix2cd cap_, cap_h_;
};

}  // namespace dwave
