#include "dwave/lapack.hpp"

#define LAPACK_COMPLEX_CPP
#include <lapacke.h>

#include <stdexcept>

namespace dwave {

RealEig eig_dense(const Eigen::MatrixXd& a, bool want_vectors) {
  const int n = static_cast<int>(a.rows());
  if (a.cols() != n) throw std::invalid_argument("eig_dense: not square");
  Eigen::MatrixXd work = a;
  std::vector<double> wr(n), wi(n);
  Eigen::MatrixXd vr(want_vectors ? n : 1, want_vectors ? n : 1);
  int info = LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', want_vectors ? 'V' : 'N', n,
                           work.data(), n, wr.data(), wi.data(), nullptr, 1,
                           vr.data(), want_vectors ? n : 1);
  if (info != 0) throw std::runtime_error("dgeev failed, info=" + std::to_string(info));
  RealEig out;
  out.values.resize(n);
  if (want_vectors) out.vectors.resize(n, n);
  for (int j = 0; j < n; ++j) {
    out.values[j] = {wr[j], wi[j]};
    if (!want_vectors) continue;
    if (wi[j] > 0.0 && j + 1 < n) {
      out.vectors.col(j) = vr.col(j).cast<cplx>() + cplx(0, 1) * vr.col(j + 1).cast<cplx>();
    } else if (wi[j] < 0.0 && j > 0) {
      out.vectors.col(j) = vr.col(j - 1).cast<cplx>() - cplx(0, 1) * vr.col(j).cast<cplx>();
    } else {
      out.vectors.col(j) = vr.col(j).cast<cplx>();
    }
  }
  return out;
}

SymEigRange eig_sym_range(const Eigen::MatrixXd& a, double vl, double vu) {
  const int n = static_cast<int>(a.rows());
  Eigen::MatrixXd work = a;
  std::vector<double> w(n);
  Eigen::MatrixXd z(n, n);
  std::vector<int> isuppz(2 * std::max(1, n));
  int m = 0;
  int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'V', 'L', n, work.data(), n,
                            vl, vu, 0, 0, 0.0, &m, w.data(), z.data(), n,
                            isuppz.data());
  if (info != 0) throw std::runtime_error("dsyevr failed, info=" + std::to_string(info));
  SymEigRange out;
  out.values.assign(w.begin(), w.begin() + m);
  out.vectors = z.leftCols(m);
  return out;
}

std::vector<double> eig_sym_values(const Eigen::MatrixXd& a) {
  const int n = static_cast<int>(a.rows());
  Eigen::MatrixXd work = a;
  std::vector<double> w(n);
  int info = LAPACKE_dsyev(LAPACK_COL_MAJOR, 'N', 'L', n, work.data(), n, w.data());
  if (info != 0) throw std::runtime_error("dsyev failed, info=" + std::to_string(info));
  return w;
}

TridiagLU::TridiagLU(std::vector<cplx> diag, std::vector<cplx> lower,
                     std::vector<cplx> upper, cplx corner_ul, cplx corner_ll)
    : n_(static_cast<int>(diag.size())),
      cyclic_(corner_ul != 0.0 || corner_ll != 0.0),
      alpha_(corner_ul),
      beta_(corner_ll),
      dl_(std::move(lower)),
      d_(std::move(diag)),
      du_(std::move(upper)) {
  if (static_cast<int>(dl_.size()) != n_ - 1 ||
      static_cast<int>(du_.size()) != n_ - 1)
    throw std::invalid_argument("TridiagLU: band size mismatch");
  du2_.resize(std::max(0, n_ - 2));
  ipiv_.resize(n_);
  int info = LAPACKE_zgttrf(n_, reinterpret_cast<lapack_complex_double*>(dl_.data()),
                            reinterpret_cast<lapack_complex_double*>(d_.data()),
                            reinterpret_cast<lapack_complex_double*>(du_.data()),
                            reinterpret_cast<lapack_complex_double*>(du2_.data()),
                            ipiv_.data());
  if (info != 0) throw std::runtime_error("zgttrf failed, info=" + std::to_string(info));
  if (!cyclic_) return;

  // Woodbury data: A_cyc = A_tri + u0 v0^T + u1 v1^T with
  // u0 = alpha e_0, v0 = e_{n-1}; u1 = beta e_{n-1}, v1 = e_0.
  std::vector<cplx> e(n_, 0.0);
  e[0] = alpha_;
  ainv_u0_ = solve_tri(e, 'N');
  e[0] = 0.0;
  e[n_ - 1] = beta_;
  ainv_u1_ = solve_tri(e, 'N');
  e[n_ - 1] = 1.0;
  ainvh_v0_ = solve_tri(e, 'C');  // A^{-*} v0
  e[n_ - 1] = 0.0;
  e[0] = 1.0;
  ainvh_v1_ = solve_tri(e, 'C');  // A^{-*} v1
  // capacitance for A x = b:  C = I + V^T A^{-1} U, rows ~ (v0, v1)
  cap_ << 1.0 + ainv_u0_[n_ - 1], ainv_u1_[n_ - 1],
      ainv_u0_[0], 1.0 + ainv_u1_[0];
  // capacitance for A^* x = b: A^* = A_tri^* + conj(v0) conj(u0)^T + ...
  // columns U~ = (conj-v scaled), but v are real units, so
  // C_h = I + U^H A^{-*} V with U columns (alpha e_0, beta e_{n-1}).
  cap_h_ << 1.0 + std::conj(alpha_) * ainvh_v0_[0],
      std::conj(alpha_) * ainvh_v1_[0],
      std::conj(beta_) * ainvh_v0_[n_ - 1],
      1.0 + std::conj(beta_) * ainvh_v1_[n_ - 1];
}

std::vector<cplx> TridiagLU::solve_tri(const std::vector<cplx>& b,
                                       char trans) const {
  std::vector<cplx> x = b;
  int info = LAPACKE_zgttrs(
      LAPACK_COL_MAJOR, trans, n_, 1,
      reinterpret_cast<const lapack_complex_double*>(dl_.data()),
      reinterpret_cast<const lapack_complex_double*>(d_.data()),
      reinterpret_cast<const lapack_complex_double*>(du_.data()),
      reinterpret_cast<const lapack_complex_double*>(du2_.data()), ipiv_.data(),
      reinterpret_cast<lapack_complex_double*>(x.data()), n_);
  if (info != 0) throw std::runtime_error("zgttrs failed");
  return x;
}

std::vector<cplx> TridiagLU::solve(const std::vector<cplx>& b) const {
  std::vector<cplx> t = solve_tri(b, 'N');
  if (!cyclic_) return t;
  Eigen::Vector2cd s(t[n_ - 1], t[0]);
  Eigen::Vector2cd y = cap_.colPivHouseholderQr().solve(s);
  for (int i = 0; i < n_; ++i) t[i] -= ainv_u0_[i] * y(0) + ainv_u1_[i] * y(1);
  return t;
}

std::vector<cplx> TridiagLU::solve_adjoint(const std::vector<cplx>& b) const {
  std::vector<cplx> t = solve_tri(b, 'C');
  if (!cyclic_) return t;
  Eigen::Vector2cd s(std::conj(alpha_) * t[0], std::conj(beta_) * t[n_ - 1]);
  Eigen::Vector2cd y = cap_h_.colPivHouseholderQr().solve(s);
  for (int i = 0; i < n_; ++i)
    t[i] -= ainvh_v0_[i] * y(0) + ainvh_v1_[i] * y(1);
  return t;
}

}  // namespace dwave
