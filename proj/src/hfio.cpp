#include "dwave/hfio.hpp"

#include <cmath>
#include <numbers>

#include "dwave/fourier.hpp"

namespace dwave {

HermiteBasisGrid::HermiteBasisGrid(int n_modes, double h, int grid_points)
    : n_modes_(n_modes), h_(h) {
  if (n_modes < 4 || h <= 0.0)
    throw std::invalid_argument("HermiteBasisGrid: bad parameters");
  half_l_ = std::max(8.0, 6.0 * std::sqrt(n_modes * h));
  if (grid_points <= 0) {
    // resolve the fastest oscillation ~ exp(i x sqrt(2 h n)/h)
    double ximax = std::sqrt(2.0 * h * n_modes);
    int m = static_cast<int>(std::ceil(3.0 * half_l_ * ximax / (std::numbers::pi * h)));
    grid_points = ((m / 256) + 2) * 256;
  }
  int np = grid_points;
  dx_ = 2.0 * half_l_ / np;  // periodic grid, right endpoint omitted
  x_.resize(np);
  for (int j = 0; j < np; ++j) x_[j] = -half_l_ + j * dx_;
  basis_.resize(np, n_modes);
  // stable normalized three-term recurrence in xi = x / sqrt(h)
  const double norm0 = std::pow(std::numbers::pi * h, -0.25);
  for (int j = 0; j < np; ++j) {
    double xi = x_[j] / std::sqrt(h);
    double p0 = norm0 * std::exp(-0.5 * xi * xi);
    double p1 = std::sqrt(2.0) * xi * p0;
    basis_(j, 0) = p0;
    if (n_modes > 1) basis_(j, 1) = p1;
    for (int k = 2; k < n_modes; ++k) {
      double pk = std::sqrt(2.0 / k) * xi * p1 - std::sqrt((k - 1.0) / k) * p0;
      basis_(j, k) = pk;
      p0 = p1;
      p1 = pk;
    }
  }
}

std::vector<cplx> HermiteBasisGrid::coefficients(const std::vector<cplx>& f) const {
  if (static_cast<int>(f.size()) != basis_.rows())
    throw std::invalid_argument("HermiteBasisGrid: sample size mismatch");
  Eigen::VectorXcd fv = Eigen::Map<const Eigen::VectorXcd>(f.data(), f.size());
  Eigen::VectorXcd c = basis_.transpose().cast<cplx>() * fv * dx_;
  return {c.data(), c.data() + c.size()};
}

std::vector<cplx> HermiteBasisGrid::synthesize(const std::vector<cplx>& coef) const {
  Eigen::VectorXcd cv = Eigen::Map<const Eigen::VectorXcd>(coef.data(), coef.size());
  Eigen::VectorXcd f = basis_.cast<cplx>() * cv;
  return {f.data(), f.data() + f.size()};
}

double HermiteBasisGrid::tail_mass(const std::vector<cplx>& f) const {
  auto c = coefficients(f);
  double head = 0.0, tail = 0.0;
  for (int k = 0; k < n_modes_; ++k) {
    double m = std::norm(c[k]);
    (k < n_modes_ / 2 ? head : tail) += m;
  }
  return head + tail > 0.0 ? tail / (head + tail) : 0.0;
}

std::vector<cplx> fio_apply(double t, const std::vector<cplx>& f,
                            const HermiteBasisGrid& basis, double tail_tol) {
  if (basis.tail_mass(f) > tail_tol)
    throw ResolutionError("fio_apply: input not resolved by the first half of the basis");
  auto c = basis.coefficients(f);
  for (int k = 0; k < basis.modes(); ++k)
    c[k] *= std::exp(cplx(0.0, t * basis.eigenvalue(k) / basis.h()));
  return basis.synthesize(c);
}

namespace {

double l2_norm(const std::vector<cplx>& v, double dx) {
  double s = 0.0;
  for (auto& x : v) s += std::norm(x);
  return std::sqrt(s * dx);
}

}  // namespace

double egorov_check(const std::vector<cplx>& f, const HermiteBasisGrid& basis,
                    double tail_tol) {
  const int np = static_cast<int>(basis.nodes().size());
  const double h = basis.h();
  const double pi4 = std::numbers::pi / 4.0;
  PeriodicSpectral fft(np, 2.0 * basis.halfwidth());

  auto hd = [&](const std::vector<cplx>& u) {  // h D u, D = -i d/dx
    auto du = fft.derivative(u, 1);
    for (auto& v : du) v *= cplx(0.0, -h);
    return du;
  };
  auto op_a = [&](const std::vector<cplx>& u) {  // (hD)^2 - x^2
    auto d2 = fft.derivative(u, 2);
    std::vector<cplx> out(u.size());
    for (int j = 0; j < np; ++j) {
      double x = basis.nodes()[j];
      out[j] = -h * h * d2[j] - x * x * u[j];
    }
    return out;
  };
  auto op_b = [&](const std::vector<cplx>& u) {  // -2 (x hD + h/(2i))
    auto du = hd(u);
    std::vector<cplx> out(u.size());
    for (int j = 0; j < np; ++j)
      out[j] = -2.0 * (basis.nodes()[j] * du[j] + cplx(0.0, -0.5 * h) * u[j]);
    return out;
  };

  auto lhs = fio_apply(pi4, op_a(f), basis, tail_tol);
  auto rhs = op_b(fio_apply(pi4, f, basis, tail_tol));
  std::vector<cplx> diff(lhs.size());
  for (std::size_t j = 0; j < lhs.size(); ++j) diff[j] = lhs[j] - rhs[j];
  return l2_norm(diff, basis.dx()) / l2_norm(f, basis.dx());
}

cplx model_solution(double x, cplx rho, double h, ModelBranch branch,
                    ModelRep) {
  double arg = branch == ModelBranch::plus ? x : -x;
  if (arg <= 0.0) return 0.0;
  // x^{-i rho/h} = exp(-i rho log(x) / h)
  return std::exp(cplx(0.0, -1.0) * (rho / h) * std::log(arg));
}

}  // namespace dwave
