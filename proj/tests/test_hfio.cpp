#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dwave/fourier.hpp"
#include "dwave/hfio.hpp"

using namespace dwave;
namespace {
const double kPi = std::numbers::pi;

std::vector<cplx> coherent(const HermiteBasisGrid& b, double x0) {
  std::vector<cplx> f(b.nodes().size());
  for (std::size_t j = 0; j < f.size(); ++j) {
    double x = b.nodes()[j];
    f[j] = std::exp(-(x - x0) * (x - x0) / (2.0 * b.h()));
  }
  return f;
}

double l2(const std::vector<cplx>& v, double dx) {
  double s = 0;
  for (auto& x : v) s += std::norm(x);
  return std::sqrt(s * dx);
}
}  // namespace

TEST_CASE("basis orthonormality and eigenvalue ladder") {
  HermiteBasisGrid b(128, 0.05);
  Eigen::MatrixXd gram(128, 128);
  Eigen::MatrixXd bm(b.nodes().size(), 128);
  for (int k = 0; k < 128; ++k) bm.col(k) = b.mode(k);
  gram = bm.transpose() * bm * b.dx();
  CHECK((gram - Eigen::MatrixXd::Identity(128, 128)).cwiseAbs().maxCoeff() <=
        1e-8);
  for (int k = 0; k + 1 < 128; ++k)
    CHECK(b.eigenvalue(k + 1) - b.eigenvalue(k) == doctest::Approx(0.05));
}

TEST_CASE("oscillator flow: identity, eigenmode phase, unitarity, group law") {
  HermiteBasisGrid b(256, 0.05);
  auto f = coherent(b, 1.0);

  auto id = fio_apply(0.0, f, b);
  double d0 = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) d0 = std::max(d0, std::abs(id[j] - f[j]));
  CHECK(d0 <= 1e-10 * l2(f, b.dx()));

  // eigenfunction picks up exactly e^{i t lambda_3 / h}
  std::vector<cplx> h3(b.nodes().size());
  for (std::size_t j = 0; j < h3.size(); ++j) h3[j] = b.mode(3)(j);
  double t = 0.8;
  auto h3t = fio_apply(t, h3, b);
  cplx phase = std::exp(cplx(0.0, t * b.eigenvalue(3) / b.h()));
  double dmax = 0.0;
  for (std::size_t j = 0; j < h3.size(); ++j)
    dmax = std::max(dmax, std::abs(h3t[j] - phase * h3[j]));
  CHECK(dmax <= 1e-9);

  auto g = fio_apply(0.7, f, b);
  CHECK(std::abs(l2(g, b.dx()) - l2(f, b.dx())) <= 1e-8 * l2(f, b.dx()));
  auto g2 = fio_apply(0.4, fio_apply(0.3, f, b), b);
  double dg = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) dg += std::norm(g2[j] - g[j]);
  CHECK(std::sqrt(dg * b.dx()) <= 1e-8 * l2(f, b.dx()));
}

TEST_CASE("phase-space rotation of a coherent state") {
  double h = 0.05;
  HermiteBasisGrid b(256, h);
  auto f = coherent(b, 1.0);
  auto g = fio_apply(kPi / 4.0, f, b);
  // moments <x> and <hD> (spectral derivative on the padded grid)
  PeriodicSpectral fft(static_cast<int>(b.nodes().size()), 2.0 * b.halfwidth());
  auto moments = [&](const std::vector<cplx>& u) {
    double n = 0, xm = 0, pm = 0;
    auto du = fft.derivative(u, 1);
    for (std::size_t j = 0; j < u.size(); ++j) {
      n += std::norm(u[j]);
      xm += b.nodes()[j] * std::norm(u[j]);
      pm += (std::conj(u[j]) * cplx(0, -h) * du[j]).real();
    }
    return std::pair{xm / n, pm / n};
  };
  auto [x0, p0] = moments(f);
  CHECK(x0 == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(std::abs(p0) <= 1e-8);
  auto [x1, p1] = moments(g);
  // the state moves along the inverse of the symbol pullback: the flow
  // e^{i t H / h} drives (x, hD) counterclockwise while symbols pull back
  // clockwise, so the mass center lands on R_{-pi/4} (x0, p0)
  CHECK(x1 == doctest::Approx(std::cos(kPi / 4)).epsilon(1e-6));
  CHECK(p1 == doctest::Approx(std::sin(kPi / 4)).epsilon(1e-6));
}

TEST_CASE("resolution guard") {
  HermiteBasisGrid b(64, 0.05);
  std::vector<cplx> top(b.nodes().size());
  for (std::size_t j = 0; j < top.size(); ++j) top[j] = b.mode(60)(j);
  CHECK_THROWS_AS((void)fio_apply(0.3, top, b), ResolutionError);
}

TEST_CASE("conjugation rule is exact at the discretization level") {
  for (double h : {0.1, 0.05, 0.025}) {
    HermiteBasisGrid b(256, h);
    auto f = coherent(b, 1.0);
    CHECK(egorov_check(f, b) <= 1e-8);
  }
  // ground state in closed form on both sides
  HermiteBasisGrid b(256, 0.1);
  std::vector<cplx> h0(b.nodes().size());
  for (std::size_t j = 0; j < h0.size(); ++j) h0[j] = b.mode(0)(j);
  CHECK(egorov_check(h0, b) <= 1e-10);
}

TEST_CASE("model solutions of the normal form") {
  double h = 0.02;
  cplx rho(-0.05, -h / 2.0);  // h/(2i) - E/2 at E = 0.1, F = 0
  // rho = h/(2i) - E/2 - iF/2 at E=0.1, F=0: real -0.05, imag -h/2
  CHECK(model_solution(0.5, cplx(0.0, 0.0), h, ModelBranch::plus) == cplx(1.0, 0.0));
  CHECK(model_solution(-0.5, cplx(0.0, 0.0), h, ModelBranch::plus) == cplx(0.0, 0.0));
  CHECK(model_solution(-0.5, cplx(0.0, 0.0), h, ModelBranch::minus) == cplx(1.0, 0.0));

  for (double x : {0.1, 0.5, 1.0, 2.0}) {
    double d = 1e-6 * x;
    cplx vp = model_solution(x + d, rho, h, ModelBranch::plus);
    cplx vm = model_solution(x - d, rho, h, ModelBranch::plus);
    cplx v = model_solution(x, rho, h, ModelBranch::plus);
    cplx dv = (vp - vm) / (2.0 * d);
    CHECK(std::abs(x * dv + cplx(0, 1) * rho / h * v) <= 1e-9 * std::abs(v) / h);
    // modulus law |v| = x^{Im rho / h}
    CHECK(std::abs(v) ==
          doctest::Approx(std::pow(x, rho.imag() / h)).epsilon(1e-12));
  }
}
