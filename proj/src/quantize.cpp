#include "dwave/quantize.hpp"

#include <cmath>

#include "dwave/wkb.hpp"

namespace dwave {

std::pair<int, double> bohr_sommerfeld_custom(
    int k, const std::function<double(double)>& action, double e_max,
    double eta) {
  double b0 = action(0.0);
  double bmax = action(e_max);
  if (two_pi / k >= bmax - b0)
    throw std::invalid_argument("bohr_sommerfeld: k too small for the window");
  int m = static_cast<int>(std::ceil((b0 + eta) * k / two_pi));
  double target = two_pi * m / k;
  if (target <= b0) {  // guard against eta rounding
    ++m;
    target = two_pi * m / k;
  }
  if (target > bmax)
    throw NoRootError("bohr_sommerfeld: 2 pi m / k beyond B(e_max)");
  double e = bisect([&](double x) { return action(x) - target; }, 0.0, e_max,
                    1e-12, 1e-15);
  return {m, e};
}

std::pair<int, double> bohr_sommerfeld(int k, const SurfaceProfile& m,
                                       double e_max, double eta) {
  return bohr_sommerfeld_custom(
      k, [&](double e) { return loop_action(m, e); }, e_max, eta);
}

double determine_F(double E, double h, const DampingProfile& a,
                   const SurfaceProfile& m, double eps) {
  if (E <= 0.0 || E >= 1.0)
    throw std::domain_error("determine_F: need 0 < E < 1");
  double c1 = damping_exposure(m, a, E, eps);
  return 2.0 * h * c1 / std::abs(std::log(E));
}

std::vector<QuasiEigenvalue> quasi_eigenvalue_sequence(
    const std::vector<int>& k_list, const SurfaceProfile& m,
    const DampingProfile& a, double eps, double e_max, int k_min) {
  std::vector<QuasiEigenvalue> out;
  out.reserve(k_list.size());
  for (int k : k_list) {
    if (k < k_min)
      throw std::invalid_argument("quasi_eigenvalue_sequence: k below k_min");
    QuasiEigenvalue q;
    q.k = k;
    q.h = 1.0 / k;
    auto [mm, e] = bohr_sommerfeld(k, m, e_max);
    q.m = mm;
    q.E = e;
    q.F = determine_F(e, q.h, a, m, eps);
    q.mu = std::sqrt(cplx(1.0 + q.E, q.F));
    q.tau = q.mu / q.h;
    out.push_back(q);
  }
  return out;
}

}  // namespace dwave
