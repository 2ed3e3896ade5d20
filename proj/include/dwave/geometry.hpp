#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "dwave/numerics.hpp"

namespace dwave {

/// Surface of revolution with warp R(z), 2pi-periodic and even in z.
/// The effective potential W = R^{-2} equals 1 - z^2 exactly for
/// |z| <= glue_halfwidth and blends smoothly into the background family
/// (2 - cos z)^{-2}, so the barrier top at z = 0 is exactly quadratic and
/// the only other critical point per period is the minimum at z = pi.
class SurfaceProfile {
 public:
  enum class Family { cosine_lump };

  explicit SurfaceProfile(double glue_halfwidth = 0.3, double blend_width = 0.3,
                          Family family = Family::cosine_lump);

  struct Eval {
    double R, dR, d2R, W, dW, d2W;
  };
  Eval eval(double z) const;

  double W(double z) const { return eval(z).W; }
  double R(double z) const { return eval(z).R; }

  /// V1 with R^{1/2}(-R^{-1} d/dz R d/dz)R^{-1/2} = -d2/dz2 + V1.
  double subpotential(double z) const;

  double glue_halfwidth() const { return zg_; }
  double blend_width() const { return wb_; }
  Family family() const { return family_; }

  std::map<std::string, std::string> to_config() const;
  static SurfaceProfile from_config(const std::map<std::string, std::string>& kv);

 private:
  double zg_;
  double wb_;
  Family family_;
};

/// V1 from pointwise W, W', W'' (conjugation by R^{1/2} in closed form).
double subpotential_from_w(double w, double dw, double d2w);

/// Damping coefficient a(z) >= 0, even and 2pi-periodic on the circle or a
/// plain function of x on interval models.
class DampingProfile {
 public:
  enum class Kind {
    ramp,       // 0 on |z|<=flat, rises like s^k, saturates smoothly at 1
    constant,   // a = level everywhere
    pure_power  // ((|z|-flat)/width)_+^k, unbounded; for hypothesis tests
  };
  enum class Domain { circle_z, interval_x };

  static DampingProfile ramp_profile(double flat_halfwidth = 0.5,
                                     double ramp_width = 0.4,
                                     int vanishing_order = 8,
                                     Domain domain = Domain::circle_z);
  static DampingProfile constant_profile(double level,
                                         Domain domain = Domain::circle_z);
  static DampingProfile power_profile(double flat_halfwidth, double ramp_width,
                                      int vanishing_order,
                                      Domain domain = Domain::interval_x);

  double a(double z) const;
  double da(double z) const;
  double d2a(double z) const;

  Kind kind() const { return kind_; }
  Domain domain() const { return domain_; }
  double flat_halfwidth() const { return flat_; }
  double ramp_width() const { return width_; }
  int vanishing_order() const { return order_; }
  double level() const { return level_; }
  double sup() const;  // max of a

  std::map<std::string, std::string> to_config() const;
  static DampingProfile from_config(const std::map<std::string, std::string>& kv);

 private:
  DampingProfile() = default;
  Kind kind_ = Kind::ramp;
  Domain domain_ = Domain::circle_z;
  double flat_ = 0.5;
  double width_ = 0.4;
  int order_ = 8;
  double level_ = 1.0;
};

/// Smallest constants C_alpha with |d^alpha a| <= C_alpha a^{(k-alpha)/k} on
/// the grid, derivatives by centered differences.  The damping hypothesis
/// needs some k > 2, so declared orders <= 2 are probed at k = 3.
struct DampingRegularity {
  bool pass = false;
  double c0 = 0.0, c1 = 0.0, c2 = 0.0;
  double k_used = 0.0;
};
DampingRegularity check_damping_regularity(const DampingProfile& a,
                                           std::span<const double> grid,
                                           double cap = 1e4,
                                           double fd_step = 1e-4);

enum class ControlStatus { perfect, imperfect_at_z0 };

/// On the torus reduction the geodesic z = 0 is trapped: damping vanishing
/// near z = 0 never controls it.  On interval/circle 1d models every
/// unit-speed geodesic sweeps the whole domain.
ControlStatus control_status(const DampingProfile& a, const SurfaceProfile& m);

/// Sampled export rows (z, R, W, a).
std::vector<std::array<double, 4>> sample_profiles(const SurfaceProfile& m,
                                                   const DampingProfile& a,
                                                   int n);

}  // namespace dwave
