#include "dwave/geometry.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace dwave {

namespace {

struct W3 {
  double w, dw, d2w;  // value and derivatives in s = |z|
};

W3 background_w(double s) {
  // (2 - cos s)^{-2}; osculates 1 - s^2 to second order at s = 0
  double u = 2.0 - std::cos(s);
  double su = std::sin(s);
  double cu = std::cos(s);
  double u3 = u * u * u;
  double u4 = u3 * u;
  return {1.0 / (u * u), -2.0 * su / u3, 6.0 * su * su / u4 - 2.0 * cu / u3};
}

W3 quadratic_w(double s) { return {1.0 - s * s, -2.0 * s, -2.0}; }

}  // namespace

SurfaceProfile::SurfaceProfile(double glue_halfwidth, double blend_width,
                               Family family)
    : zg_(glue_halfwidth), wb_(blend_width), family_(family) {
  if (zg_ <= 0.0 || wb_ <= 0.0 || zg_ + wb_ >= 3.0)
    throw std::invalid_argument("SurfaceProfile: bad blend window");
}

SurfaceProfile::Eval SurfaceProfile::eval(double z) const {
  double zw = wrap_angle(z);
  double s = std::abs(zw);
  double sgn = zw < 0.0 ? -1.0 : 1.0;

  W3 w3;
  if (s <= zg_) {
    w3 = quadratic_w(s);
  } else if (s >= zg_ + wb_) {
    w3 = background_w(s);
  } else {
    SmoothStep step;
    double t = (s - zg_) / wb_;
    double m = step.value(t);
    double dm = step.deriv(t) / wb_;
    double d2m = step.deriv2(t) / (wb_ * wb_);
    W3 q = quadratic_w(s);
    W3 b = background_w(s);
    w3.w = (1.0 - m) * q.w + m * b.w;
    w3.dw = (1.0 - m) * q.dw + m * b.dw + dm * (b.w - q.w);
    w3.d2w = (1.0 - m) * q.d2w + m * b.d2w + 2.0 * dm * (b.dw - q.dw) +
             d2m * (b.w - q.w);
  }

  Eval e;
  e.W = w3.w;
  e.dW = sgn * w3.dw;
  e.d2W = w3.d2w;
  // R = W^{-1/2}
  double wm32 = std::pow(w3.w, -1.5);
  e.R = 1.0 / std::sqrt(w3.w);
  e.dR = -0.5 * wm32 * e.dW;
  e.d2R = 0.75 * std::pow(w3.w, -2.5) * e.dW * e.dW - 0.5 * wm32 * e.d2W;
  return e;
}

double subpotential_from_w(double w, double dw, double d2w) {
  double r = dw / w;
  return (5.0 / 16.0) * r * r - 0.25 * d2w / w;
}

double SurfaceProfile::subpotential(double z) const {
  Eval e = eval(z);
  return subpotential_from_w(e.W, e.dW, e.d2W);
}

std::map<std::string, std::string> SurfaceProfile::to_config() const {
  return {{"family", "cosine_lump"},
          {"z_g", std::to_string(zg_)},
          {"blend_width", std::to_string(wb_)}};
}

SurfaceProfile SurfaceProfile::from_config(
    const std::map<std::string, std::string>& kv) {
  double zg = kv.count("z_g") ? std::stod(kv.at("z_g")) : 0.3;
  double wb = kv.count("blend_width") ? std::stod(kv.at("blend_width")) : 0.3;
  if (kv.count("family") && kv.at("family") != "cosine_lump")
    throw std::invalid_argument("unknown geometry family: " + kv.at("family"));
  return SurfaceProfile(zg, wb);
}

// ---------------------------------------------------------------------------

DampingProfile DampingProfile::ramp_profile(double flat_halfwidth,
                                            double ramp_width,
                                            int vanishing_order,
                                            Domain domain) {
  DampingProfile p;
  p.kind_ = Kind::ramp;
  p.domain_ = domain;
  p.flat_ = flat_halfwidth;
  p.width_ = ramp_width;
  p.order_ = vanishing_order;
  if (flat_halfwidth < 0 || ramp_width <= 0 || vanishing_order < 1)
    throw std::invalid_argument("DampingProfile: bad ramp parameters");
  return p;
}

DampingProfile DampingProfile::constant_profile(double level, Domain domain) {
  DampingProfile p;
  p.kind_ = Kind::constant;
  p.domain_ = domain;
  p.level_ = level;
  p.flat_ = 0.0;
  if (level < 0) throw std::invalid_argument("DampingProfile: negative level");
  return p;
}

DampingProfile DampingProfile::power_profile(double flat_halfwidth,
                                             double ramp_width,
                                             int vanishing_order,
                                             Domain domain) {
  DampingProfile p = ramp_profile(std::max(flat_halfwidth, 0.0),
                                  ramp_width, vanishing_order, domain);
  p.kind_ = Kind::pure_power;
  return p;
}

namespace {
// s^k / (s^k + (1-s)^k) on [0,1]: contact of order k at 0, order k at 1.
struct RampEval {
  double v, d1, d2;
};
RampEval rational_ramp(double s, int k) {
  if (s <= 0.0) return {0.0, 0.0, 0.0};
  if (s >= 1.0) return {1.0, 0.0, 0.0};
  double t = 1.0 - s;
  double sk = std::pow(s, k);
  double tk = std::pow(t, k);
  double d = sk + tk;
  double skm = std::pow(s, k - 1);
  double tkm = std::pow(t, k - 1);
  double v = sk / d;
  double d1 = k * skm * tkm / (d * d);
  double skm2 = std::pow(s, k - 2);
  double tkm2 = std::pow(t, k - 2);
  double d2 = k * (k - 1) * skm2 * tkm2 * (t - s) / (d * d) -
              2.0 * k * k * skm * tkm * (skm - tkm) / (d * d * d);
  return {v, d1, d2};
}
}  // namespace

double DampingProfile::a(double z) const {
  if (kind_ == Kind::constant) return level_;
  double x = domain_ == Domain::circle_z ? std::abs(wrap_angle(z)) : std::abs(z);
  double s = (x - flat_) / width_;
  if (kind_ == Kind::pure_power) {
    return s > 0.0 ? std::pow(s, order_) : 0.0;
  }
  return rational_ramp(s, order_).v;
}

double DampingProfile::da(double z) const {
  if (kind_ == Kind::constant) return 0.0;
  double zw = domain_ == Domain::circle_z ? wrap_angle(z) : z;
  double sgn = zw < 0.0 ? -1.0 : 1.0;
  double x = std::abs(zw);
  double s = (x - flat_) / width_;
  if (kind_ == Kind::pure_power)
    return s > 0.0 ? sgn * order_ * std::pow(s, order_ - 1) / width_ : 0.0;
  return sgn * rational_ramp(s, order_).d1 / width_;
}

double DampingProfile::d2a(double z) const {
  if (kind_ == Kind::constant) return 0.0;
  double x = domain_ == Domain::circle_z ? std::abs(wrap_angle(z)) : std::abs(z);
  double s = (x - flat_) / width_;
  if (kind_ == Kind::pure_power)
    return s > 0.0
               ? order_ * (order_ - 1) * std::pow(s, order_ - 2) / (width_ * width_)
               : 0.0;
  return rational_ramp(s, order_).d2 / (width_ * width_);
}

double DampingProfile::sup() const {
  if (kind_ == Kind::constant) return level_;
  if (kind_ == Kind::ramp) return 1.0;
  double reach = domain_ == Domain::circle_z ? 3.14159265358979323846 : 10.0;
  return a(reach);
}

std::map<std::string, std::string> DampingProfile::to_config() const {
  std::map<std::string, std::string> kv;
  kv["kind"] = kind_ == Kind::ramp       ? "ramp"
               : kind_ == Kind::constant ? "constant"
                                         : "pure_power";
  kv["domain"] = domain_ == Domain::circle_z ? "circle_z" : "interval_x";
  kv["z_a"] = std::to_string(flat_);
  kv["w"] = std::to_string(width_);
  kv["k_van"] = std::to_string(order_);
  kv["level"] = std::to_string(level_);
  return kv;
}

DampingProfile DampingProfile::from_config(
    const std::map<std::string, std::string>& kv) {
  auto get = [&](const char* key, double dflt) {
    return kv.count(key) ? std::stod(kv.at(key)) : dflt;
  };
  Domain dom = Domain::circle_z;
  if (kv.count("domain") && kv.at("domain") == "interval_x")
    dom = Domain::interval_x;
  std::string kind = kv.count("kind") ? kv.at("kind") : "ramp";
  if (kind == "constant") return constant_profile(get("level", 1.0), dom);
  double za = get("z_a", 0.5);
  double w = get("w", 0.4);
  int kvan = static_cast<int>(get("k_van", 8));
  if (kind == "pure_power") return power_profile(za, w, kvan, dom);
  return ramp_profile(za, w, kvan, dom);
}

// ---------------------------------------------------------------------------

DampingRegularity check_damping_regularity(const DampingProfile& a,
                                           std::span<const double> grid,
                                           double cap, double fd_step) {
  DampingRegularity out;
  int k = a.vanishing_order();
  if (a.kind() == DampingProfile::Kind::constant) k = 3;
  out.k_used = k > 2 ? k : 3.0;  // hypothesis requires some k > 2
  const double kk = out.k_used;
  const double floor_a = 1e-12;
  double c0 = 0.0, c1 = 0.0, c2 = 0.0;
  for (double x : grid) {
    double v = a.a(x);
    if (v < floor_a) continue;
    double vp = (a.a(x + fd_step) - a.a(x - fd_step)) / (2.0 * fd_step);
    double vpp =
        (a.a(x + fd_step) - 2.0 * v + a.a(x - fd_step)) / (fd_step * fd_step);
    c0 = std::max(c0, v / std::pow(v, (kk - 0.0) / kk));
    c1 = std::max(c1, std::abs(vp) / std::pow(v, (kk - 1.0) / kk));
    c2 = std::max(c2, std::abs(vpp) / std::pow(v, (kk - 2.0) / kk));
  }
  out.c0 = c0;
  out.c1 = c1;
  out.c2 = c2;
  out.pass = (a.vanishing_order() > 2 || a.kind() == DampingProfile::Kind::constant) &&
             c0 <= cap && c1 <= cap && c2 <= cap;
  return out;
}

ControlStatus control_status(const DampingProfile& a, const SurfaceProfile&) {
  if (a.domain() == DampingProfile::Domain::circle_z) {
    // trapped geodesic at z = 0
    double sup_near0 = 0.0;
    for (int i = -8; i <= 8; ++i) sup_near0 = std::max(sup_near0, a.a(i * 1e-3));
    return sup_near0 == 0.0 ? ControlStatus::imperfect_at_z0
                            : ControlStatus::perfect;
  }
  // 1d models: any nonempty open support controls within one traversal
  double sup = 0.0;
  for (int i = 0; i <= 256; ++i)
    sup = std::max(sup, a.a(-3.2 + 6.4 * i / 256.0));
  return sup > 0.0 ? ControlStatus::perfect : ControlStatus::imperfect_at_z0;
}

std::vector<std::array<double, 4>> sample_profiles(const SurfaceProfile& m,
                                                   const DampingProfile& a,
                                                   int n) {
  std::vector<std::array<double, 4>> rows;
  rows.reserve(n);
  for (int j = 0; j < n; ++j) {
    double z = two_pi * j / n;
    auto e = m.eval(z);
    rows.push_back({z, e.R, e.W, a.a(z)});
  }
  return rows;
}

}  // namespace dwave
