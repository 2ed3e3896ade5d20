#pragma once

#include <Eigen/Dense>

#include <vector>

#include "dwave/geometry.hpp"
#include "dwave/numerics.hpp"

namespace dwave {

struct DecayRecord {
  std::vector<double> t;
  std::vector<double> energy;  // ||psi_t||^2 + <L psi, psi>, no 1/2
  double e0 = 0.0;
  double dissipation_defect = 0.0;  // max |dE + dissipated| per unit time / E0
};

struct FitResult {
  double rate = 0.0;       // exp: E ~ e^{-rate t}; subexp: E ~ e^{-2 c sqrt t}
  double intercept = 0.0;  // log E extrapolated to t = 0
  double rms = 0.0;        // rms residual of log E fit
  double r2 = 0.0;
};
enum class DecayModel { exp, subexp_sqrt, mode };

struct InsufficientDecayError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Least squares on log E(t); model 'mode' fixes the slope at 2 Im tau and
/// fits the intercept only.
FitResult fit_decay(const DecayRecord& rec, DecayModel model,
                    double mode_im_tau = 0.0, double floor_rel = 1e-13);

struct ModeRunOptions;
struct ModeRun;
class ModeBasis;
ModeRun evolve_mode(const ModeBasis& basis, const std::vector<cplx>& psi0,
                    const std::vector<cplx>& psi1, const ModeRunOptions& opt);

/// Truncated eigenbasis of the conjugated per-mode operator
/// L = -d2/dz2 + k^2 W + V1 around sqrt(lambda) ~ k.
class ModeBasis {
 public:
  ModeBasis(int k, const SurfaceProfile& m, const DampingProfile& a,
            int grid_n = 0, double window_halfwidth = 60.0);

  int k() const { return k_; }
  int grid_size() const { return n_; }
  int modes() const { return static_cast<int>(lambda_.size()); }
  const std::vector<double>& grid() const { return z_; }
  const Eigen::VectorXd& eigenvalues() const { return lambda_vec_; }

  /// continuum-normalized coefficients of grid samples; tail_mass reports the
  /// relative l2 mass outside the window.
  Eigen::VectorXcd project(const std::vector<cplx>& psi,
                           double* tail_mass = nullptr) const;
  std::vector<cplx> synthesize(const Eigen::VectorXcd& c) const;

  /// H^s norm of per-mode data via the (1 + k^2 + |D_z|^2)^{s/2} multiplier.
  double sobolev_norm(const std::vector<cplx>& psi, double s) const;

  const Eigen::MatrixXd& damping_matrix() const { return damp_; }

 private:
  friend ModeRun evolve_mode(const ModeBasis&, const std::vector<cplx>&,
                             const std::vector<cplx>&, const ModeRunOptions&);
  int k_;
  int n_;
  double dz_;
  std::vector<double> z_;
  std::vector<double> lambda_;
  Eigen::VectorXd lambda_vec_;
  Eigen::MatrixXd vecs_;   // n x m
  Eigen::MatrixXd damp_;   // m x m
  Eigen::MatrixXd damp_q_; // eigenvectors of damp_
  Eigen::VectorXd damp_d_; // eigenvalues of damp_
};

struct ModeRunOptions {
  double t_final = 60.0;
  double dt_factor = 0.2;   // dt = dt_factor / k
  int max_samples = 4000;
  int snapshot_stride = 0;  // 0: no snapshots
};

struct ModeRun {
  DecayRecord record;
  std::vector<double> snap_t;
  std::vector<Eigen::VectorXcd> snap_c, snap_cdot;
  double tail_mass = 0.0;
};

struct OverdampedOptions {
  int n = 256;
  double dt = 0.02;
  double t_final = 60.0;
  int max_samples = 4000;
};

/// d_t^2 u - d_x^2 u - d_x(a d_x d_t u) = 0 on the 2pi circle, u(0) = 0,
/// u_t(0) = f (mean removed); Fourier rotation + Crank-Nicolson viscous
/// stage; energy ||u_t||^2 + ||u_x||^2.
DecayRecord evolve_overdamped(const DampingProfile& a,
                              const std::vector<double>& f,
                              const OverdampedOptions& opt);

/// Envelope max_k exp(log_prefactor_k - rate_k t) over a log-spaced t-grid;
/// value holds log f(t).
struct Envelope {
  std::vector<double> t, value;
  double fitted_c = 0.0;       // f >= C^{-1} e^{-2 c sqrt t}
  double fitted_log_cinv = 0.0;
  double max_below = 0.0;      // worst log-violation of the fitted bound
};
Envelope decay_envelope(const std::vector<double>& rates,
                        const std::vector<double>& log_prefactors, double t_lo,
                        double t_hi, int n_pts);

}  // namespace dwave
