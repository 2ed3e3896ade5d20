#pragma once

#include <string>
#include <vector>

#include "dwave/geometry.hpp"
#include "dwave/io.hpp"
#include "dwave/numerics.hpp"

namespace dwave {

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::string scenario;  // quasimode_sweep | oracle_sweep | decay_subexp |
                         // decay_overdamped | resolvent_scan | egorov_suite
  SurfaceProfile geometry{};
  DampingProfile damping = DampingProfile::ramp_profile();
  std::vector<int> k_list{50, 100, 200, 400};
  std::vector<double> h_list;  // resolvent scans; empty = scenario default
  std::string out_dir = "out";
  std::uint64_t seed = 42;
  double eps = 0.25;
  double delta_loss = 0.1;   // Sobolev loss delta in the envelope
  double tol = 0.0;          // scenario-specific override, 0 = default
  int k_min = 50;
  int oracle_n_cap = 4096;   // dense eigensolve ceiling (per parity sector x2)

  static ExperimentConfig from_config(const Config& cfg);
  void validate() const;
};

struct CheckResult {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct ScenarioResult {
  std::vector<CheckResult> checks;
  std::string manifest_json;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

ScenarioResult run_quasimode_sweep(const ExperimentConfig& cfg);
ScenarioResult run_oracle_sweep(const ExperimentConfig& cfg);
ScenarioResult run_decay_subexp(const ExperimentConfig& cfg);
ScenarioResult run_decay_overdamped(const ExperimentConfig& cfg);
ScenarioResult run_resolvent_scan(const ExperimentConfig& cfg);
ScenarioResult run_egorov_suite(const ExperimentConfig& cfg);

/// Dispatch + manifest file; returns the scenario result.
ScenarioResult run_experiment(const ExperimentConfig& cfg);

/// Reads manifest + artifacts from a run directory, prints a summary table,
/// writes plot-ready companion files.  Returns false when artifacts are
/// missing.
bool report_artifacts(const std::string& dir, std::string* summary_out = nullptr);

/// Oracle grid policy: 40 points per wavelength up to the dense ceiling.
int oracle_grid_size(int k, int n_cap);

}  // namespace dwave
