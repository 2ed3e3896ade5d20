#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <string>

#include "dwave/experiment.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitMissing = 4;

struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  std::string k_list;
  std::string h_list;
  double tol = 0.0;
  long long seed = -1;
};

void add_common(CLI::App* cmd, CommonFlags& fl) {
  cmd->add_option("--config", fl.config_path, "config file (sectioned key = value)");
  cmd->add_option("--out", fl.out_dir, "output directory");
  cmd->add_option("--k-list", fl.k_list, "comma separated angular modes");
  cmd->add_option("--h-list", fl.h_list, "comma separated h values");
  cmd->add_option("--tol", fl.tol, "scenario tolerance override");
  cmd->add_option("--seed", fl.seed, "rng seed for randomized inputs");
}

int run_scenario(const std::string& scenario, const CommonFlags& fl) {
  dwave::ExperimentConfig cfg;
  try {
    if (!fl.config_path.empty())
      cfg = dwave::ExperimentConfig::from_config(
          dwave::parse_config_file(fl.config_path));
    cfg.scenario = scenario;
    if (!fl.out_dir.empty()) cfg.out_dir = fl.out_dir;
    if (!fl.k_list.empty()) cfg.k_list = dwave::parse_int_list(fl.k_list);
    if (!fl.h_list.empty()) cfg.h_list = dwave::parse_double_list(fl.h_list);
    if (fl.tol > 0.0) cfg.tol = fl.tol;
    if (fl.seed >= 0) cfg.seed = static_cast<std::uint64_t>(fl.seed);
    cfg.validate();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "validation error: %s\n", e.what());
    return kExitValidation;
  }
  try {
    dwave::ScenarioResult res = dwave::run_experiment(cfg);
    std::string summary;
    dwave::report_artifacts(cfg.out_dir, &summary);
    std::fputs(summary.c_str(), stdout);
    return res.all_pass() ? 0 : kExitNumerical;
  } catch (const dwave::ValidationError& e) {
    std::fprintf(stderr, "validation error: %s\n", e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kExitNumerical;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"damped-wave spectral experiments on a lumpy torus"};
  app.require_subcommand(1);

  CommonFlags fq, fs, fe, fr, fg;
  std::string evolve_mode = "subexp";
  std::string report_dir;

  CLI::App* quasimode = app.add_subcommand("quasimode", "quasimode sweep");
  add_common(quasimode, fq);
  CLI::App* spectrum = app.add_subcommand("spectrum", "brute-force spectrum sweep");
  add_common(spectrum, fs);
  CLI::App* evolve = app.add_subcommand("evolve", "time-domain decay runs");
  add_common(evolve, fe);
  evolve->add_option("--mode", evolve_mode, "subexp | overdamped")
      ->check(CLI::IsMember({"subexp", "overdamped"}));
  CLI::App* resolvent = app.add_subcommand("resolvent", "resolvent norm scans");
  add_common(resolvent, fr);
  CLI::App* egorov = app.add_subcommand("egorov", "oscillator conjugation suite");
  add_common(egorov, fg);
  CLI::App* report = app.add_subcommand("report", "summarize run artifacts");
  report->add_option("dir", report_dir, "artifact directory")->required();

  CLI11_PARSE(app, argc, argv);

  if (quasimode->parsed()) return run_scenario("quasimode_sweep", fq);
  if (spectrum->parsed()) return run_scenario("oracle_sweep", fs);
  if (evolve->parsed())
    return run_scenario(
        evolve_mode == "overdamped" ? "decay_overdamped" : "decay_subexp", fe);
  if (resolvent->parsed()) return run_scenario("resolvent_scan", fr);
  if (egorov->parsed()) return run_scenario("egorov_suite", fg);
  if (report->parsed()) {
    std::string summary;
    if (!dwave::report_artifacts(report_dir, &summary)) {
      std::fprintf(stderr, "missing artifacts in %s\n", report_dir.c_str());
      return kExitMissing;
    }
    std::fputs(summary.c_str(), stdout);
    return 0;
  }
  return 0;
}
