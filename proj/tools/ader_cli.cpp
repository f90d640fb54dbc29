// Command-line harness: configure experiments, run algorithm/environment
// sweeps, and emit traces plus plot-ready summary tables.
//
// Subcommands:
//   run          execute every configured tuple, write traces + summary
//   sweep        scaling study across a horizon grid, write sweep.csv
//   lower-bound  hard-instance study across seeds, write lower_bound.csv
//
// Exit codes: 0 success, 1 runtime failure, 2 usage error. The
// environment variable ADER_OUT_DIR supplies the default output root.

#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ader/ader.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::vector<std::string> algorithms;
  std::vector<int> horizons;
  std::optional<int> dimension;
  std::vector<std::uint64_t> seeds;
  std::optional<double> tau;
  std::optional<std::string> out_dir;
  std::optional<int> jobs;
};

enum class ConfigFlag { required, none };

void add_common_flags(CLI::App* cmd, CommonFlags* flags, ConfigFlag config_flag) {
  if (config_flag == ConfigFlag::required)
    cmd->add_option("--config", flags->config_path,
                    "Experiment config file (JSON); flags override its values")
        ->required();
  cmd->add_option("--algo", flags->algorithms,
                  "Algorithms to run (ogd-baseline, ader-basic, ader-improved, ader-dynamical)");
  cmd->add_option("--t", flags->horizons, "Horizon grid");
  cmd->add_option("--dim", flags->dimension, "Dimension override for every environment");
  cmd->add_option("--seed", flags->seeds, "Seed list");
  cmd->add_option("--tau", flags->tau, "Comparator path budget for lower-bound environments");
  cmd->add_option("--out", flags->out_dir, "Output directory");
  cmd->add_option("--jobs", flags->jobs, "Worker thread count");
}

std::filesystem::path resolve_out_dir(const std::optional<std::string>& flag,
                                      const ader::ExperimentConfig* config) {
  if (flag) return *flag;
  if (config && config->out_dir_from_config) return config->out_dir;
  if (const char* env = std::getenv("ADER_OUT_DIR"); env && *env) return env;
  return "out";
}

ader::ExperimentConfig load_with_overrides(const CommonFlags& flags) {
  ader::ExperimentConfig config = ader::load_experiment_config(flags.config_path);
  if (!flags.algorithms.empty()) {
    config.algorithms.clear();
    for (const std::string& name : flags.algorithms)
      config.algorithms.push_back(ader::parse_variant(name));
  }
  if (!flags.horizons.empty()) config.horizons = flags.horizons;
  if (!flags.seeds.empty()) config.seeds = flags.seeds;
  if (flags.dimension)
    for (ader::EnvironmentSpec& spec : config.environments) spec.dimension = *flags.dimension;
  if (flags.tau)
    for (ader::EnvironmentSpec& spec : config.environments) spec.tau = *flags.tau;
  config.out_dir = resolve_out_dir(flags.out_dir, &config);
  if (flags.jobs) config.jobs = *flags.jobs;
  ader::validate(config);
  return config;
}

int cmd_run(const CommonFlags& flags) {
  const ader::ExperimentConfig config = load_with_overrides(flags);
  const ader::RunResult result = ader::execute_run(config);
  std::cout << "wrote " << result.trace_files.size() << " trace file(s), "
            << result.rows.size() << " summary row(s) to " << config.out_dir.string() << "\n";
  return 0;
}

int cmd_sweep(const CommonFlags& flags) {
  const ader::ExperimentConfig config = load_with_overrides(flags);
  const ader::SweepResult result = ader::execute_sweep(config);
  std::cout << "wrote " << result.rows.size() << " sweep row(s) to "
            << result.sweep_csv.string() << "\n";
  return 0;
}

int cmd_lowerbound(const CommonFlags& flags, int horizon, double tau, double diameter,
                   double gradient_bound) {
  ader::LowerBoundParams params;
  params.horizon = horizon;
  params.tau = tau;
  params.diameter = diameter;
  params.gradient_bound = gradient_bound;
  if (flags.dimension) params.dimension = *flags.dimension;
  params.seeds = flags.seeds.empty()
                     ? std::vector<std::uint64_t>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10}
                     : flags.seeds;
  if (!flags.algorithms.empty()) {
    params.algorithms.clear();
    for (const std::string& name : flags.algorithms)
      params.algorithms.push_back(ader::parse_variant(name));
  }
  params.out_dir = resolve_out_dir(flags.out_dir, nullptr);
  if (flags.jobs) params.jobs = *flags.jobs;
  const ader::LowerBoundResult result = ader::execute_lowerbound(params);
  for (const ader::LowerBoundRow& row : result.rows)
    std::cout << row.algorithm << ": mean regret " << ader::format_double(row.mean_regret)
              << " (ratio " << ader::format_double(row.ratio) << " of scale "
              << ader::format_double(row.scale) << ")\n";
  std::cout << "wrote " << result.csv_path.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online convex optimization harness: tracking algorithms, synthetic adversaries, "
               "and worst-case guarantee accounting"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  CLI::App* run = app.add_subcommand("run", "Run every configured tuple; write traces + summary");
  add_common_flags(run, &run_flags, ConfigFlag::required);

  CommonFlags sweep_flags;
  CLI::App* sweep =
      app.add_subcommand("sweep", "Scaling study across the horizon grid; write sweep.csv");
  add_common_flags(sweep, &sweep_flags, ConfigFlag::required);

  CommonFlags lb_flags;
  int lb_horizon = 4096;
  double lb_tau = 0.0;
  double lb_diameter = 2.0;
  double lb_gradient_bound = 1.0;
  CLI::App* lower = app.add_subcommand(
      "lower-bound", "Hard-instance study: mean regret across seeds vs. the block-best comparator");
  add_common_flags(lower, &lb_flags, ConfigFlag::none);
  lower->add_option("--diameter", lb_diameter, "Domain diameter D");
  lower->add_option("--gradient-bound", lb_gradient_bound, "Gradient norm bound G");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& error) {
    if (error.get_exit_code() == 0) return app.exit(error);  // --help and friends
    app.exit(error);
    return 2;
  }

  try {
    if (run->parsed()) return cmd_run(run_flags);
    if (sweep->parsed()) return cmd_sweep(sweep_flags);
    if (lower->parsed()) {
      if (!lb_flags.horizons.empty()) lb_horizon = lb_flags.horizons.front();
      if (lb_flags.tau) lb_tau = *lb_flags.tau;
      return cmd_lowerbound(lb_flags, lb_horizon, lb_tau, lb_diameter, lb_gradient_bound);
    }
  } catch (const std::invalid_argument& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 2;
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 1;
  }
  return 2;
}
