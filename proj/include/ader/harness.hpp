#ifndef ADER_HARNESS_HPP
#define ADER_HARNESS_HPP

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ader/config_json.hpp"
#include "ader/environments.hpp"
#include "ader/runner.hpp"
#include "ader/trace_io.hpp"

namespace ader {

namespace detail {

/**
 * Run fn(0..count-1) on up to `jobs` threads. Work functions must be
 * pure; results are stored by index, so the outcome cannot depend on
 * scheduling. The first failure by index is rethrown.
 */
template <typename Fn>
inline void parallel_for(std::size_t count, int jobs, Fn&& fn) {
  if (count == 0) return;
  const int workers = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(jobs), count));
  std::vector<std::exception_ptr> failures(count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      try {
        fn(i);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
          try {
            fn(i);
          } catch (...) {
            failures[i] = std::current_exception();
          }
        }
      });
    for (std::thread& t : pool) t.join();
  }
  for (const std::exception_ptr& failure : failures)
    if (failure) std::rethrow_exception(failure);
}

inline std::string environment_label(const ExperimentConfig& config, std::size_t env_index) {
  std::string label = family_name(config.environments[env_index].family);
  if (config.environments.size() > 1) label += "-" + std::to_string(env_index + 1);
  return label;
}

/** The per-tuple work shared by the run and sweep commands. */
struct TupleResult {
  std::vector<SummaryRow> rows;  // one per registered comparator
  std::string trace_name;
  std::string trace_csv;
};

inline Blocks blocks_for_comparators(const ExperimentConfig& config, const Environment& env) {
  if (env.spec.family == EnvFamily::lower_bound || segmented(env.spec)) return env.segments;
  const int count = std::min(env.spec.horizon, config.comparator_blocks);
  return count_blocks(env.spec.horizon, count);
}

inline TupleResult run_tuple(const ExperimentConfig& config, std::size_t algo_index,
                             std::size_t env_index, int horizon, std::uint64_t seed) {
  const AlgorithmVariant variant = config.algorithms[algo_index];
  EnvironmentSpec spec = config.environments[env_index];
  spec.horizon = horizon;
  spec.seed = seed;
  const Environment env = make_environment(spec);

  std::optional<DynamicalModel> model;
  if (config.model) model = make_contraction(*config.model, env.set);

  AlgorithmConfig algorithm = config_for(env, variant);
  if (variant == AlgorithmVariant::ogd_baseline && config.baseline_eta)
    algorithm.eta = config.baseline_eta;
  if (variant == AlgorithmVariant::ader_dynamical) algorithm.model = model;

  const RegretTrace trace = run_algorithm(env.rounds, algorithm, env.set);

  std::vector<std::pair<std::string, ComparatorSequence>> comparators;
  comparators.reserve(config.comparators.size());
  for (const ComparatorRegistration& reg : config.comparators) {
    switch (reg.kind) {
      case ComparatorRegistration::Kind::constant_best:
        comparators.emplace_back(reg.name, constant_best_comparator(env));
        break;
      case ComparatorRegistration::Kind::per_round_minimizer:
        comparators.emplace_back(reg.name, per_round_minimizers(env));
        break;
      case ComparatorRegistration::Kind::block_best:
        comparators.emplace_back(
            reg.name, block_best_comparator(env, blocks_for_comparators(config, env)));
        break;
      case ComparatorRegistration::Kind::follow_dynamics: {
        const DynamicalModel dynamics = model ? *model : identity_model();
        comparators.emplace_back(
            reg.name, follow_dynamics_comparator(zeros(env.set.dimension()), dynamics, horizon));
        break;
      }
      case ComparatorRegistration::Kind::custom_file:
        comparators.emplace_back(reg.name, load_comparator_file(reg.file, horizon, env.set));
        break;
    }
  }

  TupleResult result;
  const std::string label = environment_label(config, env_index);
  for (const auto& [name, sequence] : comparators) {
    const ComparatorReport report = evaluate_against(trace, env.rounds, name, sequence);
    SummaryRow row;
    row.algorithm = variant_name(variant);
    row.environment = label;
    row.horizon = horizon;
    row.dimension = spec.dimension;
    row.seed = seed;
    row.comparator = report.name;
    row.regret = report.regret;
    row.path = report.path;
    row.dynamic_path = report.dynamic_path;
    row.bound_id = report.bound_id;
    row.bound = report.bound;
    row.slack = report.slack;
    row.ratio = report.ratio;
    row.gradient_queries = trace.cum_gradient_queries.back();
    row.value_queries = trace.cum_value_queries.back();
    if (row.slack < -1e-6 * std::max(1.0, std::abs(row.bound)))
      throw std::runtime_error("guarantee violated: " + row.algorithm + " on " + row.environment +
                               " T=" + std::to_string(horizon) + " seed=" + std::to_string(seed) +
                               " comparator=" + row.comparator + " exceeded its bound by " +
                               format_double(-row.slack));
    result.rows.push_back(std::move(row));
  }

  std::ostringstream trace_out;
  write_trace_csv(trace_out, trace, env.rounds, comparators);
  result.trace_csv = trace_out.str();
  result.trace_name = "trace_" + variant_name(variant) + "_" + label + "_T" +
                      std::to_string(horizon) + "_d" + std::to_string(spec.dimension) + "_seed" +
                      std::to_string(seed) + ".csv";
  return result;
}

inline bool summary_row_before(const SummaryRow& a, const SummaryRow& b) {
  return std::tie(a.algorithm, a.environment, a.horizon, a.dimension, a.seed, a.comparator) <
         std::tie(b.algorithm, b.environment, b.horizon, b.dimension, b.seed, b.comparator);
}

inline nlohmann::json summary_row_json(const SummaryRow& row) {
  return nlohmann::json{{"algorithm", row.algorithm},
                        {"environment", row.environment},
                        {"T", row.horizon},
                        {"dim", row.dimension},
                        {"seed", row.seed},
                        {"comparator", row.comparator},
                        {"regret", row.regret},
                        {"path", row.path},
                        {"dynamic_path", row.dynamic_path},
                        {"bound_id", row.bound_id},
                        {"bound", row.bound},
                        {"slack", row.slack},
                        {"ratio", row.ratio},
                        {"grad_queries", row.gradient_queries},
                        {"value_queries", row.value_queries}};
}

struct WorkItem {
  std::size_t algo_index;
  std::size_t env_index;
  int horizon;
  std::uint64_t seed;
};

inline std::vector<WorkItem> work_items(const ExperimentConfig& config) {
  std::vector<WorkItem> items;
  for (std::size_t a = 0; a < config.algorithms.size(); ++a)
    for (std::size_t e = 0; e < config.environments.size(); ++e)
      for (int horizon : config.horizons)
        for (std::uint64_t seed : config.seeds) items.push_back({a, e, horizon, seed});
  return items;
}

}  // namespace detail

struct RunResult {
  std::vector<SummaryRow> rows;
  std::vector<std::filesystem::path> trace_files;
  std::filesystem::path summary_csv;
  std::filesystem::path summary_json;
};

/**
 * Execute every (algorithm, environment, horizon, seed) tuple, write one
 * trace file each plus a merged summary (CSV and JSON). Tuples may run
 * on several threads; outputs are byte-identical regardless of the
 * worker count.
 */
inline RunResult execute_run(const ExperimentConfig& config) {
  validate(config);
  std::filesystem::create_directories(config.out_dir);
  const std::vector<detail::WorkItem> items = detail::work_items(config);
  std::vector<detail::TupleResult> results(items.size());
  detail::parallel_for(items.size(), config.jobs, [&](std::size_t i) {
    const detail::WorkItem& item = items[i];
    results[i] = detail::run_tuple(config, item.algo_index, item.env_index, item.horizon,
                                   item.seed);
    atomic_write_file(config.out_dir / results[i].trace_name, results[i].trace_csv);
  });

  RunResult run;
  for (detail::TupleResult& result : results) {
    run.trace_files.push_back(config.out_dir / result.trace_name);
    for (SummaryRow& row : result.rows) run.rows.push_back(std::move(row));
  }
  std::sort(run.rows.begin(), run.rows.end(), detail::summary_row_before);

  std::ostringstream csv;
  csv << summary_csv_header() << '\n';
  for (const SummaryRow& row : run.rows) write_summary_row(csv, row);
  run.summary_csv = config.out_dir / "summary.csv";
  atomic_write_file(run.summary_csv, csv.str());

  nlohmann::json json_rows = nlohmann::json::array();
  for (const SummaryRow& row : run.rows) json_rows.push_back(detail::summary_row_json(row));
  run.summary_json = config.out_dir / "summary.json";
  atomic_write_file(run.summary_json, json_rows.dump(2) + "\n");
  return run;
}

struct SweepResult {
  std::vector<SweepRow> rows;
  std::filesystem::path sweep_csv;
};

/**
 * Scaling study across the horizon grid: runs every tuple, averages
 * regret/path/bound over seeds, and emits the plot-ready long-form
 * table. Requires at least two horizons, a single environment, and a
 * single comparator registration so each (algorithm, T) cell is
 * unambiguous.
 */
inline SweepResult execute_sweep(const ExperimentConfig& config) {
  validate(config);
  require(config.horizons.size() >= 2, "sweep: need at least two horizons");
  require(config.environments.size() == 1, "sweep: exactly one environment required");
  require(config.comparators.size() == 1, "sweep: exactly one comparator registration required");
  std::filesystem::create_directories(config.out_dir);

  const std::vector<detail::WorkItem> items = detail::work_items(config);
  std::vector<detail::TupleResult> results(items.size());
  detail::parallel_for(items.size(), config.jobs, [&](std::size_t i) {
    const detail::WorkItem& item = items[i];
    results[i] = detail::run_tuple(config, item.algo_index, item.env_index, item.horizon,
                                   item.seed);
  });

  SweepResult sweep;
  for (std::size_t a = 0; a < config.algorithms.size(); ++a) {
    for (int horizon : config.horizons) {
      SweepRow row;
      row.algorithm = variant_name(config.algorithms[a]);
      row.horizon = horizon;
      int count = 0;
      for (std::size_t i = 0; i < items.size(); ++i) {
        if (items[i].algo_index != a || items[i].horizon != horizon) continue;
        const SummaryRow& summary = results[i].rows.front();
        row.path += summary.path;
        row.regret += summary.regret;
        row.bound += summary.bound;
        ++count;
      }
      row.path /= count;
      row.regret /= count;
      row.bound /= count;
      row.ratio = row.regret / std::sqrt(horizon * (1.0 + row.path));
      sweep.rows.push_back(std::move(row));
    }
  }
  std::sort(sweep.rows.begin(), sweep.rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return std::tie(a.algorithm, a.horizon) < std::tie(b.algorithm, b.horizon);
  });

  std::ostringstream csv;
  csv << sweep_csv_header() << '\n';
  for (const SweepRow& row : sweep.rows) write_sweep_row(csv, row);
  sweep.sweep_csv = config.out_dir / "sweep.csv";
  atomic_write_file(sweep.sweep_csv, csv.str());
  return sweep;
}

struct LowerBoundParams {
  int horizon = 4096;
  double tau = 0.0;
  int dimension = 2;
  double diameter = 2.0;
  double gradient_bound = 1.0;
  std::vector<std::uint64_t> seeds;
  std::vector<AlgorithmVariant> algorithms = {
      AlgorithmVariant::ogd_baseline, AlgorithmVariant::ader_basic,
      AlgorithmVariant::ader_improved, AlgorithmVariant::ader_dynamical};
  std::filesystem::path out_dir = "out";
  int jobs = 1;
};

struct LowerBoundResult {
  std::vector<LowerBoundRow> rows;
  std::filesystem::path csv_path;
};

/**
 * Run every algorithm on the hard random-sign construction across
 * seeds; report mean regret against the construction's own block-best
 * comparator and the ratio to the G sqrt(T (D^2 + D tau)) scale.
 */
inline LowerBoundResult execute_lowerbound(const LowerBoundParams& params) {
  require(!params.seeds.empty(), "lower-bound: need at least one seed");
  require(!params.algorithms.empty(), "lower-bound: need at least one algorithm");
  require(params.horizon >= 1, "lower-bound: horizon must be >= 1");
  require(params.tau >= 0.0 && params.tau <= params.horizon * params.diameter,
          "lower-bound: tau must lie in [0, T*D]");
  std::filesystem::create_directories(params.out_dir);

  struct Cell {
    double regret = 0.0;
    double realized_tau = 0.0;
  };
  const std::size_t count = params.algorithms.size() * params.seeds.size();
  std::vector<Cell> cells(count);
  detail::parallel_for(count, params.jobs, [&](std::size_t i) {
    const std::size_t algo_index = i / params.seeds.size();
    const std::uint64_t seed = params.seeds[i % params.seeds.size()];
    EnvironmentSpec spec;
    spec.family = EnvFamily::lower_bound;
    spec.horizon = params.horizon;
    spec.dimension = params.dimension;
    spec.seed = seed;
    spec.diameter = params.diameter;
    spec.gradient_bound = params.gradient_bound;
    spec.tau = params.tau;
    const Environment env = make_environment(spec);

    AlgorithmConfig algorithm = config_for(env, params.algorithms[algo_index]);
    if (params.algorithms[algo_index] == AlgorithmVariant::ader_dynamical)
      algorithm.model = identity_model();
    const RegretTrace trace = run_algorithm(env.rounds, algorithm, env.set);
    cells[i].regret = dynamic_regret(trace.plays, env.rounds, *env.pinned_comparator);
    cells[i].realized_tau = env.realized_tau;
  });

  LowerBoundResult result;
  const double scale =
      lower_bound_scale(params.diameter, params.gradient_bound, params.horizon, params.tau);
  for (std::size_t a = 0; a < params.algorithms.size(); ++a) {
    LowerBoundRow row;
    row.algorithm = variant_name(params.algorithms[a]);
    row.horizon = params.horizon;
    row.tau_requested = params.tau;
    for (std::size_t s = 0; s < params.seeds.size(); ++s) {
      row.mean_regret += cells[a * params.seeds.size() + s].regret;
      row.tau_realized += cells[a * params.seeds.size() + s].realized_tau;
    }
    row.mean_regret /= static_cast<double>(params.seeds.size());
    row.tau_realized /= static_cast<double>(params.seeds.size());
    row.scale = scale;
    row.ratio = row.mean_regret / scale;
    result.rows.push_back(std::move(row));
  }
  std::sort(result.rows.begin(), result.rows.end(),
            [](const LowerBoundRow& a, const LowerBoundRow& b) { return a.algorithm < b.algorithm; });

  std::ostringstream csv;
  csv << lower_bound_csv_header() << '\n';
  for (const LowerBoundRow& row : result.rows) write_lower_bound_row(csv, row);
  result.csv_path = params.out_dir / "lower_bound.csv";
  atomic_write_file(result.csv_path, csv.str());
  return result;
}

}  // namespace ader

#endif  // ADER_HARNESS_HPP
