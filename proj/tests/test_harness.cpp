#include <catch2/catch_amalgamated.hpp>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ader/harness.hpp"

using namespace ader;

namespace {

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const char* name) {
    path = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

ExperimentConfig tiny_config(const std::filesystem::path& out) {
  ExperimentConfig config;
  config.algorithms = {AlgorithmVariant::ogd_baseline, AlgorithmVariant::ader_basic};
  EnvironmentSpec quadratic;
  quadratic.family = EnvFamily::quadratic_tracking;
  EnvironmentSpec linear;
  linear.family = EnvFamily::linear_adversary;
  config.environments = {quadratic, linear};
  config.horizons = {8, 16};
  config.seeds = {1, 2};
  config.comparators = {{ComparatorRegistration::Kind::constant_best, "constant-best", {}},
                        {ComparatorRegistration::Kind::per_round_minimizer, "per-round", {}}};
  config.out_dir = out;
  return config;
}

}  // namespace

TEST_CASE("the deterministic parallel loop matches serial execution") {
  std::vector<int> serial(40, 0), threaded(40, 0);
  detail::parallel_for(serial.size(), 1, [&](std::size_t i) { serial[i] = static_cast<int>(i * i); });
  detail::parallel_for(threaded.size(), 4,
                       [&](std::size_t i) { threaded[i] = static_cast<int>(i * i); });
  CHECK(serial == threaded);

  SECTION("the lowest-index failure wins when several workers throw") {
    try {
      detail::parallel_for(10, 4, [&](std::size_t i) {
        if (i == 3 || i == 7)
          throw std::runtime_error("boom at " + std::to_string(i));
      });
      FAIL("expected an exception");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()) == "boom at 3");
    }
  }
}

TEST_CASE("a run executes the whole tuple grid and writes sorted artifacts") {
  TempDir dir("ader_harness_run");
  const ExperimentConfig config = tiny_config(dir.path);
  const RunResult result = execute_run(config);

  // 2 algorithms x 2 environments x 2 horizons x 2 seeds, 2 comparators each
  CHECK(result.rows.size() == 16 * 2);
  CHECK(result.trace_files.size() == 16);
  for (const auto& file : result.trace_files) CHECK(std::filesystem::exists(file));
  CHECK(std::filesystem::exists(result.summary_csv));
  CHECK(std::filesystem::exists(result.summary_json));

  SECTION("rows arrive sorted and labeled by environment position") {
    std::set<std::string> environments;
    for (std::size_t i = 1; i < result.rows.size(); ++i)
      CHECK_FALSE(detail::summary_row_before(result.rows[i], result.rows[i - 1]));
    for (const SummaryRow& row : result.rows) environments.insert(row.environment);
    CHECK(environments ==
          std::set<std::string>{"quadratic-tracking-1", "linear-adversary-2"});
  }
  SECTION("trace files are named after their tuple") {
    const std::filesystem::path expected =
        dir.path / "trace_ogd-baseline_quadratic-tracking-1_T8_d2_seed1.csv";
    CHECK(std::filesystem::exists(expected));
    const std::string text = read_file(expected);
    CHECK(text.rfind("round,loss,cum_loss,", 0) == 0);
  }
  SECTION("the json mirror parses and matches the csv row count") {
    const nlohmann::json parsed = nlohmann::json::parse(read_file(result.summary_json));
    REQUIRE(parsed.is_array());
    CHECK(parsed.size() == result.rows.size());
    CHECK(parsed[0].contains("algorithm"));
    CHECK(parsed[0].contains("regret"));
    CHECK(parsed[0].contains("bound"));
  }
  SECTION("every guarantee holds on these runs") {
    for (const SummaryRow& row : result.rows) CHECK(row.slack >= -1e-6);
  }
}

TEST_CASE("rerunning a config reproduces every output byte, at any worker count") {
  TempDir first_dir("ader_harness_repro_a");
  TempDir second_dir("ader_harness_repro_b");

  ExperimentConfig first = tiny_config(first_dir.path);
  first.jobs = 1;
  ExperimentConfig second = tiny_config(second_dir.path);
  second.jobs = 4;

  const RunResult a = execute_run(first);
  const RunResult b = execute_run(second);

  CHECK(read_file(a.summary_csv) == read_file(b.summary_csv));
  CHECK(read_file(a.summary_json) == read_file(b.summary_json));
  REQUIRE(a.trace_files.size() == b.trace_files.size());
  for (std::size_t i = 0; i < a.trace_files.size(); ++i) {
    CHECK(a.trace_files[i].filename() == b.trace_files[i].filename());
    CHECK(read_file(a.trace_files[i]) == read_file(b.trace_files[i]));
  }
}

TEST_CASE("the scaling sweep validates its shape and averages over seeds") {
  TempDir dir("ader_harness_sweep");
  ExperimentConfig config = tiny_config(dir.path);
  config.environments.pop_back();  // exactly one environment
  config.comparators.pop_back();   // exactly one comparator

  SECTION("shape violations are refused") {
    ExperimentConfig one_horizon = config;
    one_horizon.horizons = {8};
    CHECK_THROWS_AS(execute_sweep(one_horizon), std::invalid_argument);

    ExperimentConfig two_envs = tiny_config(dir.path);
    two_envs.comparators.pop_back();
    CHECK_THROWS_AS(execute_sweep(two_envs), std::invalid_argument);

    ExperimentConfig two_comparators = tiny_config(dir.path);
    two_comparators.environments.pop_back();
    CHECK_THROWS_AS(execute_sweep(two_comparators), std::invalid_argument);
  }
  SECTION("the long-form table has one row per algorithm and horizon") {
    const SweepResult sweep = execute_sweep(config);
    REQUIRE(sweep.rows.size() == 4);  // 2 algorithms x 2 horizons
    CHECK(sweep.rows[0].algorithm == "ader-basic");
    CHECK(sweep.rows[0].horizon == 8);
    CHECK(sweep.rows[3].algorithm == "ogd-baseline");
    CHECK(sweep.rows[3].horizon == 16);
    for (const SweepRow& row : sweep.rows) {
      CHECK(row.bound > 0.0);
      CHECK(row.regret <= row.bound);
    }
    const std::string text = read_file(sweep.sweep_csv);
    CHECK(text.rfind("algorithm,T,P_T,regret,bound,ratio\n", 0) == 0);
  }
}

TEST_CASE("the hard-instance driver reports seed-averaged regret against the scale") {
  TempDir dir("ader_harness_lb");
  LowerBoundParams params;
  params.horizon = 64;
  params.tau = 4.0;
  params.seeds = {1, 2, 3};
  params.algorithms = {AlgorithmVariant::ogd_baseline, AlgorithmVariant::ader_dynamical};
  params.out_dir = dir.path;

  const LowerBoundResult result = execute_lowerbound(params);
  REQUIRE(result.rows.size() == 2);
  for (const LowerBoundRow& row : result.rows) {
    CHECK(row.horizon == 64);
    CHECK(row.tau_requested == 4.0);
    CHECK(row.tau_realized <= 4.0 + 1e-9);
    CHECK(row.scale == Catch::Approx(lower_bound_scale(2.0, 1.0, 64, 4.0)));
    CHECK(row.ratio == Catch::Approx(row.mean_regret / row.scale));
    CHECK(row.mean_regret > 0.0);
  }
  CHECK(std::filesystem::exists(result.csv_path));
  const std::string text = read_file(result.csv_path);
  CHECK(text.rfind(lower_bound_csv_header(), 0) == 0);

  SECTION("missing seeds are refused") {
    LowerBoundParams empty = params;
    empty.seeds.clear();
    CHECK_THROWS_AS(execute_lowerbound(empty), std::invalid_argument);
  }
}
