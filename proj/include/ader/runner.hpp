#ifndef ADER_RUNNER_HPP
#define ADER_RUNNER_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ader/bounds.hpp"
#include "ader/comparators.hpp"
#include "ader/core.hpp"
#include "ader/dynamics.hpp"
#include "ader/experts.hpp"
#include "ader/feasible_set.hpp"
#include "ader/loss.hpp"
#include "ader/meta.hpp"

namespace ader {

enum class AlgorithmVariant { ogd_baseline, ader_basic, ader_improved, ader_dynamical };

inline std::string variant_name(AlgorithmVariant variant) {
  switch (variant) {
    case AlgorithmVariant::ogd_baseline: return "ogd-baseline";
    case AlgorithmVariant::ader_basic: return "ader-basic";
    case AlgorithmVariant::ader_improved: return "ader-improved";
    case AlgorithmVariant::ader_dynamical: return "ader-dynamical";
  }
  throw std::invalid_argument("variant_name: unknown variant");
}

inline AlgorithmVariant parse_variant(const std::string& name) {
  if (name == "ogd-baseline") return AlgorithmVariant::ogd_baseline;
  if (name == "ader-basic") return AlgorithmVariant::ader_basic;
  if (name == "ader-improved") return AlgorithmVariant::ader_improved;
  if (name == "ader-dynamical") return AlgorithmVariant::ader_dynamical;
  throw std::invalid_argument(
      "unknown algorithm '" + name +
      "' (expected ogd-baseline, ader-basic, ader-improved, or ader-dynamical)");
}

/**
 * Everything a run needs besides the losses themselves. `eta` applies to
 * the constant-step baseline only and defaults to D/(G sqrt(T)), the
 * classic horizon-tuned rate. `grid_flavor` overrides the variant's
 * natural grid; its one intended use is running the plain meta variant
 * on the dynamical grid so the identity-model equivalence is testable.
 */
struct AlgorithmConfig {
  AlgorithmVariant variant = AlgorithmVariant::ader_basic;
  int horizon = 1;
  double diameter = 2.0;
  double gradient_bound = 1.0;
  double value_range = 1.0;  // c; defaults to G*D when built from an environment
  std::optional<double> eta;
  std::optional<DynamicalModel> model;
  std::optional<GridFlavor> grid_flavor;
};

/** Config with G, c (= G*D) and D taken from a generated environment. */
template <typename Env>
inline AlgorithmConfig config_for(const Env& env, AlgorithmVariant variant) {
  AlgorithmConfig config;
  config.variant = variant;
  config.horizon = static_cast<int>(env.rounds.size());
  config.diameter = env.set.diameter();
  config.gradient_bound = env.gradient_bound;
  config.value_range = env.value_range;
  return config;
}

/**
 * The only door to the loss oracles during a run: every value and
 * gradient query an algorithm makes passes through here and is counted.
 * The loss the learner suffers at its play is charged by the protocol,
 * not queried, so the runner records it via `suffered` without counting.
 */
class CountingOracle {
 public:
  explicit CountingOracle(const std::vector<LossRound>& rounds) : rounds_(&rounds) {}

  double value(int t, const Vector& x) {
    ++value_queries_;
    return checked_value(t, x);
  }

  Vector gradient(int t, const Vector& x) {
    ++gradient_queries_;
    const Vector g = round(t).gradient(x);
    if (!all_finite(g))
      throw std::runtime_error("gradient oracle returned a non-finite value at round " +
                               std::to_string(t + 1));
    return g;
  }

  double suffered(int t, const Vector& x) { return checked_value(t, x); }

  long long value_queries() const { return value_queries_; }
  long long gradient_queries() const { return gradient_queries_; }

 private:
  const LossRound& round(int t) const { return (*rounds_)[static_cast<std::size_t>(t)]; }

  double checked_value(int t, const Vector& x) const {
    const double v = round(t).value(x);
    if (!std::isfinite(v))
      throw std::runtime_error("loss oracle returned a non-finite value at round " +
                               std::to_string(t + 1));
    return v;
  }

  const std::vector<LossRound>* rounds_;
  long long value_queries_ = 0;
  long long gradient_queries_ = 0;
};

/**
 * Complete record of one run: plays, suffered losses, query counters,
 * and the forecaster's internal state, enough to verify every guarantee
 * after the fact. Cumulative columns are exact prefix sums of the
 * per-round entries.
 */
struct RegretTrace {
  AlgorithmVariant variant = AlgorithmVariant::ogd_baseline;
  int horizon = 0;
  double diameter = 0.0;
  double gradient_bound = 0.0;
  double value_range = 0.0;
  GridFlavor grid_flavor = GridFlavor::basic;
  double alpha = 0.0;         // 0 for the baseline
  double baseline_eta = 0.0;  // 0 for the meta variants
  std::vector<double> etas;   // expert step sizes (single entry for the baseline)

  std::vector<Vector> plays;
  std::vector<double> losses;      // f_t(x_t)
  std::vector<double> cum_losses;
  std::vector<double> play_path;   // movement of the play sequence through round t
  std::vector<long long> cum_gradient_queries;
  std::vector<long long> cum_value_queries;

  MetaState final_meta;            // expert cumulative losses in the update currency
  double meta_update_loss = 0.0;   // forecaster's own cumulative loss, same currency
  double update_allowance = 0.0;   // forecaster guarantee allowance for that currency
  std::optional<DynamicalModel> model;
};

inline void validate_run_inputs(const std::vector<LossRound>& losses,
                                const AlgorithmConfig& config, const FeasibleSet& set) {
  require(config.horizon >= 1, "run: horizon must be >= 1");
  require(static_cast<int>(losses.size()) == config.horizon,
          "run: loss sequence length must equal the horizon");
  require(std::abs(config.diameter - set.diameter()) <= 1e-12 * set.diameter(),
          "run: config diameter must match the feasible set");
  require(config.gradient_bound > 0.0 && std::isfinite(config.gradient_bound),
          "run: gradient bound must be positive and finite");
  require(config.value_range > 0.0 && std::isfinite(config.value_range),
          "run: value range must be positive and finite");
  for (std::size_t t = 0; t < losses.size(); ++t)
    require(losses[t].round == static_cast<int>(t), "run: loss rounds must be numbered 0..T-1");
  if (config.variant == AlgorithmVariant::ader_dynamical)
    require(config.model.has_value(), "run: the dynamical variant requires a model");
}

namespace detail {

inline void record_round(RegretTrace& trace, const Vector& play, double loss,
                         const CountingOracle& oracle) {
  if (!trace.plays.empty()) {
    trace.play_path.push_back(trace.play_path.back() + distance(play, trace.plays.back()));
    trace.cum_losses.push_back(trace.cum_losses.back() + loss);
  } else {
    trace.play_path.push_back(0.0);
    trace.cum_losses.push_back(loss);
  }
  trace.plays.push_back(play);
  trace.losses.push_back(loss);
  trace.cum_gradient_queries.push_back(oracle.gradient_queries());
  trace.cum_value_queries.push_back(oracle.value_queries());
}

inline RegretTrace run_baseline(const std::vector<LossRound>& losses,
                                const AlgorithmConfig& config, const FeasibleSet& set) {
  RegretTrace trace;
  trace.variant = config.variant;
  trace.horizon = config.horizon;
  trace.diameter = config.diameter;
  trace.gradient_bound = config.gradient_bound;
  trace.value_range = config.value_range;
  trace.baseline_eta = config.eta.value_or(
      config.diameter / (config.gradient_bound * std::sqrt(static_cast<double>(config.horizon))));
  require(trace.baseline_eta > 0.0 && std::isfinite(trace.baseline_eta),
          "run: baseline eta must be positive and finite");
  trace.etas = {trace.baseline_eta};

  CountingOracle oracle(losses);
  ExpertState state = expert_init(trace.baseline_eta, set);
  for (int t = 0; t < config.horizon; ++t) {
    const Vector play = state.iterate;
    const double loss = oracle.suffered(t, play);
    const Vector g = oracle.gradient(t, play);
    state = ogd_step(state, g, set);
    record_round(trace, play, loss, oracle);
  }
  return trace;
}

inline RegretTrace run_meta(const std::vector<LossRound>& losses, const AlgorithmConfig& config,
                            const FeasibleSet& set) {
  const bool dynamical = config.variant == AlgorithmVariant::ader_dynamical;
  const bool surrogate = config.variant == AlgorithmVariant::ader_improved;

  RegretTrace trace;
  trace.variant = config.variant;
  trace.horizon = config.horizon;
  trace.diameter = config.diameter;
  trace.gradient_bound = config.gradient_bound;
  trace.value_range = config.value_range;
  trace.grid_flavor =
      config.grid_flavor.value_or(dynamical ? GridFlavor::dynamical : GridFlavor::basic);

  if (dynamical) {
    const ContractionAuditReport audit =
        audit_contraction(*config.model, set, 100, 0xade2u, std::min(config.horizon, 4));
    if (!audit.ok)
      throw std::runtime_error("run: supplied model failed the contraction audit (expansion " +
                               std::to_string(audit.worst_expansion) + ", escape " +
                               std::to_string(audit.worst_escape) + ")");
    trace.model = config.model;
  }

  const StepSizeGrid grid =
      build_grid(config.horizon, config.diameter, config.gradient_bound, trace.grid_flavor);
  trace.etas = grid.etas;
  const int n = grid.size();
  trace.alpha = surrogate
                    ? tune_alpha_surrogate(config.horizon, config.gradient_bound, config.diameter)
                    : tune_alpha_basic(config.horizon, config.value_range);
  trace.update_allowance =
      surrogate ? trace.alpha * config.horizon * config.gradient_bound * config.gradient_bound *
                      config.diameter * config.diameter / 2.0
                : trace.alpha * config.horizon * config.value_range * config.value_range / 8.0;

  CountingOracle oracle(losses);
  std::vector<ExpertState> experts;
  experts.reserve(static_cast<std::size_t>(n));
  for (double eta : grid.etas)
    experts.push_back(expert_init(
        eta, set, surrogate ? ExpertVariant::surrogate
                            : dynamical ? ExpertVariant::dynamical : ExpertVariant::plain));
  MetaState meta = init_meta(n, trace.alpha);

  std::vector<Vector> expert_plays(static_cast<std::size_t>(n));
  std::vector<double> update_losses(static_cast<std::size_t>(n));
  for (int t = 0; t < config.horizon; ++t) {
    for (int i = 0; i < n; ++i)
      expert_plays[static_cast<std::size_t>(i)] = experts[static_cast<std::size_t>(i)].iterate;
    const Vector play = combine(meta.weights, expert_plays);
    const double loss = oracle.suffered(t, play);

    if (surrogate) {
      const Vector g = oracle.gradient(t, play);  // the round's one counted query
      for (int i = 0; i < n; ++i)
        update_losses[static_cast<std::size_t>(i)] =
            dot(g, subtract(expert_plays[static_cast<std::size_t>(i)], play));
      // the linearization vanishes at its own anchor, so the forecaster's
      // update-currency loss is exactly zero every round
      meta = update_weights(meta, update_losses);
      for (int i = 0; i < n; ++i)
        experts[static_cast<std::size_t>(i)] =
            ogd_step(experts[static_cast<std::size_t>(i)], g, set);
    } else {
      for (int i = 0; i < n; ++i)
        update_losses[static_cast<std::size_t>(i)] =
            oracle.value(t, expert_plays[static_cast<std::size_t>(i)]);
      trace.meta_update_loss += loss;
      meta = update_weights(meta, update_losses);
      for (int i = 0; i < n; ++i) {
        const Vector g = oracle.gradient(t, expert_plays[static_cast<std::size_t>(i)]);
        experts[static_cast<std::size_t>(i)] =
            dynamical
                ? dynamical_step(experts[static_cast<std::size_t>(i)], g, *config.model, t, set)
                : ogd_step(experts[static_cast<std::size_t>(i)], g, set);
      }
    }
    record_round(trace, play, loss, oracle);
  }
  trace.final_meta = std::move(meta);
  return trace;
}

}  // namespace detail

inline RegretTrace run_algorithm(const std::vector<LossRound>& losses,
                                 const AlgorithmConfig& config, const FeasibleSet& set) {
  validate_run_inputs(losses, config, set);
  return config.variant == AlgorithmVariant::ogd_baseline
             ? detail::run_baseline(losses, config, set)
             : detail::run_meta(losses, config, set);
}

inline RegretTrace run_ader_basic(const std::vector<LossRound>& losses, AlgorithmConfig config,
                                  const FeasibleSet& set) {
  config.variant = AlgorithmVariant::ader_basic;
  return run_algorithm(losses, config, set);
}

inline RegretTrace run_ader_improved(const std::vector<LossRound>& losses, AlgorithmConfig config,
                                     const FeasibleSet& set) {
  config.variant = AlgorithmVariant::ader_improved;
  return run_algorithm(losses, config, set);
}

inline RegretTrace run_ader_dynamical(const std::vector<LossRound>& losses, AlgorithmConfig config,
                                      const FeasibleSet& set) {
  config.variant = AlgorithmVariant::ader_dynamical;
  return run_algorithm(losses, config, set);
}

/** Sum of suffered losses minus the comparator's, evaluated after the run. */
inline double dynamic_regret(const std::vector<Vector>& plays,
                             const std::vector<LossRound>& losses, const ComparatorSequence& u) {
  require(plays.size() == losses.size() && u.size() == losses.size(),
          "dynamic_regret: plays, losses, and comparator must have equal length");
  double total = 0.0;
  for (std::size_t t = 0; t < losses.size(); ++t)
    total += losses[t].value(plays[t]) - losses[t].value(u[t]);
  return total;
}

/** The guarantee a trace's variant is accountable to. */
inline int bound_id_for(AlgorithmVariant variant) {
  switch (variant) {
    case AlgorithmVariant::ogd_baseline: return 1;
    case AlgorithmVariant::ader_basic: return 3;
    case AlgorithmVariant::ader_improved: return 4;
    case AlgorithmVariant::ader_dynamical: return 5;
  }
  throw std::invalid_argument("bound_id_for: unknown variant");
}

/** One comparator's scorecard against one trace. */
struct ComparatorReport {
  std::string name;
  double path = 0.0;          // P_T
  double dynamic_path = 0.0;  // P'_T; equals path unless the trace carries a model
  double regret = 0.0;
  int bound_id = 0;
  double bound = 0.0;
  double slack = 0.0;  // bound - regret; nonnegative when the guarantee holds
  double ratio = 0.0;  // regret / sqrt(T (1 + P_T)), the plot-ready scaling quantity
};

inline ComparatorReport evaluate_against(const RegretTrace& trace,
                                         const std::vector<LossRound>& losses, std::string name,
                                         const ComparatorSequence& u) {
  require(static_cast<int>(u.size()) == trace.horizon,
          "evaluate_against: comparator length must equal the horizon");
  ComparatorReport report;
  report.name = std::move(name);
  report.path = path_length(u);
  report.dynamic_path = trace.model ? dynamic_path_length(u, *trace.model) : report.path;
  report.regret = dynamic_regret(trace.plays, losses, u);
  report.bound_id = bound_id_for(trace.variant);

  BoundParams params;
  params.horizon = trace.horizon;
  params.diameter = trace.diameter;
  params.gradient_bound = trace.gradient_bound;
  params.value_range = trace.value_range;
  params.eta = trace.baseline_eta;
  params.path = report.bound_id == 5 ? report.dynamic_path : report.path;
  report.bound = bound_value(report.bound_id, params);
  report.slack = report.bound - report.regret;
  report.ratio = report.regret / std::sqrt(trace.horizon * (1.0 + report.path));
  return report;
}

/**
 * Forecaster guarantee check for a finished meta-variant run, in the
 * currency its weights were updated with.
 */
inline MetaRegretCheck check_trace_meta_regret(const RegretTrace& trace,
                                               double relative_slack = 1e-9) {
  require(trace.variant != AlgorithmVariant::ogd_baseline,
          "check_trace_meta_regret: the baseline has no forecaster layer");
  return check_meta_regret(trace.final_meta, trace.meta_update_loss, trace.update_allowance,
                           relative_slack);
}

}  // namespace ader

#endif  // ADER_RUNNER_HPP
