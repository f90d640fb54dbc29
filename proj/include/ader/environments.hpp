#ifndef ADER_ENVIRONMENTS_HPP
#define ADER_ENVIRONMENTS_HPP

#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ader/comparators.hpp"
#include "ader/core.hpp"
#include "ader/feasible_set.hpp"
#include "ader/loss.hpp"

namespace ader {

enum class EnvFamily { quadratic_tracking, linear_adversary, lower_bound };

inline std::string family_name(EnvFamily family) {
  switch (family) {
    case EnvFamily::quadratic_tracking: return "quadratic-tracking";
    case EnvFamily::linear_adversary: return "linear-adversary";
    case EnvFamily::lower_bound: return "lower-bound";
  }
  throw std::invalid_argument("family_name: unknown family");
}

inline EnvFamily parse_family(const std::string& name) {
  if (name == "quadratic-tracking") return EnvFamily::quadratic_tracking;
  if (name == "linear-adversary") return EnvFamily::linear_adversary;
  if (name == "lower-bound") return EnvFamily::lower_bound;
  throw std::invalid_argument("unknown environment family '" + name +
                              "' (expected quadratic-tracking, linear-adversary, or lower-bound)");
}

/**
 * Everything needed to instantiate one synthetic loss sequence. The
 * switching structure can be given either as a switch count or as a fixed
 * segment length; at most one of the two may be set. With neither set,
 * quadratic-tracking targets follow a random walk of step `drift` and
 * linear-adversary directions refresh every round.
 */
struct EnvironmentSpec {
  EnvFamily family = EnvFamily::quadratic_tracking;
  int horizon = 1;
  int dimension = 2;
  std::uint64_t seed = 0;
  double diameter = 2.0;
  double gradient_bound = 1.0;  // G for the linear families; quadratic forces G = D
  double drift = 0.0;           // random-walk step magnitude (quadratic-tracking)
  int switches = 0;             // number of piecewise-constant switches
  int segment_length = 0;       // alternative: fixed segment length
  double tau = 0.0;             // comparator path budget (lower-bound)
};

inline void validate(const EnvironmentSpec& spec) {
  require(spec.horizon >= 1, "environment: horizon must be >= 1");
  require(spec.dimension >= 1, "environment: dimension must be >= 1");
  require(spec.diameter > 0.0 && std::isfinite(spec.diameter),
          "environment: diameter must be positive and finite");
  require(spec.gradient_bound > 0.0 && std::isfinite(spec.gradient_bound),
          "environment: gradient bound must be positive and finite");
  require(spec.drift >= 0.0 && std::isfinite(spec.drift),
          "environment: drift must be nonnegative and finite");
  require(spec.switches >= 0, "environment: switch count must be nonnegative");
  require(spec.segment_length >= 0, "environment: segment length must be nonnegative");
  require(spec.switches == 0 || spec.segment_length == 0,
          "environment: give a switch count or a segment length, not both");
  if (spec.family == EnvFamily::lower_bound) {
    require(spec.tau >= 0.0 && spec.tau <= spec.horizon * spec.diameter,
            "environment: tau must lie in [0, T*D]");
  }
}

/** True when targets/directions are held constant within segments. */
inline bool segmented(const EnvironmentSpec& spec) {
  return spec.switches > 0 || spec.segment_length > 0;
}

inline Blocks resolve_segments(const EnvironmentSpec& spec) {
  if (spec.segment_length > 0) return uniform_blocks(spec.horizon, spec.segment_length);
  if (spec.switches > 0) {
    const int count = std::min(spec.horizon, spec.switches + 1);
    return count_blocks(spec.horizon, count);
  }
  return uniform_blocks(spec.horizon, spec.horizon);
}

/**
 * f_t(x) = (1/2)||x - theta_t||^2 for feasible targets theta_t. On the
 * ball the gradient x - theta_t has norm at most D, so G = D, and values
 * lie in [0, D^2/2].
 */
inline std::vector<LossRound> make_quadratic_tracking(const EnvironmentSpec& spec,
                                                      const FeasibleSet& set) {
  validate(spec);
  require(spec.family == EnvFamily::quadratic_tracking,
          "make_quadratic_tracking: spec is for a different family");
  const double diameter = set.diameter();
  const double range = diameter * diameter / 2.0;
  Rng rng = seeded_rng(mix_seed(spec.seed, 0x71));
  std::vector<Vector> targets;
  targets.reserve(static_cast<std::size_t>(spec.horizon));
  if (segmented(spec)) {
    const Blocks segments = resolve_segments(spec);
    for (int j = 0; j < segments.count(); ++j) {
      const Vector theta = random_point(set, rng);
      for (int t = segments.begin(j); t < segments.end(j); ++t) targets.push_back(theta);
    }
  } else {
    Vector theta = random_point(set, rng);
    targets.push_back(theta);
    for (int t = 1; t < spec.horizon; ++t) {
      Vector step = random_unit_vector(rng, set.dimension());
      theta = project(set, add_scaled(theta, spec.drift, step));
      targets.push_back(theta);
    }
  }
  std::vector<LossRound> rounds;
  rounds.reserve(targets.size());
  for (int t = 0; t < spec.horizon; ++t)
    rounds.push_back(
        make_quadratic_round(t, targets[static_cast<std::size_t>(t)], range, diameter));
  return rounds;
}

/**
 * f_t(x) = <g_t, x> with ||g_t|| = G. Values on the ball lie in
 * [-GD/2, GD/2], so a = -GD/2 and c = GD.
 */
inline std::vector<LossRound> make_linear_adversary(const EnvironmentSpec& spec,
                                                    const FeasibleSet& set) {
  validate(spec);
  require(spec.family == EnvFamily::linear_adversary,
          "make_linear_adversary: spec is for a different family");
  const double G = spec.gradient_bound;
  const double floor = -G * set.diameter() / 2.0;
  const double range = G * set.diameter();
  Rng rng = seeded_rng(mix_seed(spec.seed, 0x1f));
  std::vector<LossRound> rounds;
  rounds.reserve(static_cast<std::size_t>(spec.horizon));
  if (segmented(spec)) {
    const Blocks segments = resolve_segments(spec);
    for (int j = 0; j < segments.count(); ++j) {
      const Vector g = scaled(random_unit_vector(rng, set.dimension()), G);
      for (int t = segments.begin(j); t < segments.end(j); ++t)
        rounds.push_back(make_linear_round(t, g, floor, range, G));
    }
  } else {
    for (int t = 0; t < spec.horizon; ++t) {
      const Vector g = scaled(random_unit_vector(rng, set.dimension()), G);
      rounds.push_back(make_linear_round(t, g, floor, range, G));
    }
  }
  return rounds;
}

/**
 * Hard instance: the horizon is split into M = ceil(tau/D) blocks; each
 * round's loss is <eps_t * G * v, x> for a fixed unit vector v and
 * i.i.d. random signs eps_t. The returned comparator is piecewise
 * constant, equal per block to the feasible minimizer of the block's
 * summed loss, and its path length never exceeds tau.
 */
inline std::pair<std::vector<LossRound>, ComparatorSequence> make_lowerbound_instance(
    int horizon, double tau, const FeasibleSet& set, double gradient_bound, std::uint64_t seed) {
  require(horizon >= 1, "lower-bound instance: horizon must be >= 1");
  require(gradient_bound > 0.0 && std::isfinite(gradient_bound),
          "lower-bound instance: gradient bound must be positive and finite");
  const double diameter = set.diameter();
  require(tau >= 0.0 && tau <= horizon * diameter,
          "lower-bound instance: tau must lie in [0, T*D]");
  int blocks_wanted = std::max(1, static_cast<int>(std::ceil(tau / diameter - 1e-12)));
  blocks_wanted = std::min(blocks_wanted, horizon);
  const Blocks blocks = count_blocks(horizon, blocks_wanted);

  const double floor = -gradient_bound * diameter / 2.0;
  const double range = gradient_bound * diameter;
  Rng rng = seeded_rng(mix_seed(seed, 0x2b));
  const Vector v = random_unit_vector(rng, set.dimension());
  std::bernoulli_distribution coin(0.5);
  std::vector<LossRound> rounds;
  rounds.reserve(static_cast<std::size_t>(horizon));
  for (int t = 0; t < horizon; ++t) {
    const double sign = coin(rng) ? 1.0 : -1.0;
    rounds.push_back(make_linear_round(t, scaled(v, sign * gradient_bound), floor, range,
                                       gradient_bound));
  }

  std::vector<Vector> block_points;
  block_points.reserve(static_cast<std::size_t>(blocks.count()));
  for (int j = 0; j < blocks.count(); ++j) {
    Vector sum = zeros(set.dimension());
    for (int t = blocks.begin(j); t < blocks.end(j); ++t)
      sum = add_scaled(sum, 1.0, *rounds[static_cast<std::size_t>(t)].linear_gradient);
    const double n = norm(sum);
    block_points.push_back(n == 0.0 ? zeros(set.dimension())
                                    : scaled(sum, -set.radius() / n));
  }
  return {std::move(rounds), piecewise_constant_comparator(block_points, blocks)};
}

/**
 * Feasible minimizer of a summed loss over one block: closed form for
 * linear rounds, dense grid search (201 points per axis, d <= 3)
 * otherwise.
 */
inline Vector best_point_for_block(const std::vector<LossRound>& rounds, int begin, int end,
                                   const FeasibleSet& set) {
  require(begin >= 0 && end <= static_cast<int>(rounds.size()) && begin < end,
          "best_point_for_block: bad block range");
  bool all_linear = true;
  for (int t = begin; t < end; ++t)
    if (!rounds[static_cast<std::size_t>(t)].linear_gradient) all_linear = false;
  if (all_linear) {
    Vector sum = zeros(set.dimension());
    for (int t = begin; t < end; ++t)
      sum = add_scaled(sum, 1.0, *rounds[static_cast<std::size_t>(t)].linear_gradient);
    const double n = norm(sum);
    return n == 0.0 ? zeros(set.dimension()) : scaled(sum, -set.radius() / n);
  }
  const int d = set.dimension();
  if (d > 3)
    throw std::invalid_argument(
        "best_point_for_block: grid search unsupported above dimension 3 for nonlinear losses");
  const int points_per_axis = 201;
  const double r = set.radius();
  const double step = 2.0 * r / (points_per_axis - 1);
  Vector best = zeros(d);
  double best_value = 0.0;
  double best_norm2 = 0.0;
  bool have_best = false;
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  const long total = static_cast<long>(std::pow(points_per_axis, d));
  Vector candidate(static_cast<std::size_t>(d));
  for (long flat = 0; flat < total; ++flat) {
    long rest = flat;
    for (int axis = 0; axis < d; ++axis) {
      idx[static_cast<std::size_t>(axis)] = static_cast<int>(rest % points_per_axis);
      rest /= points_per_axis;
    }
    for (int axis = 0; axis < d; ++axis)
      candidate[static_cast<std::size_t>(axis)] = -r + step * idx[static_cast<std::size_t>(axis)];
    if (!set.contains(candidate)) continue;
    double value = 0.0;
    for (int t = begin; t < end; ++t) value += rounds[static_cast<std::size_t>(t)].value(candidate);
    const double n2 = squared_norm(candidate);
    // near-ties broken toward the origin so results do not depend on scan order
    const double slack = 1e-15 * std::max(1.0, std::abs(value));
    if (!have_best || value < best_value - slack ||
        (value <= best_value + slack && n2 < best_norm2)) {
      best_value = value;
      best = candidate;
      best_norm2 = n2;
      have_best = true;
    }
  }
  require(have_best, "best_point_for_block: grid search found no feasible candidate");
  return best;
}

/** Piecewise-constant comparator taking each block's best fixed point. */
inline ComparatorSequence best_block_comparators(const std::vector<LossRound>& rounds,
                                                 const Blocks& blocks, const FeasibleSet& set) {
  require(blocks.count() >= 1 && blocks.bounds.back() == static_cast<int>(rounds.size()),
          "best_block_comparators: blocks must partition the loss sequence");
  std::vector<Vector> points;
  points.reserve(static_cast<std::size_t>(blocks.count()));
  for (int j = 0; j < blocks.count(); ++j)
    points.push_back(best_point_for_block(rounds, blocks.begin(j), blocks.end(j), set));
  return piecewise_constant_comparator(points, blocks);
}

/** A generated loss sequence together with its domain and constants. */
struct Environment {
  EnvironmentSpec spec;
  FeasibleSet set;
  std::vector<LossRound> rounds;
  double value_floor = 0.0;     // a
  double value_range = 0.0;     // c
  double gradient_bound = 0.0;  // G
  Blocks segments;              // switching structure; one block when unswitched
  std::optional<ComparatorSequence> pinned_comparator;  // lower-bound construction only
  double requested_tau = 0.0;
  double realized_tau = 0.0;    // path length of the pinned comparator
};

inline Environment make_environment(const EnvironmentSpec& spec) {
  validate(spec);
  Environment env{spec, FeasibleSet(spec.dimension, spec.diameter), {}, 0.0, 0.0, 0.0, {}, {},
                  0.0, 0.0};
  switch (spec.family) {
    case EnvFamily::quadratic_tracking:
      env.rounds = make_quadratic_tracking(spec, env.set);
      env.value_floor = 0.0;
      env.value_range = spec.diameter * spec.diameter / 2.0;
      env.gradient_bound = spec.diameter;
      env.segments = resolve_segments(spec);
      break;
    case EnvFamily::linear_adversary:
      env.rounds = make_linear_adversary(spec, env.set);
      env.value_floor = -spec.gradient_bound * spec.diameter / 2.0;
      env.value_range = spec.gradient_bound * spec.diameter;
      env.gradient_bound = spec.gradient_bound;
      env.segments = resolve_segments(spec);
      break;
    case EnvFamily::lower_bound: {
      auto [rounds, comparator] =
          make_lowerbound_instance(spec.horizon, spec.tau, env.set, spec.gradient_bound, spec.seed);
      env.rounds = std::move(rounds);
      env.value_floor = -spec.gradient_bound * spec.diameter / 2.0;
      env.value_range = spec.gradient_bound * spec.diameter;
      env.gradient_bound = spec.gradient_bound;
      int blocks_wanted = std::max(1, static_cast<int>(std::ceil(spec.tau / spec.diameter - 1e-12)));
      blocks_wanted = std::min(blocks_wanted, spec.horizon);
      env.segments = count_blocks(spec.horizon, blocks_wanted);
      env.requested_tau = spec.tau;
      env.realized_tau = path_length(comparator);
      env.pinned_comparator = std::move(comparator);
      break;
    }
  }
  return env;
}

/** Best fixed feasible point for the whole sequence (one-block special case). */
inline ComparatorSequence constant_best_comparator(const Environment& env) {
  Vector point;
  bool all_quadratic = true;
  for (const LossRound& round : env.rounds)
    if (!round.quadratic_target) all_quadratic = false;
  if (all_quadratic) {
    // the unconstrained minimizer of a sum of quadratics is the target mean
    Vector mean = zeros(env.set.dimension());
    for (const LossRound& round : env.rounds) mean = add_scaled(mean, 1.0, *round.quadratic_target);
    point = project(env.set, scaled(mean, 1.0 / static_cast<double>(env.rounds.size())));
  } else {
    point = best_point_for_block(env.rounds, 0, static_cast<int>(env.rounds.size()), env.set);
  }
  return constant_comparator(point, static_cast<int>(env.rounds.size()));
}

/** Per-round feasible minimizers: the strongest comparator the set allows. */
inline ComparatorSequence per_round_minimizers(const Environment& env) {
  ComparatorSequence u;
  u.reserve(env.rounds.size());
  for (const LossRound& round : env.rounds) {
    if (round.quadratic_target) {
      u.push_back(project(env.set, *round.quadratic_target));
    } else if (round.linear_gradient) {
      const double n = norm(*round.linear_gradient);
      u.push_back(n == 0.0 ? zeros(env.set.dimension())
                           : scaled(*round.linear_gradient, -env.set.radius() / n));
    } else {
      u.push_back(best_point_for_block(env.rounds, round.round, round.round + 1, env.set));
    }
  }
  return u;
}

/** Per-block best fixed points, analytic for the built-in families. */
inline ComparatorSequence block_best_comparator(const Environment& env, const Blocks& blocks) {
  require(blocks.count() >= 1 && blocks.bounds.back() == static_cast<int>(env.rounds.size()),
          "block_best_comparator: blocks must partition the loss sequence");
  bool all_quadratic = true;
  for (const LossRound& round : env.rounds)
    if (!round.quadratic_target) all_quadratic = false;
  if (!all_quadratic) return best_block_comparators(env.rounds, blocks, env.set);
  std::vector<Vector> points;
  points.reserve(static_cast<std::size_t>(blocks.count()));
  for (int j = 0; j < blocks.count(); ++j) {
    Vector mean = zeros(env.set.dimension());
    for (int t = blocks.begin(j); t < blocks.end(j); ++t)
      mean = add_scaled(mean, 1.0, *env.rounds[static_cast<std::size_t>(t)].quadratic_target);
    points.push_back(project(env.set, scaled(mean, 1.0 / blocks.length(j))));
  }
  return piecewise_constant_comparator(points, blocks);
}

}  // namespace ader

#endif  // ADER_ENVIRONMENTS_HPP
