#ifndef ADER_META_HPP
#define ADER_META_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "ader/core.hpp"

namespace ader {

/**
 * Which closed forms size the step-size grid: `basic` pairs with the
 * plain and surrogate experts, `dynamical` with the dynamics-aware
 * experts. Both grids are geometric with ratio exactly 2.
 */
enum class GridFlavor { basic, dynamical };

struct StepSizeGrid {
  std::vector<double> etas;  // ascending, eta_{i+1} = 2 * eta_i exactly
  GridFlavor flavor = GridFlavor::basic;

  int size() const { return static_cast<int>(etas.size()); }
};

/** Number of experts the chosen flavor needs for horizon T. */
inline int grid_size(int horizon, GridFlavor flavor) {
  require(horizon >= 1, "grid_size: horizon must be >= 1");
  const double x = flavor == GridFlavor::basic ? 1.0 + 4.0 * horizon / 7.0
                                               : 1.0 + 2.0 * horizon;
  return static_cast<int>(std::ceil(0.5 * std::log2(x))) + 1;
}

/**
 * Smallest step size of the grid; the largest is reached by doubling
 * N-1 times, so the grid brackets the optimal step size for every
 * path length in [0, T*D].
 */
inline double grid_base_eta(int horizon, double diameter, double gradient_bound,
                            GridFlavor flavor) {
  require(horizon >= 1, "grid: horizon must be >= 1");
  require(diameter > 0.0 && std::isfinite(diameter), "grid: diameter must be positive");
  require(gradient_bound > 0.0 && std::isfinite(gradient_bound),
          "grid: gradient bound must be positive");
  const double ratio = diameter / gradient_bound;
  return flavor == GridFlavor::basic ? ratio * std::sqrt(7.0 / (2.0 * horizon))
                                     : ratio * std::sqrt(1.0 / horizon);
}

inline StepSizeGrid build_grid(int horizon, double diameter, double gradient_bound,
                               GridFlavor flavor) {
  const int n = grid_size(horizon, flavor);
  StepSizeGrid grid;
  grid.flavor = flavor;
  grid.etas.reserve(static_cast<std::size_t>(n));
  double eta = grid_base_eta(horizon, diameter, gradient_bound, flavor);
  for (int i = 0; i < n; ++i) {
    grid.etas.push_back(eta);
    eta *= 2.0;  // doubling keeps the ratio-2 invariant exact
  }
  return grid;
}

/**
 * Step size minimizing the regret bound at path length P:
 * basic sqrt((7D^2+4DP)/(2TG^2)), dynamical sqrt((D^2+2DP')/(TG^2)).
 */
inline double optimal_eta(double path, int horizon, double diameter, double gradient_bound,
                          GridFlavor flavor) {
  require(path >= 0.0, "optimal_eta: path length must be nonnegative");
  const double d2 = diameter * diameter;
  const double g2 = gradient_bound * gradient_bound;
  return flavor == GridFlavor::basic
             ? std::sqrt((7.0 * d2 + 4.0 * diameter * path) / (2.0 * horizon * g2))
             : std::sqrt((d2 + 2.0 * diameter * path) / (horizon * g2));
}

/**
 * Index (1-based) of the grid step size that the analysis charges for a
 * comparator with path length P: basic floor(log2(1+4P/(7D))/2)+1,
 * dynamical floor(log2(1+2P'/D)/2)+1.
 */
inline int k_index(double path, double diameter, GridFlavor flavor) {
  require(path >= 0.0, "k_index: path length must be nonnegative");
  require(diameter > 0.0, "k_index: diameter must be positive");
  const double x = flavor == GridFlavor::basic ? 1.0 + 4.0 * path / (7.0 * diameter)
                                               : 1.0 + 2.0 * path / diameter;
  return static_cast<int>(std::floor(0.5 * std::log2(x))) + 1;
}

/** Prior weight of expert i (1-based) among n: C/(i(i+1)) with C = 1+1/n. */
inline std::vector<double> init_weights(int n) {
  require(n >= 1, "init_weights: need at least one expert");
  const double c = 1.0 + 1.0 / n;
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i)
    w[static_cast<std::size_t>(i - 1)] = c / (static_cast<double>(i) * (i + 1));
  return w;
}

enum class AlphaFlavor { basic, surrogate };

/**
 * Meta learning rate: sqrt(8/(T c^2)) when weights consume true losses
 * with range c, sqrt(2/(T G^2 D^2)) when they consume surrogate losses.
 */
inline double tune_alpha_basic(int horizon, double value_range) {
  require(horizon >= 1, "tune_alpha: horizon must be >= 1");
  require(value_range > 0.0 && std::isfinite(value_range),
          "tune_alpha: value range must be positive and finite");
  return std::sqrt(8.0 / (horizon * value_range * value_range));
}

inline double tune_alpha_surrogate(int horizon, double gradient_bound, double diameter) {
  require(horizon >= 1, "tune_alpha: horizon must be >= 1");
  require(gradient_bound > 0.0 && diameter > 0.0, "tune_alpha: G and D must be positive");
  return std::sqrt(2.0 / (horizon * gradient_bound * gradient_bound * diameter * diameter));
}

/**
 * Exponentially weighted forecaster state. Weights are recomputed each
 * round from cumulative losses (w_i proportional to
 * w1_i * exp(-alpha * L_i)) with a max shift, which is mathematically
 * identical to the multiplicative update but never overflows.
 */
struct MetaState {
  std::vector<double> weights;
  std::vector<double> log_priors;
  std::vector<double> cumulative_losses;
  double alpha = 0.0;

  int size() const { return static_cast<int>(weights.size()); }
};

inline MetaState init_meta(int experts, double alpha) {
  require(alpha >= 0.0 && std::isfinite(alpha), "init_meta: alpha must be nonnegative and finite");
  MetaState state;
  state.alpha = alpha;
  state.weights = init_weights(experts);
  state.log_priors.reserve(state.weights.size());
  for (double w : state.weights) state.log_priors.push_back(std::log(w));
  state.cumulative_losses.assign(state.weights.size(), 0.0);
  return state;
}

inline MetaState update_weights(const MetaState& state, const std::vector<double>& losses) {
  require(losses.size() == state.weights.size(),
          "update_weights: one loss per expert required");
  MetaState next = state;
  for (std::size_t i = 0; i < losses.size(); ++i) {
    if (!std::isfinite(losses[i]))
      throw std::runtime_error("update_weights: non-finite loss for expert " +
                               std::to_string(i + 1));
    next.cumulative_losses[i] += losses[i];
  }
  double shift = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < losses.size(); ++i)
    shift = std::max(shift, next.log_priors[i] - next.alpha * next.cumulative_losses[i]);
  double total = 0.0;
  for (std::size_t i = 0; i < losses.size(); ++i) {
    next.weights[i] = std::exp(next.log_priors[i] - next.alpha * next.cumulative_losses[i] - shift);
    total += next.weights[i];
  }
  for (double& w : next.weights) w /= total;
  return next;
}

/** Convex combination of the expert plays under the current weights. */
inline Vector combine(const std::vector<double>& weights, const std::vector<Vector>& plays) {
  require(!plays.empty() && weights.size() == plays.size(),
          "combine: one weight per play required");
  Vector out = zeros(static_cast<int>(plays.front().size()));
  for (std::size_t i = 0; i < plays.size(); ++i) {
    check_same_dimension(out, plays[i], "combine");
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += weights[i] * plays[i][j];
  }
  return out;
}

/**
 * Forecaster guarantee in cumulative form: the meta loss is within
 * ln(1/w1_i)/alpha + allowance of every expert's loss, where the
 * allowance is alpha*T*c^2/8 for true-loss updates and
 * alpha*T*G^2*D^2/2 for surrogate updates.
 */
struct MetaRegretCheck {
  double meta_cumulative = 0.0;
  double best_penalized = 0.0;  // min_i of L_i + ln(1/w1_i)/alpha
  int argmin_index = 0;         // 1-based; ties go to the smaller step size
  double allowance = 0.0;
  bool ok = false;
};

inline MetaRegretCheck check_meta_regret(const MetaState& state, double meta_cumulative,
                                         double allowance, double relative_slack = 1e-9) {
  require(state.alpha > 0.0, "check_meta_regret: alpha must be positive");
  MetaRegretCheck check;
  check.meta_cumulative = meta_cumulative;
  check.allowance = allowance;
  check.best_penalized = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < state.cumulative_losses.size(); ++i) {
    const double penalized = state.cumulative_losses[i] - state.log_priors[i] / state.alpha;
    if (penalized < check.best_penalized) {
      check.best_penalized = penalized;
      check.argmin_index = static_cast<int>(i) + 1;
    }
  }
  const double budget = check.best_penalized + allowance;
  const double scale = std::max({1.0, std::abs(meta_cumulative), std::abs(budget)});
  check.ok = meta_cumulative <= budget + relative_slack * scale;
  return check;
}

}  // namespace ader

#endif  // ADER_META_HPP
