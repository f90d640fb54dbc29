#ifndef ADER_BOUNDS_HPP
#define ADER_BOUNDS_HPP

#include <cmath>
#include <stdexcept>
#include <string>

#include "ader/core.hpp"
#include "ader/meta.hpp"

namespace ader {

/**
 * Closed-form worst-case dynamic-regret guarantees. Each function
 * evaluates one guarantee's display exactly; `path` is the comparator's
 * path length (or its deviation from the dynamics for the dynamical
 * variants).
 */

inline void check_bound_inputs(int horizon, double diameter, double gradient_bound, double path) {
  require(horizon >= 1, "bound: horizon must be >= 1");
  require(diameter > 0.0 && std::isfinite(diameter), "bound: diameter must be positive");
  require(gradient_bound > 0.0 && std::isfinite(gradient_bound),
          "bound: gradient bound must be positive");
  require(path >= 0.0 && std::isfinite(path), "bound: path length must be nonnegative");
}

/** Constant-step projected gradient: 7D^2/(4 eta) + (D/eta) P + eta T G^2 / 2. */
inline double ogd_bound(double eta, double diameter, double gradient_bound, int horizon,
                        double path) {
  check_bound_inputs(horizon, diameter, gradient_bound, path);
  require(eta > 0.0 && std::isfinite(eta), "bound: eta must be positive");
  return 7.0 * diameter * diameter / (4.0 * eta) + diameter / eta * path +
         eta * horizon * gradient_bound * gradient_bound / 2.0;
}

/**
 * Grid-of-experts forecaster with true-loss weight updates:
 * (3G/4) sqrt(2T(7D^2+4DP)) + (c sqrt(2T)/4)(1 + 2 ln(k+1)).
 */
inline double basic_ader_bound(double diameter, double gradient_bound, double value_range,
                               int horizon, double path) {
  check_bound_inputs(horizon, diameter, gradient_bound, path);
  require(value_range > 0.0 && std::isfinite(value_range), "bound: value range must be positive");
  const int k = k_index(path, diameter, GridFlavor::basic);
  const double first = 0.75 * gradient_bound *
                       std::sqrt(2.0 * horizon *
                                 (7.0 * diameter * diameter + 4.0 * diameter * path));
  const double second = value_range * std::sqrt(2.0 * horizon) / 4.0 *
                        (1.0 + 2.0 * std::log(static_cast<double>(k) + 1.0));
  return first + second;
}

/**
 * Same experts driven by a shared surrogate gradient; the forecaster
 * term uses GD in place of c and a doubled coefficient:
 * (3G/4) sqrt(2T(7D^2+4DP)) + (GD sqrt(2T)/2)(1 + 2 ln(k+1)).
 */
inline double improved_ader_bound(double diameter, double gradient_bound, int horizon,
                                  double path) {
  check_bound_inputs(horizon, diameter, gradient_bound, path);
  const int k = k_index(path, diameter, GridFlavor::basic);
  const double first = 0.75 * gradient_bound *
                       std::sqrt(2.0 * horizon *
                                 (7.0 * diameter * diameter + 4.0 * diameter * path));
  const double second = gradient_bound * diameter * std::sqrt(2.0 * horizon) / 2.0 *
                        (1.0 + 2.0 * std::log(static_cast<double>(k) + 1.0));
  return first + second;
}

/**
 * Dynamics-aware experts under the forecaster:
 * (3G/2) sqrt(T(D^2+2DP')) + (c sqrt(2T)/4)(1 + 2 ln(k+1)).
 */
inline double dynamical_ader_bound(double diameter, double gradient_bound, double value_range,
                                   int horizon, double path) {
  check_bound_inputs(horizon, diameter, gradient_bound, path);
  require(value_range > 0.0 && std::isfinite(value_range), "bound: value range must be positive");
  const int k = k_index(path, diameter, GridFlavor::dynamical);
  const double first = 1.5 * gradient_bound *
                       std::sqrt(static_cast<double>(horizon) *
                                 (diameter * diameter + 2.0 * diameter * path));
  const double second = value_range * std::sqrt(2.0 * horizon) / 4.0 *
                        (1.0 + 2.0 * std::log(static_cast<double>(k) + 1.0));
  return first + second;
}

/** Constant-step descent composed with the dynamics: D^2/(2 eta) + (D/eta) P' + eta T G^2 / 2. */
inline double dynamical_ogd_bound(double eta, double diameter, double gradient_bound, int horizon,
                                  double path) {
  check_bound_inputs(horizon, diameter, gradient_bound, path);
  require(eta > 0.0 && std::isfinite(eta), "bound: eta must be positive");
  return diameter * diameter / (2.0 * eta) + diameter / eta * path +
         eta * horizon * gradient_bound * gradient_bound / 2.0;
}

/** Parameters shared by the bound evaluators; fields unused by a given id are ignored. */
struct BoundParams {
  int horizon = 1;
  double diameter = 0.0;
  double gradient_bound = 0.0;
  double value_range = 0.0;  // c
  double eta = 0.0;          // constant-step baselines only
  double path = 0.0;         // P_T, or P'_T for the dynamical bounds
};

/**
 * Dispatch by bound id: 1 constant-step descent, 3 grid forecaster
 * with true-loss updates, 4 surrogate-gradient variant, 5 dynamics-aware
 * variant, 6 constant-step descent with dynamics.
 */
inline double bound_value(int bound_id, const BoundParams& p) {
  switch (bound_id) {
    case 1:
      return ogd_bound(p.eta, p.diameter, p.gradient_bound, p.horizon, p.path);
    case 3:
      return basic_ader_bound(p.diameter, p.gradient_bound, p.value_range, p.horizon, p.path);
    case 4:
      return improved_ader_bound(p.diameter, p.gradient_bound, p.horizon, p.path);
    case 5:
      return dynamical_ader_bound(p.diameter, p.gradient_bound, p.value_range, p.horizon, p.path);
    case 6:
      return dynamical_ogd_bound(p.eta, p.diameter, p.gradient_bound, p.horizon, p.path);
    default:
      throw std::invalid_argument("bound_value: unknown bound id " + std::to_string(bound_id));
  }
}

/**
 * Scale of the statistical lower bound for path budget tau:
 * G sqrt(T (D^2 + D tau)). Hard random-sign instances force every
 * algorithm to at least a fixed fraction of this in expectation.
 */
inline double lower_bound_scale(double diameter, double gradient_bound, int horizon, double tau) {
  check_bound_inputs(horizon, diameter, gradient_bound, tau);
  return gradient_bound *
         std::sqrt(static_cast<double>(horizon) * (diameter * diameter + diameter * tau));
}

}  // namespace ader

#endif  // ADER_BOUNDS_HPP
