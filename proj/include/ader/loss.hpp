#ifndef ADER_LOSS_HPP
#define ADER_LOSS_HPP

#include <functional>
#include <optional>
#include <utility>

#include "ader/core.hpp"
#include "ader/feasible_set.hpp"

namespace ader {

/**
 * One round's loss: value and gradient oracles plus the bound metadata
 * the tuning formulas need.  On the domain, values lie in
 * [value_floor, value_floor + value_range] and gradient norms are at most
 * gradient_bound.
 *
 * When the loss has known structure the generator also records it
 * (linear_gradient / quadratic_target) so comparator construction can use
 * closed forms instead of search.
 */
struct LossRound {
  int round = 0;  // 0-based position in the sequence
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
  double value_floor = 0.0;     // a
  double value_range = 0.0;     // c
  double gradient_bound = 0.0;  // G
  std::optional<Vector> linear_gradient;
  std::optional<Vector> quadratic_target;
};

/** f(x) = <g, x>. */
inline LossRound make_linear_round(int round, Vector g, double value_floor, double value_range,
                                   double gradient_bound) {
  LossRound out;
  out.round = round;
  out.value_floor = value_floor;
  out.value_range = value_range;
  out.gradient_bound = gradient_bound;
  out.linear_gradient = g;
  out.value = [g](const Vector& x) { return dot(g, x); };
  out.gradient = [g](const Vector& x) {
    check_same_dimension(g, x, "linear gradient");
    return g;
  };
  return out;
}

/** f(x) = 0.5 * ||x - target||^2. */
inline LossRound make_quadratic_round(int round, Vector target, double value_range,
                                      double gradient_bound) {
  LossRound out;
  out.round = round;
  out.value_floor = 0.0;
  out.value_range = value_range;
  out.gradient_bound = gradient_bound;
  out.quadratic_target = target;
  out.value = [target](const Vector& x) {
    double s = 0.0;
    check_same_dimension(target, x, "quadratic value");
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = x[i] - target[i];
      s += d * d;
    }
    return 0.5 * s;
  };
  out.gradient = [target](const Vector& x) { return subtract(x, target); };
  return out;
}

/**
 * First-order surrogate built at an anchor point: l(x) = <g, x - anchor>
 * where g is the true gradient at the anchor.  Zero at the anchor, and
 * for convex losses the surrogate regret upper-bounds the true regret.
 */
struct SurrogateLoss {
  Vector anchor;
  Vector gradient;
};

inline double surrogate_eval(const SurrogateLoss& loss, const Vector& x) {
  check_same_dimension(loss.anchor, x, "surrogate_eval");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += loss.gradient[i] * (x[i] - loss.anchor[i]);
  return s;
}

/** Sampled audit of the declared range/gradient bounds and convexity. */
struct LossAuditReport {
  bool ok = true;
  double worst_value_excess = 0.0;     // how far a value left [a, a+c]
  double worst_gradient_excess = 0.0;  // ||grad|| - G
  double worst_convexity_gap = 0.0;    // violation of the first-order condition
};

inline LossAuditReport audit_loss_round(const LossRound& round, const FeasibleSet& set,
                                        int samples, std::uint64_t seed,
                                        double relative_slack = 1e-9) {
  LossAuditReport report;
  Rng rng = seeded_rng(seed);
  const double value_scale = std::max(1.0, std::abs(round.value_floor) + round.value_range);
  for (int i = 0; i < samples; ++i) {
    const Vector x = random_point(set, rng);
    const Vector y = random_point(set, rng);
    const double fx = round.value(x);
    const Vector gx = round.gradient(x);
    const double lo = round.value_floor - relative_slack * value_scale;
    const double hi = round.value_floor + round.value_range + relative_slack * value_scale;
    report.worst_value_excess =
        std::max({report.worst_value_excess, lo - fx, fx - hi});
    report.worst_gradient_excess = std::max(report.worst_gradient_excess,
                                            norm(gx) - round.gradient_bound);
    // f(y) >= f(x) + <g(x), y - x>
    const double linearized = fx + dot(gx, subtract(y, x));
    report.worst_convexity_gap = std::max(report.worst_convexity_gap,
                                          linearized - round.value(y));
    if (fx < lo || fx > hi) report.ok = false;
    if (norm(gx) > round.gradient_bound * (1.0 + relative_slack)) report.ok = false;
    if (linearized > round.value(y) + relative_slack * value_scale) report.ok = false;
  }
  return report;
}

}  // namespace ader

#endif  // ADER_LOSS_HPP
