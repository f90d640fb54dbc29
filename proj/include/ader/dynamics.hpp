#ifndef ADER_DYNAMICS_HPP
#define ADER_DYNAMICS_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <utility>

#include "ader/core.hpp"
#include "ader/feasible_set.hpp"

namespace ader {

/**
 * A sequence of maps Phi_t from the domain into itself, one per round.
 * Every map must be a contraction: ||Phi(x) - Phi(x')|| <= ||x - x'||.
 * The map receives the 0-based round index so time-varying dynamics fit
 * the same interface.
 */
struct DynamicalModel {
  std::function<Vector(int round, const Vector&)> map;
  std::string name;
};

inline DynamicalModel identity_model() {
  return {[](int, const Vector& x) { return x; }, "identity"};
}

/** x -> rho * x with rho in (0, 1]; strict contraction for rho < 1. */
inline DynamicalModel shrink_model(double rho) {
  require(rho > 0.0 && rho <= 1.0, "shrink_model: rho must lie in (0, 1]");
  return {[rho](int, const Vector& x) { return scaled(x, rho); },
          "shrink(" + std::to_string(rho) + ")"};
}

/**
 * Rotation by a fixed angle in the (axis_i, axis_j) coordinate plane.
 * Orthogonal, so distances are preserved exactly and the ball maps onto
 * itself.
 */
inline DynamicalModel rotation_model(int dimension, double angle, int axis_i = 0, int axis_j = 1) {
  require(dimension >= 2, "rotation_model: dimension must be >= 2");
  require(axis_i >= 0 && axis_j >= 0 && axis_i < dimension && axis_j < dimension &&
              axis_i != axis_j,
          "rotation_model: invalid rotation plane");
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {[c, s, axis_i, axis_j](int, const Vector& x) {
            Vector out = x;
            out[static_cast<std::size_t>(axis_i)] = c * x[static_cast<std::size_t>(axis_i)] -
                                                    s * x[static_cast<std::size_t>(axis_j)];
            out[static_cast<std::size_t>(axis_j)] = s * x[static_cast<std::size_t>(axis_i)] +
                                                    c * x[static_cast<std::size_t>(axis_j)];
            return out;
          },
          "rotation(" + std::to_string(angle) + ")"};
}

/** x -> (1 - blend) * x + blend * anchor for a fixed feasible anchor. */
inline DynamicalModel toward_point_model(Vector anchor, double blend, const FeasibleSet& set) {
  require(blend >= 0.0 && blend <= 1.0, "toward_point_model: blend must lie in [0, 1]");
  require(set.contains(anchor), "toward_point_model: anchor must be feasible");
  return {[anchor, blend](int, const Vector& x) {
            check_same_dimension(anchor, x, "toward_point_model");
            Vector out(x.size());
            for (std::size_t i = 0; i < x.size(); ++i)
              out[i] = (1.0 - blend) * x[i] + blend * anchor[i];
            return out;
          },
          "toward_point(" + std::to_string(blend) + ")"};
}

enum class ContractionKind { identity, shrink, rotation, toward_point };

struct ContractionSpec {
  ContractionKind kind = ContractionKind::identity;
  double rho = 1.0;      // shrink
  double angle = 0.0;    // rotation, radians
  Vector anchor;         // toward_point
  double blend = 0.5;    // toward_point
};

inline DynamicalModel make_contraction(const ContractionSpec& spec, const FeasibleSet& set) {
  switch (spec.kind) {
    case ContractionKind::identity:
      return identity_model();
    case ContractionKind::shrink:
      return shrink_model(spec.rho);
    case ContractionKind::rotation:
      return rotation_model(set.dimension(), spec.angle);
    case ContractionKind::toward_point: {
      Vector anchor = spec.anchor.empty() ? zeros(set.dimension()) : spec.anchor;
      return toward_point_model(std::move(anchor), spec.blend, set);
    }
  }
  throw std::invalid_argument("make_contraction: unknown kind");
}

struct ContractionAuditReport {
  bool ok = true;
  double worst_expansion = 0.0;   // max of ||Phi(x)-Phi(y)|| - ||x-y||
  double worst_escape = 0.0;      // max of ||Phi(x)|| - radius
};

/**
 * Sampled check that the model contracts (slack 1e-12 relative) and maps
 * the domain into the domain.
 */
inline ContractionAuditReport audit_contraction(const DynamicalModel& model,
                                                const FeasibleSet& set, int pairs,
                                                std::uint64_t seed, int rounds_to_probe = 4,
                                                double relative_slack = 1e-12) {
  ContractionAuditReport report;
  Rng rng = seeded_rng(seed);
  for (int i = 0; i < pairs; ++i) {
    const int t = i % std::max(1, rounds_to_probe);
    const Vector x = random_point(set, rng);
    const Vector y = random_point(set, rng);
    const Vector fx = model.map(t, x);
    const Vector fy = model.map(t, y);
    const double before = distance(x, y);
    const double after = distance(fx, fy);
    report.worst_expansion = std::max(report.worst_expansion, after - before);
    report.worst_escape = std::max(report.worst_escape, norm(fx) - set.radius());
    if (after > before * (1.0 + relative_slack)) report.ok = false;
    if (!set.contains(fx)) report.ok = false;
  }
  return report;
}

}  // namespace ader

#endif  // ADER_DYNAMICS_HPP
