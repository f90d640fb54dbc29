#ifndef ADER_FEASIBLE_SET_HPP
#define ADER_FEASIBLE_SET_HPP

#include <limits>

#include "ader/core.hpp"

namespace ader {

/**
 * The decision domain: an origin-centered Euclidean ball of diameter D.
 * Contains the origin by construction and any two members are at most D
 * apart.  Projection onto the ball is closed form (radial scaling).
 */
class FeasibleSet {
 public:
  FeasibleSet(int dimension, double diameter)
      : dimension_(dimension), diameter_(diameter) {
    require(dimension >= 1, "FeasibleSet: dimension must be >= 1");
    require(std::isfinite(diameter) && diameter > 0.0,
            "FeasibleSet: diameter must be positive and finite");
  }

  int dimension() const { return dimension_; }
  double diameter() const { return diameter_; }
  double radius() const { return diameter_ / 2.0; }

  /** Membership with relative slack (default 1e-9) on the radius. */
  bool contains(const Vector& x, double relative_slack = 1e-9) const {
    if (static_cast<int>(x.size()) != dimension_) return false;
    return norm(x) <= radius() * (1.0 + relative_slack);
  }

 private:
  int dimension_;
  double diameter_;
};

/**
 * Euclidean projection onto the ball.  Points already inside (including
 * points produced by a previous projection, up to a few ulps of radius)
 * are returned unchanged, which makes the operation exactly idempotent.
 */
inline Vector project(const FeasibleSet& set, const Vector& x) {
  if (static_cast<int>(x.size()) != set.dimension()) {
    throw std::invalid_argument("project: dimension mismatch (" + std::to_string(x.size()) +
                                " vs " + std::to_string(set.dimension()) + ")");
  }
  require(all_finite(x), "project: input has non-finite coordinates");
  const double r = set.radius();
  const double n = norm(x);
  // Absorbs the rounding of a fresh projection so re-projecting is a no-op.
  const double inside = r * (1.0 + 32.0 * std::numeric_limits<double>::epsilon());
  if (n <= inside) return x;
  return scaled(x, r / n);
}

/** Uniform sample from the ball (direction times radius * U^(1/d)). */
inline Vector random_point(const FeasibleSet& set, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Vector dir = random_unit_vector(rng, set.dimension());
  const double r = set.radius() * std::pow(unif(rng), 1.0 / set.dimension());
  return scaled(dir, r);
}

}  // namespace ader

#endif  // ADER_FEASIBLE_SET_HPP
