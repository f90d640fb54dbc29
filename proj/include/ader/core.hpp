#ifndef ADER_CORE_HPP
#define ADER_CORE_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ader {

/**
 * Dense real vector.  Dimension is fixed per experiment; every routine
 * that mixes two vectors checks that their dimensions agree.
 */
using Vector = std::vector<double>;

inline void require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument(message);
}

inline void check_same_dimension(const Vector& x, const Vector& y, const char* where) {
  if (x.size() != y.size()) {
    throw std::invalid_argument(std::string(where) + ": dimension mismatch (" +
                                std::to_string(x.size()) + " vs " + std::to_string(y.size()) + ")");
  }
}

inline bool all_finite(const Vector& x) {
  for (double v : x) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

inline double dot(const Vector& x, const Vector& y) {
  check_same_dimension(x, y, "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

inline double squared_norm(const Vector& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

inline double norm(const Vector& x) { return std::sqrt(squared_norm(x)); }

/** Euclidean distance; zero exactly when the inputs are equal. */
inline double distance(const Vector& x, const Vector& y) {
  check_same_dimension(x, y, "distance");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return std::sqrt(s);
}

/** x + a*y, leaving the inputs untouched. */
inline Vector add_scaled(const Vector& x, double a, const Vector& y) {
  check_same_dimension(x, y, "add_scaled");
  Vector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + a * y[i];
  return out;
}

inline Vector scaled(const Vector& x, double a) {
  Vector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = a * x[i];
  return out;
}

inline Vector subtract(const Vector& x, const Vector& y) {
  check_same_dimension(x, y, "subtract");
  Vector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] - y[i];
  return out;
}

inline Vector zeros(int dimension) {
  require(dimension >= 1, "zeros: dimension must be >= 1");
  return Vector(static_cast<std::size_t>(dimension), 0.0);
}

// ---- deterministic randomness -------------------------------------------

using Rng = std::mt19937_64;

inline Rng seeded_rng(std::uint64_t seed) { return Rng{seed}; }

/** Derive an independent stream from a base seed (splitmix64 finalizer). */
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline Vector gaussian_vector(Rng& rng, int dimension) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector out(static_cast<std::size_t>(dimension));
  for (double& v : out) v = gauss(rng);
  return out;
}

/** Uniformly random direction on the unit sphere. */
inline Vector random_unit_vector(Rng& rng, int dimension) {
  for (;;) {
    Vector g = gaussian_vector(rng, dimension);
    const double n = norm(g);
    if (n > 1e-12) return scaled(g, 1.0 / n);
  }
}

}  // namespace ader

#endif  // ADER_CORE_HPP
