#ifndef ADER_COMPARATORS_HPP
#define ADER_COMPARATORS_HPP

#include <string>
#include <vector>

#include "ader/core.hpp"
#include "ader/dynamics.hpp"
#include "ader/feasible_set.hpp"

namespace ader {

/** One feasible point per round; the benchmark the regret is measured against. */
using ComparatorSequence = std::vector<Vector>;

/** Sum over t >= 2 of ||u_t - u_{t-1}||. Zero for a constant sequence. */
inline double path_length(const ComparatorSequence& u) {
  double total = 0.0;
  for (std::size_t t = 1; t < u.size(); ++t) total += distance(u[t], u[t - 1]);
  return total;
}

/**
 * Deviation of the sequence from the dynamics: sum over t = 1..T-1 of
 * ||u_{t+1} - Phi_t(u_t)||. Zero when the sequence follows the model.
 */
inline double dynamic_path_length(const ComparatorSequence& u, const DynamicalModel& model) {
  double total = 0.0;
  for (std::size_t t = 0; t + 1 < u.size(); ++t)
    total += distance(u[t + 1], model.map(static_cast<int>(t), u[t]));
  return total;
}

/**
 * A partition of rounds 0..T-1 into contiguous blocks, stored as
 * boundaries 0 = b_0 < b_1 < ... < b_K = T. Block j covers [b_j, b_{j+1}).
 */
struct Blocks {
  std::vector<int> bounds;

  int count() const { return static_cast<int>(bounds.size()) - 1; }
  int begin(int j) const { return bounds[static_cast<std::size_t>(j)]; }
  int end(int j) const { return bounds[static_cast<std::size_t>(j) + 1]; }
  int length(int j) const { return end(j) - begin(j); }
};

/**
 * Split T rounds into blocks of the given target length; the final block
 * absorbs any remainder so shorter trailing blocks never appear.
 */
inline Blocks uniform_blocks(int horizon, int block_length) {
  require(horizon >= 1, "uniform_blocks: horizon must be >= 1");
  require(block_length >= 1, "uniform_blocks: block length must be >= 1");
  Blocks blocks;
  blocks.bounds.push_back(0);
  int start = 0;
  while (start + block_length <= horizon) {
    start += block_length;
    blocks.bounds.push_back(start);
  }
  if (blocks.bounds.back() != horizon) {
    if (blocks.count() == 0) {
      blocks.bounds.push_back(horizon);
    } else {
      blocks.bounds.back() = horizon;  // fold the remainder into the last block
    }
  }
  return blocks;
}

/**
 * Split T rounds into exactly `count` blocks of equal base length; the
 * final block absorbs the remainder when count does not divide T.
 */
inline Blocks count_blocks(int horizon, int count) {
  require(horizon >= 1, "count_blocks: horizon must be >= 1");
  require(count >= 1 && count <= horizon, "count_blocks: need 1 <= count <= horizon");
  const int base = horizon / count;
  Blocks blocks;
  blocks.bounds.push_back(0);
  for (int j = 1; j < count; ++j) blocks.bounds.push_back(j * base);
  blocks.bounds.push_back(horizon);
  return blocks;
}

/** Constant sequence u_t = point for all rounds. */
inline ComparatorSequence constant_comparator(const Vector& point, int horizon) {
  require(horizon >= 1, "constant_comparator: horizon must be >= 1");
  return ComparatorSequence(static_cast<std::size_t>(horizon), point);
}

/**
 * The sequence generated by the dynamics from a start point:
 * u_1 = start, u_{t+1} = Phi_t(u_t). Its dynamic path length is zero.
 */
inline ComparatorSequence follow_dynamics_comparator(const Vector& start,
                                                     const DynamicalModel& model, int horizon) {
  require(horizon >= 1, "follow_dynamics_comparator: horizon must be >= 1");
  ComparatorSequence u;
  u.reserve(static_cast<std::size_t>(horizon));
  u.push_back(start);
  for (int t = 0; t + 1 < horizon; ++t) u.push_back(model.map(t, u.back()));
  return u;
}

/** Piecewise-constant sequence taking value points[j] on block j. */
inline ComparatorSequence piecewise_constant_comparator(const std::vector<Vector>& points,
                                                        const Blocks& blocks) {
  require(static_cast<int>(points.size()) == blocks.count(),
          "piecewise_constant_comparator: one point per block required");
  ComparatorSequence u;
  u.reserve(static_cast<std::size_t>(blocks.bounds.back()));
  for (int j = 0; j < blocks.count(); ++j)
    for (int t = blocks.begin(j); t < blocks.end(j); ++t) u.push_back(points[static_cast<std::size_t>(j)]);
  return u;
}

/** A named comparator with its precomputed path measures. */
struct Comparator {
  std::string name;
  ComparatorSequence sequence;
  double path = 0.0;          // P_T
  double dynamic_path = 0.0;  // P'_T under the model the run used
};

inline Comparator make_comparator(std::string name, ComparatorSequence sequence,
                                  const DynamicalModel& model) {
  Comparator c;
  c.name = std::move(name);
  c.path = path_length(sequence);
  c.dynamic_path = dynamic_path_length(sequence, model);
  c.sequence = std::move(sequence);
  return c;
}

}  // namespace ader

#endif  // ADER_COMPARATORS_HPP
