#ifndef ADER_EXPERTS_HPP
#define ADER_EXPERTS_HPP

#include <vector>

#include "ader/core.hpp"
#include "ader/dynamics.hpp"
#include "ader/feasible_set.hpp"
#include "ader/loss.hpp"

namespace ader {

enum class ExpertVariant { plain, surrogate, dynamical };

/**
 * One projected-gradient expert with a fixed step size. Updates are pure
 * value-semantics functions so a round of N experts can be advanced in
 * any order (or concurrently) and replayed exactly.
 */
struct ExpertState {
  double eta = 0.0;
  Vector iterate;
  ExpertVariant variant = ExpertVariant::plain;
};

inline ExpertState expert_init(double eta, const FeasibleSet& set,
                               ExpertVariant variant = ExpertVariant::plain) {
  require(eta > 0.0 && std::isfinite(eta), "expert_init: step size must be positive and finite");
  return {eta, zeros(set.dimension()), variant};
}

/** x <- project(x - eta * g). */
inline ExpertState ogd_step(const ExpertState& state, const Vector& g, const FeasibleSet& set) {
  check_same_dimension(state.iterate, g, "ogd_step");
  ExpertState next = state;
  next.iterate = project(set, add_scaled(state.iterate, -state.eta, g));
  return next;
}

/** x <- Phi_t(project(x - eta * g)): descend, project, then follow the dynamics. */
inline ExpertState dynamical_step(const ExpertState& state, const Vector& g,
                                  const DynamicalModel& model, int round,
                                  const FeasibleSet& set) {
  check_same_dimension(state.iterate, g, "dynamical_step");
  ExpertState next = state;
  next.iterate = model.map(round, project(set, add_scaled(state.iterate, -state.eta, g)));
  return next;
}

/**
 * Constant-step projected gradient descent run standalone. Play t is the
 * state before f_t is revealed; one gradient query per round at the
 * current iterate.
 */
inline std::vector<Vector> run_ogd_baseline(const std::vector<LossRound>& losses, double eta,
                                            const FeasibleSet& set) {
  ExpertState state = expert_init(eta, set);
  std::vector<Vector> plays;
  plays.reserve(losses.size());
  for (const LossRound& round : losses) {
    plays.push_back(state.iterate);
    state = ogd_step(state, round.gradient(state.iterate), set);
  }
  return plays;
}

}  // namespace ader

#endif  // ADER_EXPERTS_HPP
