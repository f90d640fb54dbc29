#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ader/bounds.hpp"
#include "ader/comparators.hpp"
#include "ader/environments.hpp"
#include "ader/experts.hpp"

using namespace ader;

TEST_CASE("experts start at the origin with a validated step size") {
  const FeasibleSet set(3, 2.0);
  const ExpertState state = expert_init(0.5, set);
  CHECK(state.iterate == zeros(3));
  CHECK(state.eta == 0.5);
  CHECK(expert_init(0.5, set).iterate == state.iterate);
  CHECK_THROWS_AS(expert_init(0.0, set), std::invalid_argument);
  CHECK_THROWS_AS(expert_init(-1.0, set), std::invalid_argument);
}

TEST_CASE("a descent step moves against the gradient and projects") {
  const FeasibleSet set(2, 2.0);
  ExpertState state = expert_init(0.1, set);

  SECTION("interior step needs no projection") {
    const ExpertState next = ogd_step(state, Vector{1.0, 0.0}, set);
    CHECK(next.iterate[0] == Catch::Approx(-0.1));
    CHECK(next.iterate[1] == 0.0);
  }
  SECTION("a step that leaves the ball is clamped radially") {
    state.eta = 1.0;
    state.iterate = Vector{1.0, 0.0};
    const ExpertState next = ogd_step(state, Vector{-10.0, 0.0}, set);
    CHECK(next.iterate[0] == Catch::Approx(1.0));  // (11, 0) projects back to (1, 0)
    CHECK(next.iterate[1] == 0.0);
  }
  SECTION("zero gradient leaves the iterate fixed") {
    state.iterate = Vector{0.3, -0.4};
    CHECK(ogd_step(state, Vector{0.0, 0.0}, set).iterate == state.iterate);
  }
  SECTION("value semantics: the input state is untouched") {
    const Vector before = state.iterate;
    (void)ogd_step(state, Vector{1.0, 1.0}, set);
    CHECK(state.iterate == before);
  }
  SECTION("dimension mismatch is rejected") {
    CHECK_THROWS_AS(ogd_step(state, Vector{1.0}, set), std::invalid_argument);
  }
}

TEST_CASE("a dynamics-aware step descends, projects, then applies the model") {
  const FeasibleSet set(2, 2.0);

  SECTION("shrink(0.5) halves the post-projection point") {
    ExpertState state = expert_init(0.2, set);
    const ExpertState next = dynamical_step(state, Vector{1.0, 0.0}, shrink_model(0.5), 0, set);
    CHECK(next.iterate[0] == Catch::Approx(-0.1));
  }
  SECTION("zero gradient reduces to applying the model") {
    ExpertState state = expert_init(0.2, set);
    state.iterate = Vector{0.4, 0.0};
    const ExpertState next = dynamical_step(state, Vector{0.0, 0.0}, shrink_model(0.5), 0, set);
    CHECK(next.iterate[0] == Catch::Approx(0.2));
  }
  SECTION("identity model reproduces the plain step bit for bit") {
    const DynamicalModel id = identity_model();
    Rng rng = seeded_rng(31);
    ExpertState plain = expert_init(0.3, set);
    ExpertState dyn = expert_init(0.3, set);
    for (int t = 0; t < 50; ++t) {
      const Vector g = gaussian_vector(rng, 2);
      plain = ogd_step(plain, g, set);
      dyn = dynamical_step(dyn, g, id, t, set);
      REQUIRE(plain.iterate == dyn.iterate);
    }
  }
}

TEST_CASE("standalone descent plays before observing and stays feasible") {
  const FeasibleSet set(1, 2.0);

  SECTION("all-zero gradients give a constant trajectory at the origin") {
    std::vector<LossRound> rounds;
    for (int t = 0; t < 5; ++t) rounds.push_back(make_linear_round(t, Vector{0.0}, -1.0, 2.0, 1.0));
    for (const Vector& play : run_ogd_baseline(rounds, 0.5, set)) CHECK(play == Vector{0.0});
  }
  SECTION("two-round hand trace") {
    std::vector<LossRound> rounds;
    rounds.push_back(make_linear_round(0, Vector{1.0}, -1.0, 2.0, 1.0));
    rounds.push_back(make_linear_round(1, Vector{1.0}, -1.0, 2.0, 1.0));
    const std::vector<Vector> plays = run_ogd_baseline(rounds, 0.5, set);
    REQUIRE(plays.size() == 2);
    CHECK(plays[0][0] == 0.0);
    CHECK(plays[1][0] == Catch::Approx(-0.5));
  }
  SECTION("iterates stay inside the ball on an adversarial stream") {
    EnvironmentSpec spec;
    spec.family = EnvFamily::linear_adversary;
    spec.horizon = 200;
    spec.dimension = 3;
    spec.seed = 4;
    spec.diameter = 2.0;
    const Environment env = make_environment(spec);
    for (const Vector& play : run_ogd_baseline(env.rounds, 5.0, env.set))
      CHECK(norm(play) <= env.set.radius() + 1e-12);
  }
  SECTION("linear losses: regret vs the origin is the sum of played inner products") {
    EnvironmentSpec spec;
    spec.family = EnvFamily::linear_adversary;
    spec.horizon = 50;
    spec.dimension = 2;
    spec.seed = 8;
    const Environment env = make_environment(spec);
    const std::vector<Vector> plays = run_ogd_baseline(env.rounds, 0.2, env.set);
    double direct = 0.0;
    double against_origin = 0.0;
    for (int t = 0; t < 50; ++t) {
      direct += dot(*env.rounds[static_cast<std::size_t>(t)].linear_gradient,
                    plays[static_cast<std::size_t>(t)]);
      against_origin += env.rounds[static_cast<std::size_t>(t)].value(
          plays[static_cast<std::size_t>(t)]);
    }
    CHECK(against_origin == Catch::Approx(direct));
  }
}

namespace {

double trajectory_regret(const std::vector<Vector>& plays, const std::vector<LossRound>& rounds,
                         const ComparatorSequence& u) {
  double total = 0.0;
  for (std::size_t t = 0; t < rounds.size(); ++t)
    total += rounds[t].value(plays[t]) - rounds[t].value(u[t]);
  return total;
}

}  // namespace

TEST_CASE("constant-step descent honors its worst-case guarantee") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    for (EnvFamily family : {EnvFamily::quadratic_tracking, EnvFamily::linear_adversary}) {
      EnvironmentSpec spec;
      spec.family = family;
      spec.horizon = 300;
      spec.dimension = 3;
      spec.seed = seed;
      spec.diameter = 2.0;
      spec.drift = 0.1;
      const Environment env = make_environment(spec);
      for (double eta : {0.01, 0.1, 0.5}) {
        const std::vector<Vector> plays = run_ogd_baseline(env.rounds, eta, env.set);
        const ComparatorSequence comparators[] = {constant_best_comparator(env),
                                                  per_round_minimizers(env)};
        for (const ComparatorSequence& u : comparators) {
          const double regret = trajectory_regret(plays, env.rounds, u);
          const double bound = ogd_bound(eta, env.set.diameter(), env.gradient_bound,
                                         spec.horizon, path_length(u));
          REQUIRE(regret <= bound * (1.0 + 1e-6));
        }
      }
    }
  }
}

TEST_CASE("dynamics-aware descent honors its worst-case guarantee") {
  const FeasibleSet set(2, 2.0);
  const DynamicalModel rot = rotation_model(2, 0.21);
  EnvironmentSpec spec;
  spec.family = EnvFamily::quadratic_tracking;
  spec.horizon = 250;
  spec.dimension = 2;
  spec.seed = 6;
  spec.drift = 0.05;
  const Environment env = make_environment(spec);

  for (double eta : {0.05, 0.2}) {
    ExpertState state = expert_init(eta, set);
    std::vector<Vector> plays;
    for (int t = 0; t < spec.horizon; ++t) {
      plays.push_back(state.iterate);
      const Vector g = env.rounds[static_cast<std::size_t>(t)].gradient(state.iterate);
      state = dynamical_step(state, g, rot, t, set);
    }
    const ComparatorSequence orbit = follow_dynamics_comparator(Vector{0.5, 0.0}, rot, spec.horizon);
    const ComparatorSequence comparators[] = {orbit, constant_best_comparator(env)};
    for (const ComparatorSequence& u : comparators) {
      const double regret = trajectory_regret(plays, env.rounds, u);
      const double bound = dynamical_ogd_bound(eta, env.set.diameter(), env.gradient_bound,
                                               spec.horizon, dynamic_path_length(u, rot));
      REQUIRE(regret <= bound * (1.0 + 1e-6) + 1e-9);
    }
  }
}
