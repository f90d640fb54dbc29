#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <stdexcept>

#include "ader/comparators.hpp"
#include "ader/core.hpp"
#include "ader/dynamics.hpp"
#include "ader/feasible_set.hpp"

using namespace ader;

TEST_CASE("vector helpers compute inner products and distances") {
  const Vector x{1.0, 2.0, 3.0};
  const Vector y{-1.0, 0.5, 2.0};
  CHECK(dot(x, y) == Catch::Approx(6.0));
  CHECK(squared_norm(x) == Catch::Approx(14.0));
  CHECK(norm(Vector{3.0, 4.0}) == Catch::Approx(5.0));
  CHECK(distance(Vector{1.0, 0.0}, Vector{0.0, 0.0}) == Catch::Approx(1.0));
  CHECK_THROWS_AS(distance(Vector{1.0}, Vector{1.0, 2.0}), std::invalid_argument);
  const Vector sum = add_scaled(x, 2.0, y);
  CHECK(sum[0] == Catch::Approx(-1.0));
  CHECK(sum[2] == Catch::Approx(7.0));
}

TEST_CASE("feasible set construction is validated") {
  CHECK_THROWS_AS(FeasibleSet(0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(FeasibleSet(2, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(FeasibleSet(2, -1.0), std::invalid_argument);
  const FeasibleSet set(3, 2.0);
  CHECK(set.dimension() == 3);
  CHECK(set.diameter() == 2.0);
  CHECK(set.radius() == 1.0);
}

TEST_CASE("projection clamps radially and fixes interior points bitwise") {
  const FeasibleSet set(2, 2.0);
  const Vector inside{0.25, -0.5};
  CHECK(project(set, inside) == inside);  // exact, no rescaling applied

  const Vector outside{3.0, 4.0};
  const Vector projected = project(set, outside);
  CHECK(norm(projected) == Catch::Approx(1.0));
  CHECK(projected[0] == Catch::Approx(0.6));
  CHECK(projected[1] == Catch::Approx(0.8));
  CHECK_THROWS_AS(project(set, Vector{1.0, 2.0, 3.0}), std::invalid_argument);
}

TEST_CASE("projection is exactly idempotent on random points") {
  const FeasibleSet set(5, 1.7);
  Rng rng = seeded_rng(7);
  std::uniform_real_distribution<double> scale(0.0, 3.0);
  for (int i = 0; i < 500; ++i) {
    Vector x = random_unit_vector(rng, 5);
    x = scaled(x, scale(rng) * set.radius());
    const Vector once = project(set, x);
    const Vector twice = project(set, once);
    REQUIRE(once == twice);  // bitwise: re-projection must be a no-op
    REQUIRE(set.contains(once));
  }
}

TEST_CASE("projection is non-expansive") {
  const FeasibleSet set(4, 2.5);
  Rng rng = seeded_rng(11);
  std::uniform_real_distribution<double> scale(0.0, 4.0);
  for (int i = 0; i < 200; ++i) {
    Vector x = scaled(random_unit_vector(rng, 4), scale(rng));
    Vector y = scaled(random_unit_vector(rng, 4), scale(rng));
    const double before = distance(x, y);
    const double after = distance(project(set, x), project(set, y));
    REQUIRE(after <= before * (1.0 + 1e-12) + 1e-15);
  }
}

TEST_CASE("random points are feasible and seed-deterministic") {
  const FeasibleSet set(3, 2.0);
  Rng a = seeded_rng(42);
  Rng b = seeded_rng(42);
  for (int i = 0; i < 100; ++i) {
    const Vector p = random_point(set, a);
    const Vector q = random_point(set, b);
    REQUIRE(p == q);
    REQUIRE(set.contains(p));
  }
}

TEST_CASE("dynamical model factories satisfy their definitions") {
  const FeasibleSet set(2, 2.0);
  const Vector x{0.4, 0.0};
  const Vector y{-0.2, 0.6};

  SECTION("identity returns its input unchanged") {
    const DynamicalModel id = identity_model();
    CHECK(id.map(0, x) == x);
  }
  SECTION("shrink halves distances for rho = 0.5") {
    const DynamicalModel shrink = shrink_model(0.5);
    CHECK(shrink.map(0, x) == Vector{0.2, 0.0});
    CHECK(distance(shrink.map(3, x), shrink.map(3, y)) == Catch::Approx(0.5 * distance(x, y)));
  }
  SECTION("rotation by 90 degrees preserves distances") {
    const DynamicalModel rot = rotation_model(2, std::acos(-1.0) / 2.0);
    const Vector rx = rot.map(0, Vector{1.0, 0.0});
    CHECK(rx[0] == Catch::Approx(0.0).margin(1e-15));
    CHECK(rx[1] == Catch::Approx(1.0));
    CHECK(distance(rot.map(1, x), rot.map(1, y)) == Catch::Approx(distance(x, y)));
  }
  SECTION("toward-point blends toward a feasible anchor") {
    const DynamicalModel pull = toward_point_model(Vector{0.0, 0.0}, 0.25, set);
    const Vector px = pull.map(0, Vector{0.8, 0.0});
    CHECK(px[0] == Catch::Approx(0.6));
  }
  SECTION("invalid parameters are rejected") {
    CHECK_THROWS_AS(shrink_model(0.0), std::invalid_argument);
    CHECK_THROWS_AS(shrink_model(1.5), std::invalid_argument);
    CHECK_THROWS_AS(rotation_model(1, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(toward_point_model(Vector{5.0, 0.0}, 0.5, set), std::invalid_argument);
  }
}

TEST_CASE("contraction audit passes every factory model") {
  const FeasibleSet set(3, 2.0);
  ContractionSpec specs[4];
  specs[0].kind = ContractionKind::identity;
  specs[1].kind = ContractionKind::shrink;
  specs[1].rho = 0.7;
  specs[2].kind = ContractionKind::rotation;
  specs[2].angle = 1.1;
  specs[3].kind = ContractionKind::toward_point;
  specs[3].anchor = Vector{0.1, 0.2, -0.3};
  specs[3].blend = 0.4;
  for (const ContractionSpec& spec : specs) {
    const DynamicalModel model = make_contraction(spec, set);
    const ContractionAuditReport report = audit_contraction(model, set, 100, 99);
    INFO(model.name);
    CHECK(report.ok);
    CHECK(report.worst_expansion <= 1e-12);
  }
}

TEST_CASE("path length sums comparator movement") {
  CHECK(path_length({Vector{0.5, 0.5}}) == 0.0);
  CHECK(path_length(ComparatorSequence(7, Vector{0.3, -0.1})) == 0.0);
  const ComparatorSequence zigzag{Vector{0.0, 0.0}, Vector{1.0, 0.0}, Vector{0.0, 0.0},
                                  Vector{1.0, 0.0}};
  CHECK(path_length(zigzag) == Catch::Approx(3.0));
}

TEST_CASE("dynamic path length reduces to path length under the identity map") {
  Rng rng = seeded_rng(5);
  const FeasibleSet set(3, 2.0);
  ComparatorSequence u;
  for (int t = 0; t < 20; ++t) u.push_back(random_point(set, rng));
  CHECK(dynamic_path_length(u, identity_model()) == path_length(u));
}

TEST_CASE("dynamic path length vanishes when the sequence follows the model") {
  const DynamicalModel shrink = shrink_model(0.5);
  const ComparatorSequence pair{Vector{1.0, 0.0}, Vector{0.5, 0.0}};
  CHECK(dynamic_path_length(pair, shrink) == 0.0);

  const FeasibleSet set(2, 2.0);
  const DynamicalModel rot = rotation_model(2, 0.3);
  const ComparatorSequence orbit = follow_dynamics_comparator(Vector{0.9, 0.0}, rot, 50);
  CHECK(dynamic_path_length(orbit, rot) == 0.0);
  CHECK(path_length(orbit) > 0.0);
  for (const Vector& point : orbit) CHECK(set.contains(point));
}

TEST_CASE("block partitions cover the horizon with the remainder folded into the tail") {
  const Blocks even = uniform_blocks(8, 4);
  CHECK(even.count() == 2);
  CHECK(even.begin(1) == 4);
  CHECK(even.end(1) == 8);

  const Blocks folded = uniform_blocks(10, 4);
  CHECK(folded.count() == 2);
  CHECK(folded.length(0) == 4);
  CHECK(folded.length(1) == 6);

  const Blocks single = uniform_blocks(2, 5);
  CHECK(single.count() == 1);
  CHECK(single.length(0) == 2);

  const Blocks counted = count_blocks(10, 3);
  CHECK(counted.count() == 3);
  CHECK(counted.length(0) == 3);
  CHECK(counted.length(1) == 3);
  CHECK(counted.length(2) == 4);

  CHECK_THROWS_AS(uniform_blocks(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(count_blocks(3, 4), std::invalid_argument);
}

TEST_CASE("piecewise constant comparators repeat each block's point") {
  const Blocks blocks = count_blocks(5, 2);
  const ComparatorSequence u =
      piecewise_constant_comparator({Vector{1.0}, Vector{-1.0}}, blocks);
  REQUIRE(u.size() == 5);
  CHECK(u[0] == Vector{1.0});
  CHECK(u[1] == Vector{1.0});
  CHECK(u[2] == Vector{-1.0});
  CHECK(u[4] == Vector{-1.0});
  CHECK_THROWS_AS(piecewise_constant_comparator({Vector{1.0}}, blocks), std::invalid_argument);
}
