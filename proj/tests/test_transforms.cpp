#include <doctest.h>

#include <random>
#include <vector>

#include "powerdist/transforms.hpp"
#include "test_helpers.hpp"

using namespace powerdist;

namespace {
std::vector<double> grid(double lo, double hi, int count) {
  std::vector<double> g(count);
  for (int i = 0; i < count; ++i) g[i] = lo + (hi - lo) * i / (count - 1);
  return g;
}
}  // namespace

TEST_CASE("transform evaluation") {
  CHECK(Transform::scale(2.0)(3.0) == 6.0);
  CHECK(Transform::snowflake(0.5)(4.0) == 2.0);
  CHECK(Transform::truncate(1.0)(4.0) == 1.0);
  CHECK(Transform::truncate(1.0)(0.25) == 0.25);
  CHECK(Transform::bounded()(4.0) == 0.8);
  CHECK(Transform::discrete_step()(0.0) == 0.0);
  CHECK(Transform::discrete_step()(7.0) == 1.0);
  CHECK_THROWS_AS(Transform::snowflake(1.5), std::invalid_argument);
  CHECK_THROWS_AS(Transform::scale(0.0), std::invalid_argument);
  CHECK_THROWS_AS(Transform::scale(1.0)(-1.0), std::invalid_argument);
}

TEST_CASE("staircase map including the repaired point") {
  const Transform t = Transform::piecewise_c9();
  CHECK(t(0.0) == 0.0);
  CHECK(t(0.5) == 0.5);
  CHECK(t(1.0) == 1.0);
  CHECK(t(1.5) == 1.0);
  CHECK(t(2.0) == 1.0);  // left-continuous repair at the skipped point
  CHECK(t(2.5) == 1.5);
  CHECK(t(3.0) == 2.0);
  CHECK(t(100.0) == 2.0);
}

TEST_CASE("custom tables interpolate and validate") {
  const Transform t = Transform::custom_table({{0.0, 0.0}, {1.0, 1.0}, {2.0, 4.0}});
  CHECK(t(0.5) == 0.5);
  CHECK(t(1.5) == 2.5);
  CHECK(t(2.0) == 4.0);
  CHECK(t(10.0) == 4.0);  // constant beyond the table
  CHECK_THROWS_AS(Transform::custom_table({{1.0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(Transform::custom_table({{0.0, 0.0}, {1.0, 2.0}, {2.0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(Transform::custom_table({{0.0, 0.0}, {0.0, 1.0}}), std::invalid_argument);
}

TEST_CASE("transform parsing") {
  CHECK(parse_transform("snowflake:0.5").kind() == Transform::Kind::snowflake);
  CHECK(parse_transform("scale:2").parameter() == 2.0);
  CHECK(parse_transform("bounded").kind() == Transform::Kind::bounded);
  CHECK_THROWS_AS(parse_transform("snowflake"), std::invalid_argument);
  CHECK_THROWS_AS(parse_transform("mystery:1"), std::invalid_argument);
}

TEST_CASE("apply on frozen examples") {
  const auto m = DissimilarityMatrix::from_entries(2, {0, 1, 1, 0});
  const auto scaled = apply_transform(m, Transform::scale(2.0));
  CHECK(scaled(0, 1) == 2.0);
  CHECK(scaled(1, 1) == 0.0);

  // Euclidean {0, 1, 4}: entries 1, 3, 4 under the square root map
  const auto line = DissimilarityMatrix::from_entries(3, {0, 1, 4, 1, 0, 3, 4, 3, 0});
  const auto snow = apply_transform(line, Transform::snowflake(0.5));
  CHECK(snow(0, 1) == 1.0);
  CHECK(snow(1, 2) == doctest::Approx(1.7320508075688772).epsilon(1e-15));
  CHECK(snow(0, 2) == 2.0);
  CHECK(testhelp::oracle_triangle_holds(snow));  // 2 <= 1 + sqrt(3)

  // a transform that crushes entries to zero yields a degenerate but valid matrix
  const auto crushed = apply_transform(line, Transform::custom_table({{0.0, 0.0}, {5.0, 0.0}}));
  CHECK_FALSE(crushed.nondegenerate());
}

TEST_CASE("metric preservation of the built-ins on random metric matrices") {
  std::mt19937_64 rng(101);
  const std::vector<Transform> specs{Transform::scale(2.5),    Transform::snowflake(0.5),
                                     Transform::truncate(4.0), Transform::bounded(),
                                     Transform::discrete_step(), Transform::piecewise_c9()};
  for (int it = 0; it < 60; ++it) {
    const auto m = testhelp::random_metric_matrix(rng, 3 + it % 8);
    for (const Transform& t : specs) {
      const auto out = apply_transform(m, t);
      CAPTURE(t.describe());
      CHECK(testhelp::oracle_triangle_holds(out));
      CHECK(t.analytic_metric_preserving().value());
    }
  }
}

TEST_CASE("snowflake composition") {
  std::mt19937_64 rng(103);
  for (int it = 0; it < 30; ++it) {
    const auto m = testhelp::random_metric_matrix(rng, 5);
    const auto ab = apply_transform(apply_transform(m, Transform::snowflake(0.7)), Transform::snowflake(0.6));
    const auto direct = apply_transform(m, Transform::snowflake(0.42));
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t j = 0; j < m.size(); ++j)
        CHECK(ab(i, j) == doctest::Approx(direct(i, j)).epsilon(1e-12));
  }
}

TEST_CASE("necessary conditions: snowflake passes, squaring fails at (1, 1)") {
  const auto sample = grid(0.0, 10.0, 101);
  const NecessaryConditionsReport ok = necessary_conditions_check(Transform::snowflake(0.5), sample);
  CHECK(ok.all_pass());

  // piecewise-linear squaring through (0,0), (1,1), (2,4)
  const Transform square = Transform::custom_table({{0.0, 0.0}, {1.0, 1.0}, {2.0, 4.0}});
  const std::vector<double> small{0.0, 0.5, 1.0};
  const NecessaryConditionsReport bad = necessary_conditions_check(square, small);
  CHECK_FALSE(bad.subadditive);
  REQUIRE(bad.subadditivity_witness.has_value());
  CHECK(bad.subadditivity_witness->x == 1.0);
  CHECK(bad.subadditivity_witness->y == 1.0);
  CHECK(bad.subadditivity_witness->lhs == 4.0);
  CHECK(bad.subadditivity_witness->rhs == 2.0);

  const Transform zero = Transform::custom_table({{0.0, 0.0}, {5.0, 0.0}});
  const NecessaryConditionsReport z = necessary_conditions_check(zero, std::vector<double>{0.0, 1.0});
  CHECK_FALSE(z.zero_preimage);
  CHECK(*z.zero_preimage_witness == 1.0);
}

TEST_CASE("sufficient conditions") {
  {
    const auto sample = grid(0.0, 5.0, 101);
    const SufficientConditionsReport r = sufficient_conditions_check(Transform::piecewise_c9(), sample);
    CHECK(r.all_pass());
  }
  {
    const SufficientConditionsReport r =
        sufficient_conditions_check(Transform::discrete_step(), grid(0.0, 5.0, 101));
    CHECK(r.all_pass());
  }
  {
    // a decreasing custom table is rejected at construction; build a
    // non-isotone map via a table that dips only between knots is impossible
    // by construction, so probe a genuinely non-isotone function through the
    // sampled checks with a synthetic table failing subadditivity instead.
    const Transform square = Transform::custom_table({{0.0, 0.0}, {1.0, 1.0}, {2.0, 4.0}});
    const SufficientConditionsReport r = sufficient_conditions_check(square, std::vector<double>{0.0, 1.0});
    CHECK(r.isotone);
    CHECK(r.zero_at_zero);
    CHECK_FALSE(r.subadditive);
    CHECK_FALSE(r.all_pass());
  }
}

TEST_CASE("sufficient conditions imply the necessary ones on the same sample") {
  const auto sample = grid(0.0, 8.0, 81);
  const std::vector<Transform> specs{Transform::scale(0.5),     Transform::snowflake(0.25),
                                     Transform::truncate(2.0),  Transform::bounded(),
                                     Transform::discrete_step(), Transform::piecewise_c9(),
                                     Transform::custom_table({{0.0, 0.0}, {1.0, 0.9}, {4.0, 1.1}})};
  for (const Transform& t : specs) {
    const bool suf = sufficient_conditions_check(t, sample).all_pass();
    const bool nec = necessary_conditions_check(t, sample).all_pass();
    CAPTURE(t.describe());
    if (suf) CHECK(nec);
  }
}
