#include <gtest/gtest.h>

#include "unilim/fixtures.hpp"
#include "unilim/generate.hpp"
#include "unilim/tower.hpp"

using namespace unilim;

namespace {

Tower t1_with_top(std::size_t i, std::size_t j, const Rational& v) {
  Tower t = fixtures::t1();
  t.level_metrics[2].set(i, j, v);
  return t;
}

template <class F>
Error expect_error(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "no error thrown";
  return Error(ErrorKind::InvalidArgument, "none");
}

}  // namespace

TEST(Rational, ParsesAndPrintsLowestTerms) {
  EXPECT_EQ(parse_rational("6/4"), Rational(3, 2));
  EXPECT_EQ(parse_rational("-2"), Rational(-2));
  EXPECT_EQ(to_string(Rational(6, 4)), "3/2");
  EXPECT_EQ(to_string(Rational(4, 2)), "2");
  EXPECT_EQ(to_string(Rational(0)), "0");
  EXPECT_THROW(parse_rational("1/0"), Error);
  EXPECT_THROW(parse_rational("x"), Error);
  EXPECT_THROW(parse_rational(""), Error);
}

TEST(Tower, FixtureT1IsValid) {
  const Tower t = fixtures::t1();
  EXPECT_EQ(t.level_count(), 3u);
  EXPECT_EQ(t.metric(2)(0, 2), Rational(2));
}

TEST(Tower, TriangleViolationNamesWitness) {
  auto e = expect_error([] { validate_tower(t1_with_top(0, 2, 3)); });
  EXPECT_EQ(e.kind(), ErrorKind::TriangleViolation);
  EXPECT_EQ(e.witness(), (std::vector<std::size_t>{2, 0, 1, 2}));
}

TEST(Tower, SubspaceViolationNamesWitness) {
  auto e = expect_error([] { validate_tower(t1_with_top(0, 1, 0)); });
  EXPECT_EQ(e.kind(), ErrorKind::SubspaceViolation);
  EXPECT_EQ(e.witness(), (std::vector<std::size_t>{1, 0, 1}));
}

TEST(Tower, NestingAndShapeErrors) {
  Tower t = fixtures::t1();
  t.level_sizes = {1, 1, 3};
  EXPECT_EQ(expect_error([&] { validate_tower(t); }).kind(), ErrorKind::NestingViolation);
  t = fixtures::t1();
  t.labels.push_back("d");
  EXPECT_EQ(expect_error([&] { validate_tower(t); }).kind(), ErrorKind::NestingViolation);
  t = fixtures::t1();
  t.labels[2] = "a";
  EXPECT_EQ(expect_error([&] { validate_tower(t); }).kind(), ErrorKind::InvalidArgument);
  t = fixtures::t1();
  t.level_metrics[1].set(0, 1, -1);
  EXPECT_EQ(expect_error([&] { validate_tower(t); }).kind(), ErrorKind::NotPseudometric);
}

TEST(Tower, StrictModeRequiresRestriction) {
  Tower t = fixtures::t1();
  t.strict = true;
  EXPECT_NO_THROW(validate_tower(t));
  t.level_metrics[2].set(0, 1, Rational(1, 2));
  t.level_metrics[2].set(0, 2, Rational(3, 2));
  EXPECT_EQ(expect_error([&] { validate_tower(t); }).kind(), ErrorKind::SubspaceViolation);
}

TEST(Tower, Heights) {
  const Tower t = fixtures::t1();
  EXPECT_EQ(height(t, 0), 0u);
  EXPECT_EQ(height(t, 1), 1u);
  EXPECT_EQ(height(t, 2), 2u);
  EXPECT_EQ(pair_height(t, 0, 1), 1u);
  EXPECT_EQ(pair_height(t, 0, 2), 2u);
  EXPECT_EQ(pair_height(t, 0, 0), 0u);
  EXPECT_EQ(expect_error([&] { height(t, 3); }).kind(), ErrorKind::IndexOutOfRange);
}

TEST(Tower, GridScale) {
  const Tower t = fixtures::t1();
  EXPECT_EQ(grid_scale(t, 0).thresholds, (std::vector<Rational>{1}));
  EXPECT_EQ(grid_scale(t, 2).thresholds, (std::vector<Rational>{1, 2, 3}));
  EXPECT_THROW(grid_scale(t, 3), Error);
}

TEST(Tower, SequenceValidation) {
  const Tower t = fixtures::t1();
  EXPECT_NO_THROW(validate_sequence(t, fixtures::m1()));
  auto s = fixtures::m1();
  s.metrics[2].set(0, 1, Rational(1, 2));
  s.metrics[2].set(0, 2, Rational(3, 2));
  EXPECT_EQ(expect_error([&] { validate_sequence(t, s); }).kind(), ErrorKind::NotMonotone);
  s = fixtures::m1();
  s.metrics.pop_back();
  EXPECT_EQ(expect_error([&] { validate_sequence(t, s); }).kind(), ErrorKind::LevelCountMismatch);
  const Tower glued = fixtures::two_point(0);
  MonotonePseudometricSequence g{{Pseudometric(1), Pseudometric(2)}};
  g.metrics[1].set(0, 1, 1);
  EXPECT_EQ(expect_error([&] { validate_sequence(glued, g); }).kind(), ErrorKind::NotUniform);
}

TEST(TowerProperty, GeneratedTowersSatisfyInvariants) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    Rng rng(seed);
    Profile p;
    p.levels = 1 + rng.below(4);
    p.max_size = 8;
    const Tower t = generate_tower(rng, p);
    ASSERT_NO_THROW(validate_tower(t)) << seed;
    for (std::size_t x = 0; x < t.size(); ++x)
      for (std::size_t n = 0; n < t.level_count(); ++n) EXPECT_EQ(height(t, x) <= n, x < t.level_size(n));
    for (std::size_t n = 0; n < t.level_count(); ++n) EXPECT_FALSE(first_triangle_violation(t.metric(n)));
    if (t.strict) {
      EXPECT_NO_THROW(validate_sequence(t, level_sequence(t))) << seed;
    }
  }
}
