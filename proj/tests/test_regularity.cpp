#include <gtest/gtest.h>

#include "unilim/fixtures.hpp"
#include "unilim/generate.hpp"
#include "unilim/oracle.hpp"
#include "unilim/regularity.hpp"

using namespace unilim;

namespace {

Tower indiscrete_pair() {
  Tower t;
  t.labels = {"p", "q"};
  t.level_sizes = {2};
  t.level_metrics = {Pseudometric(2)};
  return validate_tower(t);
}

SpaceMap random_map(std::uint64_t seed) {
  Rng rng(seed);
  Profile ps;
  ps.levels = 1 + rng.below(3);
  ps.max_size = 6;
  Profile pt;
  pt.levels = 1 + rng.below(2);
  pt.max_size = 4;
  SpaceMap f{generate_tower(rng, ps), generate_tower(rng, pt), {}};
  f.values = random_map_values(rng, f.source, f.target);
  return f;
}

}  // namespace

TEST(Regularity, SeparatedPairIsRegular) {
  const SpaceMap f{fixtures::two_point(1), fixtures::two_point_target(), {0, 1}};
  const auto v = is_regular_at(f, 1);
  EXPECT_TRUE(v.regular);
  EXPECT_FALSE(v.counterexample);
  EXPECT_FALSE(v.witnesses.empty());
  EXPECT_TRUE(v.subset_closed);
  EXPECT_TRUE(is_regular_at(f, 0).regular);
}

TEST(Regularity, GluedPairIsNotRegular) {
  const auto v = is_regular_at(fixtures::glued_map(), 1);
  EXPECT_FALSE(v.regular);
  ASSERT_TRUE(v.counterexample);
  EXPECT_EQ(v.counterexample->point, 1u);
  EXPECT_EQ(v.counterexample->target_eps, Rational(1));
  EXPECT_FALSE(v.subset_closed);
}

TEST(Regularity, ConstantMapIsRegular) {
  const SpaceMap f{fixtures::two_point(0), fixtures::two_point_target(), {1, 1}};
  EXPECT_TRUE(is_regular_at(f, 1).regular);
  EXPECT_THROW(is_regular_at(f, 2), Error);
  EXPECT_THROW(is_regular_at(SpaceMap{fixtures::t1(), fixtures::t1(), {0, 1, 2}}, 1, 2), Error);
}

TEST(Regularity, InvalidMaps) {
  EXPECT_THROW(is_regular_at(SpaceMap{fixtures::two_point(1), fixtures::two_point_target(), {0}}, 1), Error);
  EXPECT_THROW(is_regular_at(SpaceMap{fixtures::two_point(1), fixtures::two_point_target(), {0, 2}}, 1), Error);
}

TEST(Criterion, GluedMapFailsBothSides) {
  const auto v = continuity_criterion(fixtures::glued_map());
  EXPECT_FALSE(v.hypothesis);
  EXPECT_FALSE(v.conclusion);
  EXPECT_FALSE(v.violation);
  ASSERT_EQ(v.levels.size(), 1u);
  EXPECT_TRUE(v.levels[0].discontinuity);
  EXPECT_EQ(v.non_closed_levels, std::vector<std::size_t>{1});
  ASSERT_TRUE(v.continuity.point);
}

TEST(Criterion, IdentityOnT1) {
  const Tower t = fixtures::t1();
  const auto v = continuity_criterion(SpaceMap{t, t, {0, 1, 2}});
  EXPECT_TRUE(v.hypothesis);
  EXPECT_TRUE(v.conclusion);
  EXPECT_EQ(v.levels.size(), 2u);
  EXPECT_TRUE(v.non_closed_levels.empty());
}

TEST(Criterion, OneLevelSourceIsCheckedOnce) {
  const Tower t = fixtures::two_point_target();
  const auto v = continuity_criterion(SpaceMap{t, t, {1, 0}});
  ASSERT_EQ(v.levels.size(), 1u);
  EXPECT_TRUE(v.hypothesis);
  EXPECT_TRUE(v.conclusion);
}

TEST(Continuity, DirectCheck) {
  EXPECT_TRUE(is_continuous(SpaceMap{fixtures::t1(), indiscrete_pair(), {0, 1, 0}}).continuous);
  EXPECT_TRUE(is_continuous(SpaceMap{fixtures::t1(), fixtures::two_point_target(), {0, 1, 0}}).continuous);
  const auto v = is_continuous(fixtures::glued_map());
  EXPECT_FALSE(v.continuous);
  ASSERT_TRUE(v.witness_open);
  EXPECT_EQ(v.witness_open->count(), 1u);
}

TEST(Homeo, ScaledCopyIsHomeomorphic) {
  const SpaceMap h{fixtures::t1(), fixtures::t1_scaled(), {0, 1, 2}};
  const SpaceMap inv{fixtures::t1_scaled(), fixtures::t1(), {0, 1, 2}};
  const auto v = homeo_criterion(h, inv);
  EXPECT_TRUE(v.criterion_holds);
  EXPECT_TRUE(v.homeomorphic);
  EXPECT_EQ(v.transported.order, TopologyOrder::Equal);
  EXPECT_TRUE(v.consistent);
}

TEST(Homeo, GluedOntoSeparatedIsNot) {
  Tower sep = fixtures::two_point(1);
  const SpaceMap h{fixtures::two_point(0), sep, {0, 1}};
  const SpaceMap inv{sep, fixtures::two_point(0), {0, 1}};
  const auto v = homeo_criterion(h, inv);
  EXPECT_FALSE(v.homeomorphic);
  EXPECT_FALSE(v.criterion_holds);
  // Gluing is continuous only in the direction that merges points.
  EXPECT_FALSE(v.forward.conclusion);
  EXPECT_TRUE(v.backward.conclusion);
  EXPECT_NE(v.transported.order, TopologyOrder::Equal);
  EXPECT_TRUE(v.consistent);
}

TEST(Homeo, RejectsNonInverses) {
  const Tower t = fixtures::t1();
  try {
    homeo_criterion(SpaceMap{t, t, {0, 2, 1}}, SpaceMap{t, t, {0, 1, 2}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotInverse);
  }
  EXPECT_THROW(homeo_criterion(SpaceMap{t, fixtures::t1_scaled(), {0, 1, 2}}, SpaceMap{t, t, {0, 1, 2}}), Error);
}

TEST(RegularityProperty, ShortcutMatchesDefinition) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const SpaceMap f = random_map(seed);
    for (std::size_t n = 0; n < f.source.level_count(); ++n)
      for (std::size_t k = 0; k <= n; ++k)
        ASSERT_EQ(is_regular_at(f, n, k).regular, oracle::regular_naive(f, n, k)) << seed << " " << n << " " << k;
  }
}

TEST(RegularityProperty, CriterionIsSoundAndSharpAtFiniteScale) {
  std::size_t holds = 0, fails = 0;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const SpaceMap f = random_map(seed);
    const auto v = continuity_criterion(f);
    ASSERT_FALSE(v.violation) << seed;
    // At finite scale continuity and the criterion coincide.
    EXPECT_EQ(v.hypothesis, v.conclusion) << seed;
    // A continuous restriction is always regular.
    for (const auto& rep : v.levels)
      if (!rep.discontinuity) {
        EXPECT_TRUE(rep.regularity.regular) << seed << " level " << rep.level;
      }
    (v.hypothesis ? holds : fails)++;
  }
  EXPECT_GT(holds, 20u);
  EXPECT_GT(fails, 20u);
}
