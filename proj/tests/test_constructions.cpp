#include <gtest/gtest.h>

#include <algorithm>

#include "unilim/constructions.hpp"
#include "unilim/fixtures.hpp"
#include "unilim/generate.hpp"

using namespace unilim;

namespace {

std::size_t index_of(const Tower& t, const std::string& label) {
  const auto it = std::find(t.labels.begin(), t.labels.end(), label);
  if (it == t.labels.end()) throw std::runtime_error("no point " + label);
  return static_cast<std::size_t>(it - t.labels.begin());
}

std::vector<std::string> labels_of(const Tower& t, const ElementSet& s) {
  std::vector<std::string> out;
  for (auto x : members(s)) out.push_back(t.labels[x]);
  std::sort(out.begin(), out.end());
  return out;
}

Tower zero_tower(std::size_t levels) {
  Tower t;
  for (std::size_t n = 0; n < levels; ++n) {
    t.labels.push_back(point_label(n));
    t.level_sizes.push_back(n + 1);
    t.level_metrics.emplace_back(n + 1);
  }
  return validate_tower(t);
}

PointedSpace pointed(std::size_t size, const Rational& w) {
  PointedSpace p{Pseudometric(size), 0, {}};
  for (std::size_t i = 0; i < size; ++i)
    for (std::size_t j = i + 1; j < size; ++j) p.metric.set(i, j, w);
  return p;
}

}  // namespace

TEST(Product, T1Squared) {
  const Tower p = product_tower(fixtures::t1(), fixtures::t1());
  EXPECT_EQ(p.level_sizes, (std::vector<std::size_t>{1, 4, 9}));
  EXPECT_EQ(p.labels[0], "(a,a)");
  const std::size_t ab = index_of(p, "(a,b)"), ba = index_of(p, "(b,a)");
  EXPECT_LT(ab, 4u);
  EXPECT_LT(ba, 4u);
  EXPECT_EQ(p.metric(1)(ab, ba), Rational(1));
  EXPECT_EQ(p.top_metric()(index_of(p, "(a,a)"), index_of(p, "(c,b)")), Rational(2));
  EXPECT_EQ(height(p, index_of(p, "(c,a)")), 2u);
  EXPECT_EQ(height(p, index_of(p, "(b,b)")), 1u);
  // Level n is exactly X_n × Y_n.
  for (std::size_t n = 0; n < 3; ++n)
    for (std::size_t q = 0; q < p.level_size(n); ++q) {
      const auto& l = p.labels[q];
      EXPECT_LT(static_cast<std::size_t>(l[1] - 'a'), n + 1);
      EXPECT_LT(static_cast<std::size_t>(l[3] - 'a'), n + 1);
    }
}

TEST(Product, WithSinglePointFactor) {
  Tower one;
  one.labels = {"o"};
  one.level_sizes = {1};
  one.level_metrics = {Pseudometric(1)};
  const Tower p = product_tower(fixtures::two_point_target(), validate_tower(one));
  EXPECT_EQ(p.labels, (std::vector<std::string>{"(p,o)", "(q,o)"}));
  EXPECT_EQ(p.top_metric(), fixtures::two_point_target().top_metric());
}

TEST(Product, LevelCountMismatch) {
  try {
    product_tower(fixtures::t1(), fixtures::two_point(1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::LevelCountMismatch);
  }
}

TEST(Multiplicativity, DiscreteAndIndiscreteFactors) {
  EXPECT_TRUE(check_multiplicativity(fixtures::t1(), fixtures::t1()).equal);
  EXPECT_TRUE(check_multiplicativity(zero_tower(3), zero_tower(3)).equal);
  EXPECT_TRUE(check_multiplicativity(fixtures::t1(), zero_tower(3)).equal);
  EXPECT_TRUE(check_multiplicativity(fixtures::two_point(0), fixtures::two_point(1)).equal);
}

TEST(Multiplicativity, RandomPairs) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Rng rng(seed);
    Profile p;
    p.levels = 1 + rng.below(3);
    p.max_size = 4;
    const Tower a = generate_tower(rng, p);
    const Tower b = generate_tower(rng, p);
    EXPECT_TRUE(check_multiplicativity(a, b).equal) << seed;
  }
}

TEST(Group, FixtureG1) {
  const GroupTower g = fixtures::g1();
  EXPECT_EQ(g.tower.level_sizes, (std::vector<std::size_t>{2, 4, 8}));
  EXPECT_EQ(g.tower.labels[0], "000");
  EXPECT_EQ(g.tower.top_metric()(index_of(g.tower, "100"), index_of(g.tower, "011")), Rational(7, 4));
  EXPECT_EQ(ordered_product_ball(g, {2, 2, 2}).count(), 8u);
  EXPECT_EQ(ordered_product_ball(g, {Rational(1, 8), Rational(1, 8), Rational(1, 8)}).count(), 1u);

  const auto v = check_group_limit(g, fixtures::g1_radii());
  EXPECT_EQ(labels_of(g.tower, v.product_ball), (std::vector<std::string>{"000", "001", "010", "011"}));
  EXPECT_EQ(v.sum_ball, v.product_ball);
  EXPECT_TRUE(v.ball_matches);
  EXPECT_TRUE(v.commute);
  EXPECT_TRUE(v.halving_holds);
  EXPECT_TRUE(v.eq_holds);
  EXPECT_TRUE(v.passed);
}

TEST(Group, RadiiErrors) {
  const GroupTower g = fixtures::g1();
  EXPECT_THROW(check_group_limit(g, {1, 1}), Error);
  EXPECT_THROW(check_group_limit(g, {1, 0, 1}), Error);
}

TEST(Group, InvarianceViolation) {
  // ℤ4 with d(1,2) = 2 but d(0,1) = 1: translating by 1 changes a distance.
  GroupTower g;
  g.tower.labels = {"0", "1", "2", "3"};
  g.tower.level_sizes = {4};
  Pseudometric d(4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j) d.set(i, j, 1);
  d.set(1, 2, 2);
  g.tower.level_metrics = {d};
  g.op.assign(4, std::vector<std::size_t>(4));
  for (std::size_t x = 0; x < 4; ++x)
    for (std::size_t y = 0; y < 4; ++y) g.op[x][y] = (x + y) % 4;
  try {
    validate_group_tower(g);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvarianceViolation);
    EXPECT_EQ(e.witness(), (std::vector<std::size_t>{0, 0, 1, 1}));
  }
  g.op[1][1] = 3;
  EXPECT_THROW(validate_group_tower(g), Error);
  g.op.pop_back();
  try {
    validate_group_tower(g);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotAGroup);
  }
}

TEST(Group, RandomGroupsPass) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Rng rng(seed);
    const GroupTower g = random_group_tower(rng, Profile{}.value_pool);
    const auto radii = random_radii(rng, g.tower);
    EXPECT_TRUE(check_group_limit(g, radii).passed) << seed;
  }
}

TEST(Box, DyadicFactors) {
  const auto f = fixtures::dyadic_factors();
  const Tower t = box_tower(f, 3);
  EXPECT_EQ(t.level_sizes, (std::vector<std::size_t>{2, 4, 8}));
  EXPECT_EQ(t.labels[0], "(*,*,*)");
  EXPECT_EQ(t.top_metric()(index_of(t, "(1,*,*)"), index_of(t, "(1,1,*)")), Rational(1, 2));
  EXPECT_EQ(t.top_metric()(index_of(t, "(*,*,*)"), index_of(t, "(1,1,1)")), Rational(1));
  EXPECT_EQ(box_tower(f, 1).level_sizes, std::vector<std::size_t>{2});
  EXPECT_TRUE(check_box_limit(f, 3).equal);
}

TEST(Box, IndiscreteAndShapeErrors) {
  const std::vector<PointedSpace> flat = {pointed(2, 0), pointed(3, 0)};
  const auto v = check_box_limit(flat, 2);
  EXPECT_TRUE(v.equal);
  EXPECT_EQ(box_tower(flat, 2).level_sizes, (std::vector<std::size_t>{2, 6}));
  EXPECT_THROW(box_layout(flat, 0), Error);
  EXPECT_THROW(box_layout(flat, 3), Error);
  EXPECT_THROW(box_layout({pointed(2, 1), pointed(1, 1)}, 2), Error);
  PointedSpace bad = pointed(2, 1);
  bad.basepoint = 2;
  EXPECT_THROW(box_layout({bad}, 1), Error);
}

TEST(Box, RandomFactorsPass) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Rng rng(seed);
    const auto f = random_factors(rng, Profile{}.value_pool);
    EXPECT_TRUE(check_box_limit(f, f.size()).equal) << seed;
  }
}
