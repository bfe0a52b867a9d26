#pragma once

// Small named instances shared by the tests, the verifier and the CLI.

#include <vector>

#include "unilim/constructions.hpp"
#include "unilim/regularity.hpp"
#include "unilim/tower.hpp"

namespace unilim::fixtures {

namespace detail {

inline Pseudometric metric(std::size_t size, std::initializer_list<std::tuple<std::size_t, std::size_t, Rational>> d) {
  Pseudometric out(size);
  for (const auto& [i, j, v] : d) out.set(i, j, v);
  return out;
}

}  // namespace detail

/// {a} ⊂ {a,b} ⊂ {a,b,c}; d⁽¹⁾(a,b) = 1; d⁽²⁾: ab = 1, bc = 1, ac = 2.
inline Tower t1() {
  Tower t;
  t.labels = {"a", "b", "c"};
  t.level_sizes = {1, 2, 3};
  t.level_metrics = {Pseudometric(1), detail::metric(2, {{0, 1, 1}}),
                     detail::metric(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 2}})};
  return validate_tower(std::move(t));
}

/// Over T1: d_0 ≡ 0; d_1(a,b) = 1; d_2: ab = 2, bc = 1, ac = 3.
inline MonotonePseudometricSequence m1() {
  return {{Pseudometric(1), detail::metric(2, {{0, 1, 1}}),
           detail::metric(3, {{0, 1, 2}, {1, 2, 1}, {0, 2, 3}})}};
}

/// {a} ⊂ {a,b}; d(a,b) = `ab`.
inline Tower two_point(const Rational& ab) {
  Tower t;
  t.labels = {"a", "b"};
  t.level_sizes = {1, 2};
  t.level_metrics = {Pseudometric(1), detail::metric(2, {{0, 1, ab}})};
  return validate_tower(std::move(t));
}

/// Two points p, q at distance 1, as a one-level tower.
inline Tower two_point_target() {
  Tower t;
  t.labels = {"p", "q"};
  t.level_sizes = {2};
  t.level_metrics = {detail::metric(2, {{0, 1, 1}})};
  return validate_tower(std::move(t));
}

/// b glued to a, sent to different points.
inline SpaceMap glued_map() { return SpaceMap{two_point(0), two_point_target(), {0, 1}}; }

/// T1 with every level metric doubled.
inline Tower t1_scaled() {
  Tower t = t1();
  for (auto& d : t.level_metrics) d = d.scaled(2);
  return validate_tower(std::move(t));
}

/// ℤ₂ ⊂ ℤ₂² ⊂ ℤ₂³ with Hamming weights 1, 1/2, 1/4.
inline GroupTower g1() { return cyclic_product_group({2, 2, 2}, {Rational(1), Rational(1, 2), Rational(1, 4)}); }

inline std::vector<Rational> g1_radii() { return {Rational(1, 2), Rational(3, 4), Rational(3, 8)}; }

/// Three two-point factors {*, 1} with d(*, 1) = 2^{-i}, i = 0, 1, 2.
inline std::vector<PointedSpace> dyadic_factors() {
  std::vector<PointedSpace> out;
  Rational w = 1;
  for (int i = 0; i < 3; ++i, w /= 2) out.push_back(PointedSpace{detail::metric(2, {{0, 1, w}}), 0, {"*", "1"}});
  return out;
}

}  // namespace unilim::fixtures
