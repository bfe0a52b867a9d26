#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "unilim/constructions.hpp"
#include "unilim/limit_metric.hpp"
#include "unilim/regularity.hpp"
#include "unilim/relation.hpp"
#include "unilim/tower.hpp"

namespace unilim {

/// mt19937_64 with its own bounded draws: the standard distributions are
/// free to differ between library implementations, and generated files must
/// be identical everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  /// Uniform in [0, n).
  std::size_t below(std::size_t n) {
    if (n == 0) throw Error(ErrorKind::InvalidArgument, "empty range");
    const std::uint64_t range = n;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % range;
    std::uint64_t v;
    do v = eng_();
    while (v >= limit);
    return static_cast<std::size_t>(v % range);
  }

  bool chance(std::size_t num, std::size_t den) { return below(den) < num; }

  template <class T>
  const T& pick(const std::vector<T>& v) { return v.at(below(v.size())); }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 eng_;
};

/// Seed for one (stream, seed) pair, so different checks on the same seed
/// see unrelated instances.
inline std::uint64_t mix_seed(std::uint64_t seed, std::string_view stream) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : stream) h = (h ^ c) * 0x100000001b3ull;
  h ^= seed + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}

struct Profile {
  std::size_t levels = 3;
  std::size_t max_size = 6;
  std::vector<Rational> value_pool = {Rational(1, 2), Rational(1), Rational(3, 2), Rational(2)};
  /// Draw the top size from [min_size, max_size]; 0 means `levels`.
  std::size_t min_size = 0;
};

inline constexpr std::size_t max_generated_size = 12;

inline std::string point_label(std::size_t i) {
  if (i < 26) return std::string(1, static_cast<char>('a' + i));
  return "x" + std::to_string(i);
}

namespace detail {

/// Random weights from the pool on pairs of different classes, zero inside
/// a class, closed under shortest paths. Zero pairs of the result are
/// exactly the same-class pairs because every cross weight is positive.
inline Pseudometric random_class_metric(Rng& rng, const std::vector<std::size_t>& cls, std::size_t size,
                                        const std::vector<Rational>& pool) {
  Pseudometric w(size);
  for (std::size_t i = 0; i < size; ++i)
    for (std::size_t j = i + 1; j < size; ++j) w.set(i, j, cls[i] == cls[j] ? Rational(0) : rng.pick(pool));
  return shortest_path_closure(std::move(w));
}

}  // namespace detail

inline void check_profile(const Profile& p) {
  if (p.max_size > max_generated_size)
    throw Error(ErrorKind::ProfileTooLarge,
                "top size " + std::to_string(p.max_size) + " exceeds " + std::to_string(max_generated_size),
                {p.max_size});
  if (p.levels == 0 || p.max_size < p.levels || p.min_size > p.max_size)
    throw Error(ErrorKind::InvalidArgument, "profile needs 1 <= levels <= max_size");
  if (p.value_pool.empty()) throw Error(ErrorKind::InvalidArgument, "empty value pool");
  for (const auto& v : p.value_pool)
    if (v <= 0) throw Error(ErrorKind::InvalidArgument, "value pool entries must be positive");
}

inline Tower generate_tower(Rng& rng, const Profile& p) {
  check_profile(p);
  const std::size_t lo = std::max(p.levels, p.min_size);
  const std::size_t top = lo + rng.below(p.max_size - lo + 1);

  std::vector<std::size_t> cuts;
  for (std::size_t i = 1; i < top; ++i) cuts.push_back(i);
  rng.shuffle(cuts);
  cuts.resize(p.levels - 1);
  std::sort(cuts.begin(), cuts.end());
  cuts.push_back(top);

  // Zero classes: about one point in five is glued to an earlier point.
  std::vector<std::size_t> cls(top);
  for (std::size_t i = 0; i < top; ++i) cls[i] = (i > 0 && rng.chance(1, 5)) ? cls[rng.below(i)] : i;

  Tower t;
  t.strict = rng.chance(1, 2);
  for (std::size_t i = 0; i < top; ++i) t.labels.push_back(point_label(i));
  t.level_sizes = cuts;
  const Pseudometric top_metric = detail::random_class_metric(rng, cls, top, p.value_pool);
  for (std::size_t n = 0; n < cuts.size(); ++n) {
    if (t.strict || n + 1 == cuts.size())
      t.level_metrics.push_back(top_metric.restricted(cuts[n]));
    else
      t.level_metrics.push_back(detail::random_class_metric(rng, cls, cuts[n], p.value_pool));
  }
  return validate_tower(std::move(t));
}

inline Tower generate_tower(std::uint64_t seed, const Profile& p) {
  Rng rng(seed);
  return generate_tower(rng, p);
}

/// A random uniform pseudometric on X_level: zero on the level's zero pairs.
inline Pseudometric random_uniform_pseudometric(Rng& rng, const Tower& t, std::size_t level,
                                                const std::vector<Rational>& pool) {
  const auto& d = t.metric(level);
  Pseudometric w(d.size());
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = i + 1; j < d.size(); ++j) w.set(i, j, d.is_zero_pair(i, j) ? Rational(0) : rng.pick(pool));
  return shortest_path_closure(std::move(w));
}

/// d_n = Σ_{k≤n} ρ̃_{k,n} for random uniform ρ_k (some of them zero).
inline MonotonePseudometricSequence random_sequence(Rng& rng, const Tower& t, const std::vector<Rational>& pool) {
  std::vector<Pseudometric> parts;
  MonotonePseudometricSequence out;
  for (std::size_t n = 0; n < t.level_count(); ++n) {
    for (auto& r : parts) r = extend_pseudometric(t, r, n);
    parts.push_back(rng.chance(1, 5) ? Pseudometric(t.level_size(n)) : random_uniform_pseudometric(rng, t, n, pool));
    Pseudometric sum(t.level_size(n));
    for (std::size_t i = 0; i < sum.size(); ++i)
      for (std::size_t j = i + 1; j < sum.size(); ++j) {
        Rational s = 0;
        for (const auto& r : parts) s += r(i, j);
        sum.set(i, j, s);
      }
    out.metrics.push_back(std::move(sum));
  }
  validate_sequence(t, out);
  return out;
}

/// One entourage per level, each containing the level's zero pairs: a grid
/// sublevel set, the full relation, or the zero relation plus random pairs.
inline EntourageSequence random_targets(Rng& rng, const Tower& t) {
  EntourageSequence seq;
  seq.start = 0;
  for (std::size_t n = 0; n < t.level_count(); ++n) {
    const std::size_t kind = rng.below(4);
    if (kind == 0) {
      seq.entries.push_back(Entourage::sublevel(t, n, rng.pick(grid_scale(t, n).thresholds)));
    } else if (kind == 1) {
      seq.entries.push_back(Entourage::full(n, t.level_size(n)));
    } else {
      Entourage u = Entourage::zero_relation(t, n);
      for (std::size_t x = 0; x < u.size(); ++x)
        for (std::size_t y = 0; y < u.size(); ++y)
          if (rng.chance(1, 2)) u.insert(x, y);
      seq.entries.push_back(std::move(u));
    }
  }
  return seq;
}

/// Half the time f is constant on the target's zero classes of the source
/// (so finite continuity holds), otherwise arbitrary.
inline std::vector<std::size_t> random_map_values(Rng& rng, const Tower& source, const Tower& target) {
  std::vector<std::size_t> values(source.size());
  if (rng.chance(1, 2)) {
    const auto& d = source.top_metric();
    for (std::size_t x = 0; x < source.size(); ++x) {
      values[x] = target.size();
      for (std::size_t y = 0; y < x; ++y)
        if (d(x, y) == 0) {
          values[x] = values[y];
          break;
        }
      if (values[x] == target.size()) values[x] = rng.below(target.size());
    }
  } else {
    for (auto& v : values) v = rng.below(target.size());
  }
  return values;
}

/// A cyclic product group with total order at most 24, Hamming or Lee
/// lengths, and per-coordinate weights from the pool (occasionally zero).
inline GroupTower random_group_tower(Rng& rng, const std::vector<Rational>& pool) {
  std::vector<std::size_t> orders;
  std::vector<Rational> weights;
  const std::size_t factors = 1 + rng.below(3);
  std::size_t total = 1;
  for (std::size_t i = 0; i < factors; ++i) {
    std::size_t k = 2 + rng.below(3);
    while (total * k > 24) --k;
    if (k < 2) break;
    total *= k;
    orders.push_back(k);
    weights.push_back(i > 0 && rng.chance(1, 6) ? Rational(0) : rng.pick(pool));
  }
  return cyclic_product_group(orders, weights, rng.chance(1, 2));
}

/// Radii for a group tower drawn from the level grids.
inline std::vector<Rational> random_radii(Rng& rng, const Tower& t) {
  std::vector<Rational> r;
  for (std::size_t n = 0; n < t.level_count(); ++n) r.push_back(rng.pick(grid_scale(t, n).thresholds));
  return r;
}

/// 1 to 3 pointed spaces of at most 3 points; factors after the first have
/// at least two, so every box level gains points.
inline std::vector<PointedSpace> random_factors(Rng& rng, const std::vector<Rational>& pool) {
  std::vector<PointedSpace> out;
  const std::size_t count = 1 + rng.below(3);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t m = i == 0 ? 1 + rng.below(3) : 2 + rng.below(2);
    std::vector<std::size_t> cls(m);
    for (std::size_t p = 0; p < m; ++p) cls[p] = (p > 0 && rng.chance(1, 4)) ? cls[rng.below(p)] : p;
    PointedSpace s;
    s.metric = detail::random_class_metric(rng, cls, m, pool);
    s.basepoint = rng.below(m);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace unilim
