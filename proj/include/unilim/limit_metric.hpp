#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "unilim/relation.hpp"
#include "unilim/tower.hpp"

namespace unilim {

/// x_0, x_1, …, x_n.
struct Chain {
  std::vector<std::size_t> points;

  friend bool operator==(const Chain&, const Chain&) = default;
};

/// d_{|x,y|}(x,y): a single link weighed at its pair height.
inline Rational link_weight(const Tower& t, const MonotonePseudometricSequence& seq, std::size_t x,
                            std::size_t y) {
  return seq.metrics[pair_height(t, x, y)](x, y);
}

inline Rational chain_weight(const Tower& t, const MonotonePseudometricSequence& seq, const Chain& chain) {
  if (chain.points.empty()) throw Error(ErrorKind::InvalidArgument, "empty chain");
  Rational total = 0;
  for (auto p : chain.points) (void)height(t, p);
  for (std::size_t i = 1; i < chain.points.size(); ++i)
    total += link_weight(t, seq, chain.points[i - 1], chain.points[i]);
  return total;
}

/// The direct-limit pseudometric d∞ on the top ground set. `dist` is the
/// minimum chain weight between each pair; the minimum exists because link
/// weights are nonnegative, so a chain that revisits a point can be
/// shortened and only the finitely many simple chains matter.
struct LimitPseudometric {
  Pseudometric dist;
  MonotonePseudometricSequence source;
};

inline LimitPseudometric limit_pseudometric(const Tower& t, const MonotonePseudometricSequence& seq) {
  validate_sequence(t, seq);
  const std::size_t m = t.size();
  Pseudometric w(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) w.set(i, j, link_weight(t, seq, i, j));
  return LimitPseudometric{shortest_path_closure(std::move(w)), seq};
}

/// Heights strictly decrease to a valley and then strictly increase, with
/// at most one level step at the bottom; equivalently every interior point
/// is strictly lower than one of its neighbours.
inline bool is_valley_chain(const Tower& t, const Chain& chain) {
  const auto& p = chain.points;
  for (std::size_t i = 1; i + 1 < p.size(); ++i)
    if (height(t, p[i]) >= std::max(height(t, p[i - 1]), height(t, p[i + 1]))) return false;
  return true;
}

namespace detail {

/// Best remaining weight from each point to `y` along valley chains, split
/// by phase: `descending` may still step down, `ascending` may only climb.
struct ValleyTables {
  std::vector<std::optional<Rational>> descending;
  std::vector<std::optional<Rational>> ascending;
  std::vector<std::size_t> heights;
  Pseudometric weights;
};

inline void relax(std::optional<Rational>& slot, const Rational& candidate) {
  if (!slot || candidate < *slot) slot = candidate;
}

inline ValleyTables valley_tables(const Tower& t, const MonotonePseudometricSequence& seq, std::size_t y) {
  const std::size_t m = t.size();
  ValleyTables tab{std::vector<std::optional<Rational>>(m), std::vector<std::optional<Rational>>(m),
                   std::vector<std::size_t>(m), Pseudometric(m)};
  for (std::size_t p = 0; p < m; ++p) tab.heights[p] = height(t, p);
  for (std::size_t p = 0; p < m; ++p)
    for (std::size_t q = p + 1; q < m; ++q) tab.weights.set(p, q, link_weight(t, seq, p, q));

  std::vector<std::size_t> order(m);
  for (std::size_t i = 0; i < m; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return tab.heights[a] > tab.heights[b]; });

  // Climbing phase: successors are strictly higher, so visit high points first.
  for (auto p : order) {
    if (p == y) tab.ascending[p] = Rational(0);
    for (std::size_t q = 0; q < m; ++q)
      if (tab.heights[q] > tab.heights[p] && tab.ascending[q])
        relax(tab.ascending[p], tab.weights(p, q) + *tab.ascending[q]);
  }
  // Descending phase: a step down stays descending, any other step climbs.
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const std::size_t p = *it;
    if (p == y) tab.descending[p] = Rational(0);
    for (std::size_t q = 0; q < m; ++q) {
      if (q == p) continue;
      const auto& next = tab.heights[q] < tab.heights[p] ? tab.descending[q] : tab.ascending[q];
      if (next) relax(tab.descending[p], tab.weights(p, q) + *next);
    }
  }
  return tab;
}

}  // namespace detail

/// Minimum chain weight from x to y over valley chains only.
inline Rational valley_distance(const Tower& t, const MonotonePseudometricSequence& seq, std::size_t x,
                                std::size_t y) {
  validate_sequence(t, seq);
  (void)height(t, x);
  (void)height(t, y);
  auto tab = detail::valley_tables(t, seq, y);
  // Complete weighted graph, so some chain always exists.
  return *tab.descending[x];
}

/// An optimal valley chain from x to y; among optimal chains the
/// lexicographically smallest point sequence is returned.
inline Chain valley_witness(const Tower& t, const MonotonePseudometricSequence& seq, std::size_t x,
                            std::size_t y) {
  validate_sequence(t, seq);
  (void)height(t, x);
  (void)height(t, y);
  auto tab = detail::valley_tables(t, seq, y);
  Chain chain{{x}};
  std::size_t cur = x;
  bool descending = true;
  while (cur != y) {
    const Rational need = descending ? *tab.descending[cur] : *tab.ascending[cur];
    for (std::size_t q = 0; q < t.size(); ++q) {
      if (q == cur) continue;
      const bool down = tab.heights[q] < tab.heights[cur];
      if (!descending && tab.heights[q] <= tab.heights[cur]) continue;
      const bool next_desc = descending && down;
      const auto& rest = next_desc ? tab.descending[q] : tab.ascending[q];
      if (rest && tab.weights(cur, q) + *rest == need) {
        chain.points.push_back(q);
        cur = q;
        descending = next_desc;
        break;
      }
    }
  }
  return chain;
}

/// Extends a uniform pseudometric on X_k to X_n (k inferred from its size)
/// by Lipschitz domination and gluing: with D = L·d⁽ⁿ⁾ for the smallest L
/// making D dominate ρ on X_k², the extension is
///   ρ̃(x,y) = min(D(x,y), min_{a,b ∈ X_k} D(x,a) + ρ(a,b) + D(b,y)).
/// It restricts to ρ exactly and vanishes on the zero pairs of level n.
inline Pseudometric extend_pseudometric(const Tower& t, const Pseudometric& rho, std::size_t to_level) {
  check_level(t, to_level);
  auto it = std::find(t.level_sizes.begin(), t.level_sizes.end(), rho.size());
  if (it == t.level_sizes.end())
    throw Error(ErrorKind::LevelMismatch, "pseudometric size matches no level");
  const std::size_t k = static_cast<std::size_t>(it - t.level_sizes.begin());
  if (to_level < k)
    throw Error(ErrorKind::LevelMismatch, "cannot extend to a lower level", {k, to_level});
  check_pseudometric(rho, k);
  const auto& base = t.metric(k);
  for (std::size_t i = 0; i < rho.size(); ++i)
    for (std::size_t j = i + 1; j < rho.size(); ++j)
      if (base.is_zero_pair(i, j) && rho(i, j) != 0)
        throw Error(ErrorKind::NotUniform, "pseudometric positive on a zero pair", {k, i, j});
  if (to_level == k) return rho;

  const std::size_t mk = rho.size();
  const std::size_t mn = t.level_size(to_level);
  const auto& dn = t.metric(to_level);
  Pseudometric out(mn);
  const Rational top = rho.max_value();
  if (top == 0) return out;

  std::optional<Rational> min_pos;
  for (std::size_t i = 0; i < mk; ++i)
    for (std::size_t j = i + 1; j < mk; ++j)
      if (rho(i, j) > 0 && (!min_pos || dn(i, j) < *min_pos)) min_pos = dn(i, j);
  const Pseudometric dom = dn.scaled(top / *min_pos);

  for (std::size_t x = 0; x < mn; ++x)
    for (std::size_t y = x + 1; y < mn; ++y) {
      Rational best = dom(x, y);
      for (std::size_t a = 0; a < mk; ++a)
        for (std::size_t b = 0; b < mk; ++b) {
          Rational via = dom(x, a) + rho(a, b) + dom(b, y);
          if (via < best) best = via;
        }
      out.set(x, y, best);
    }
  return out;
}

namespace detail {

/// Bounded uniform pseudometric ρ with {ρ < 1} ⊆ target: zero when the
/// target is everything, otherwise min(1, d/ε) for the largest grid
/// threshold ε whose sublevel relation fits inside the target.
inline Pseudometric separating_pseudometric(const Tower& t, std::size_t level, const Entourage& target) {
  const auto& d = t.metric(level);
  if (target.count() == target.size() * target.size()) return Pseudometric(d.size());
  const auto grid = grid_scale(t, level);
  Rational eps = grid.thresholds.front();
  for (const auto& th : grid.thresholds)
    if (included(Entourage::sublevel(d, level, th), target)) eps = th;
  Pseudometric rho(d.size());
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = i + 1; j < d.size(); ++j) rho.set(i, j, std::min(Rational(1), Rational(d(i, j) / eps)));
  return rho;
}

}  // namespace detail

/// A monotone sequence (d_n) of uniform pseudometrics with {d_n < 1} inside
/// the target entourage of every level: d_n = Σ_{k≤n} ρ̃_{k,n}, where ρ_k
/// separates the level-k target and ρ̃_{k,n} extends it one level at a time,
/// so the extensions agree on lower levels and the sum stays monotone.
inline MonotonePseudometricSequence adequate_sequence(const Tower& t, const EntourageSequence& targets) {
  validate_entourage_sequence(targets);
  if (targets.start != 0 || targets.entries.size() != t.level_count())
    throw Error(ErrorKind::LevelCountMismatch, "targets must cover every level from 0");
  for (std::size_t n = 0; n < t.level_count(); ++n) {
    const auto& u = targets.entries[n];
    if (u.size() != t.level_size(n)) throw Error(ErrorKind::LevelMismatch, "target size mismatch", {n});
    if (!included(Entourage::zero_relation(t, n), u))
      throw Error(ErrorKind::NotAnEntourage, "target misses a zero pair of level " + std::to_string(n),
                  {n});
  }
  MonotonePseudometricSequence out;
  std::vector<Pseudometric> extended;  // ρ̃_{k,n} for the current n
  for (std::size_t n = 0; n < t.level_count(); ++n) {
    for (auto& r : extended) r = extend_pseudometric(t, r, n);
    extended.push_back(detail::separating_pseudometric(t, n, targets.entries[n]));
    Pseudometric sum(t.level_size(n));
    for (std::size_t i = 0; i < sum.size(); ++i)
      for (std::size_t j = i + 1; j < sum.size(); ++j) {
        Rational s = 0;
        for (const auto& r : extended) s += r(i, j);
        sum.set(i, j, s);
      }
    out.metrics.push_back(std::move(sum));
  }
  return out;
}

struct GenerationVerdict {
  bool confirmed = false;
  std::optional<std::pair<std::size_t, std::size_t>> counterexample;
};

/// Given U on the top level and a ladder U_0, …, U_N on the top level with
/// 5U_0 ⊆ U, 2U_{n+1} ⊆ U_n and {d_n < 1} ⊆ U_n, checks {d∞ < 1} ⊆ U.
inline GenerationVerdict verify_generation(const Tower& t, const Entourage& u,
                                           const MonotonePseudometricSequence& seq,
                                           std::span<const Entourage> ladder) {
  validate_sequence(t, seq);
  const std::size_t top = t.top_level();
  if (u.level() != top || u.size() != t.size())
    throw Error(ErrorKind::LevelMismatch, "U must live on the top level");
  if (ladder.size() != t.level_count())
    throw Error(ErrorKind::LevelCountMismatch, "ladder needs one entourage per level");
  for (const auto& l : ladder)
    if (l.level() != top || l.size() != t.size())
      throw Error(ErrorKind::LevelMismatch, "ladder entries must live on the top level");

  if (!included(multiple(ladder[0], 5), u))
    throw Error(ErrorKind::PreconditionFailed, "5U_0 is not inside U", {0});
  for (std::size_t n = 0; n + 1 < ladder.size(); ++n)
    if (!included(multiple(ladder[n + 1], 2), ladder[n]))
      throw Error(ErrorKind::PreconditionFailed,
                  "2U_" + std::to_string(n + 1) + " is not inside U_" + std::to_string(n), {n + 1});
  for (std::size_t n = 0; n < ladder.size(); ++n)
    if (!included(Entourage::sublevel(seq.metrics[n], n, 1), ladder[n]))
      throw Error(ErrorKind::PreconditionFailed,
                  "{d_" + std::to_string(n) + " < 1} is not inside U_" + std::to_string(n), {n});

  const auto lim = limit_pseudometric(t, seq);
  for (std::size_t x = 0; x < t.size(); ++x)
    for (std::size_t y = 0; y < t.size(); ++y)
      if (lim.dist(x, y) < 1 && !u.contains(x, y)) return {false, std::make_pair(x, y)};
  return {true, std::nullopt};
}

}  // namespace unilim
