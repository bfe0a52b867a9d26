#pragma once

// Brute-force reference implementations. Each one follows a definition
// directly and shares no search strategy with the fast code it is compared
// against; all are exponential and meant for small instances only.

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "unilim/limit_metric.hpp"
#include "unilim/regularity.hpp"
#include "unilim/relation.hpp"
#include "unilim/topology.hpp"
#include "unilim/tower.hpp"

namespace unilim::oracle {

/// d∞ by enumerating every simple chain between every pair.
inline Pseudometric limit_by_chains(const Tower& t, const MonotonePseudometricSequence& seq) {
  const std::size_t m = t.size();
  Pseudometric out(m);
  std::vector<char> used(m, 0);
  for (std::size_t x = 0; x < m; ++x)
    for (std::size_t y = x + 1; y < m; ++y) {
      std::optional<Rational> best;
      std::vector<std::size_t> path{x};
      used.assign(m, 0);
      used[x] = 1;
      std::function<void(const Rational&)> dfs = [&](const Rational& w) {
        const std::size_t cur = path.back();
        if (cur == y) {
          if (!best || w < *best) best = w;
          return;
        }
        for (std::size_t q = 0; q < m; ++q) {
          if (used[q]) continue;
          used[q] = 1;
          path.push_back(q);
          dfs(w + link_weight(t, seq, cur, q));
          path.pop_back();
          used[q] = 0;
        }
      };
      dfs(Rational(0));
      out.set(x, y, *best);
    }
  return out;
}

/// Minimum weight over valley chains from x to y of length at most
/// 2(N+1)+1 points, which bounds every valley chain without repeated
/// heights on either slope. Prefixes of valley chains are valley chains,
/// so the search prunes on the prefix.
inline Rational valley_by_chains(const Tower& t, const MonotonePseudometricSequence& seq, std::size_t x,
                                 std::size_t y) {
  const std::size_t max_len = 2 * t.level_count() + 1;
  std::optional<Rational> best;
  Chain c{{x}};
  std::function<void(const Rational&)> dfs = [&](const Rational& w) {
    if (c.points.back() == y && (!best || w < *best)) best = w;
    if (c.points.size() == max_len) return;
    for (std::size_t q = 0; q < t.size(); ++q) {
      if (q == c.points.back()) continue;
      c.points.push_back(q);
      if (is_valley_chain(t, c)) dfs(w + link_weight(t, seq, c.points[c.points.size() - 2], q));
      c.points.pop_back();
    }
  };
  dfs(Rational(0));
  return *best;
}

/// U + V from its pair description, one witness y at a time.
inline Entourage compose_naive(const Entourage& u, const Entourage& v) {
  const std::size_t m = std::max(u.size(), v.size());
  const std::size_t lvl = std::max(u.level(), v.level());
  auto in = [](const Entourage& r, std::size_t a, std::size_t b) {
    if (a < r.size() && b < r.size()) return r.contains(a, b);
    return a == b;
  };
  Entourage out(lvl, m);
  for (std::size_t x = 0; x < m; ++x)
    for (std::size_t z = 0; z < m; ++z)
      for (std::size_t y = 0; y < m; ++y)
        if (in(v, x, y) && in(u, y, z)) {
          out.insert(x, z);
          break;
        }
  return out;
}

/// Every entourage sequence (U_i)_{i≥|x|} of grid entourages, each summed
/// with sigma_sum; calls visit(ball).
template <class Visit>
void for_each_sigma_ball(const Tower& t, std::size_t x, Visit&& visit) {
  const std::size_t h = height(t, x);
  std::vector<std::vector<Entourage>> grids;
  for (std::size_t n = h; n < t.level_count(); ++n) grids.push_back(grid_entourages(t, n));
  EntourageSequence seq;
  seq.start = h;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == grids.size()) {
      visit(base_ball(t, x, seq));
      return;
    }
    for (const auto& e : grids[i]) {
      seq.entries.push_back(e);
      rec(i + 1);
      seq.entries.pop_back();
    }
  };
  rec(0);
}

/// ulim open sets by definition: O is open iff each x ∈ O has a base ball
/// inside O. Enumerates all 2^|X| subsets, so |X| ≤ 10.
inline std::vector<ElementSet> ulim_opens(const Tower& t) {
  const std::size_t m = t.size();
  if (m > 10) throw Error(ErrorKind::InvalidArgument, "oracle topology limited to 10 points");
  std::vector<std::vector<ElementSet>> balls(m);
  for (std::size_t x = 0; x < m; ++x) for_each_sigma_ball(t, x, [&](ElementSet b) { balls[x].push_back(b); });
  std::vector<ElementSet> out;
  for (unsigned long mask = 0; mask < (1ul << m); ++mask) {
    ElementSet o(m, mask);
    bool open = true;
    for (auto x : members(o)) {
      bool inside = false;
      for (const auto& b : balls[x])
        if (b.is_subset_of(o)) {
          inside = true;
          break;
        }
      if (!inside) {
        open = false;
        break;
      }
    }
    if (open) out.push_back(o);
  }
  std::sort(out.begin(), out.end(),
            [](const ElementSet& a, const ElementSet& b) { return members(a) < members(b); });
  return out;
}

/// The partition topology of the top-level zero classes.
inline TopologyFamily zero_class_topology(const Tower& t) {
  std::vector<ElementSet> classes;
  const auto& d = t.top_metric();
  for (std::size_t x = 0; x < t.size(); ++x) {
    ElementSet c(t.size());
    for (std::size_t y = 0; y < t.size(); ++y)
      if (d(x, y) == 0) c.set(y);
    classes.push_back(c);
  }
  return TopologyFamily::generated_by(t.size(), classes);
}

/// Regularity by the three nested quantifiers over grid entourages, with
/// every relation and ball built as an explicit set.
inline bool regular_naive(const SpaceMap& f, std::size_t level, std::size_t subset_level) {
  const auto& src = f.source;
  const std::size_t m = src.level_size(level);
  const std::size_t k = src.level_size(subset_level);
  ElementSet a_set(m);
  for (std::size_t a = 0; a < k; ++a) a_set.set(a);
  for (const auto& u : grid_entourages(f.target, f.target.top_level()))
    for (const auto& v : grid_entourages(src, level)) {
      bool some_w = false;
      for (const auto& w : grid_entourages(src, level)) {
        const ElementSet near = ball_set(a_set, w);
        bool all = true;
        for (auto x : members(near)) {
          bool found = false;
          for (std::size_t a = 0; a < k && !found; ++a)
            found = v.contains(a, x) && u.contains(f.values[x], f.values[a]);
          if (!found) {
            all = false;
            break;
          }
        }
        if (all) {
          some_w = true;
          break;
        }
      }
      if (!some_w) return false;
    }
  return true;
}

}  // namespace unilim::oracle
