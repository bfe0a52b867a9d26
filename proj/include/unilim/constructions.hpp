#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "unilim/relation.hpp"
#include "unilim/topology.hpp"
#include "unilim/tower.hpp"

namespace unilim {

// ---------------------------------------------------------------------------
// Binary products

/// Coordinates (i, j) of each point of X_n × Y_n, ordered level by level:
/// the pairs new at level n follow all earlier pairs, lexicographically.
inline std::vector<std::pair<std::size_t, std::size_t>> product_layout(const Tower& a, const Tower& b) {
  if (a.level_count() != b.level_count())
    throw Error(ErrorKind::LevelCountMismatch, "product factors need the same number of levels",
                {a.level_count(), b.level_count()});
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t n = 0; n < a.level_count(); ++n) {
    const std::size_t pa = n ? a.level_size(n - 1) : 0;
    const std::size_t pb = n ? b.level_size(n - 1) : 0;
    for (std::size_t i = 0; i < a.level_size(n); ++i)
      for (std::size_t j = 0; j < b.level_size(n); ++j)
        if (i >= pa || j >= pb) out.emplace_back(i, j);
  }
  return out;
}

/// Levels X_n × Y_n with the coordinate-max pseudometric.
inline Tower product_tower(const Tower& a, const Tower& b) {
  const auto layout = product_layout(a, b);
  Tower t;
  t.strict = a.strict && b.strict;
  for (auto [i, j] : layout) t.labels.push_back("(" + a.labels[i] + "," + b.labels[j] + ")");
  for (std::size_t n = 0; n < a.level_count(); ++n) {
    const std::size_t m = a.level_size(n) * b.level_size(n);
    t.level_sizes.push_back(m);
    Pseudometric d(m);
    for (std::size_t p = 0; p < m; ++p)
      for (std::size_t q = p + 1; q < m; ++q)
        d.set(p, q,
              std::max(a.metric(n)(layout[p].first, layout[q].first),
                       b.metric(n)(layout[p].second, layout[q].second)));
    t.level_metrics.push_back(std::move(d));
  }
  return validate_tower(std::move(t));
}

struct MultiplicativityVerdict {
  TopologyComparison comparison;
  bool equal = false;
};

/// Compares the direct-limit topology of the product tower with the
/// product of the factors' direct-limit topologies.
inline MultiplicativityVerdict check_multiplicativity(const Tower& a, const Tower& b) {
  const auto layout = product_layout(a, b);
  const Tower prod = product_tower(a, b);
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
  for (std::size_t p = 0; p < layout.size(); ++p) index[layout[p]] = p;

  const auto ta = ulim_topology(a);
  const auto tb = ulim_topology(b);
  std::vector<ElementSet> rectangles;
  for (auto [i, j] : layout) {
    ElementSet r(layout.size());
    for (auto x : members(ta.minimal_neighborhood(i)))
      for (auto y : members(tb.minimal_neighborhood(j))) r.set(index.at({x, y}));
    rectangles.push_back(std::move(r));
  }
  MultiplicativityVerdict out;
  out.comparison =
      compare_topologies(ulim_topology(prod), TopologyFamily::generated_by(layout.size(), rectangles));
  out.equal = out.comparison.order == TopologyOrder::Equal;
  return out;
}

// ---------------------------------------------------------------------------
// Abelian group towers

/// An abelian group on the top level of `tower` whose levels are subgroups
/// and whose level metrics are translation invariant. Element 0 is the
/// identity; `op` and `neg` are tables over the top level.
struct GroupTower {
  Tower tower;
  std::vector<std::vector<std::size_t>> op;
  std::vector<std::size_t> neg;

  std::size_t add(std::size_t x, std::size_t y) const { return op[x][y]; }
};

inline GroupTower validate_group_tower(GroupTower g) {
  g.tower = validate_tower(std::move(g.tower));
  const std::size_t m = g.tower.size();
  if (g.op.size() != m) throw Error(ErrorKind::NotAGroup, "operation table has wrong size");
  for (const auto& row : g.op) {
    if (row.size() != m) throw Error(ErrorKind::NotAGroup, "operation table has wrong size");
    for (auto v : row)
      if (v >= m) throw Error(ErrorKind::NotAGroup, "operation leaves the group");
  }
  if (g.neg.empty()) {
    g.neg.assign(m, m);
    for (std::size_t x = 0; x < m; ++x)
      for (std::size_t y = 0; y < m; ++y)
        if (g.op[x][y] == 0) g.neg[x] = y;
  }
  if (g.neg.size() != m) throw Error(ErrorKind::NotAGroup, "inverse table has wrong size");
  for (std::size_t x = 0; x < m; ++x) {
    if (g.op[0][x] != x || g.op[x][0] != x) throw Error(ErrorKind::NotAGroup, "element 0 is not the identity", {x});
    if (g.neg[x] >= m || g.op[x][g.neg[x]] != 0) throw Error(ErrorKind::NotAGroup, "missing inverse", {x});
    for (std::size_t y = 0; y < m; ++y) {
      if (g.op[x][y] != g.op[y][x]) throw Error(ErrorKind::NotAGroup, "operation is not commutative", {x, y});
      for (std::size_t z = 0; z < m; ++z)
        if (g.op[g.op[x][y]][z] != g.op[x][g.op[y][z]])
          throw Error(ErrorKind::NotAGroup, "operation is not associative", {x, y, z});
    }
  }
  for (std::size_t n = 0; n < g.tower.level_count(); ++n) {
    const std::size_t mn = g.tower.level_size(n);
    for (std::size_t x = 0; x < mn; ++x) {
      if (g.neg[x] >= mn) throw Error(ErrorKind::NotAGroup, "level is not a subgroup", {n, x});
      for (std::size_t y = 0; y < mn; ++y)
        if (g.op[x][y] >= mn) throw Error(ErrorKind::NotAGroup, "level is not a subgroup", {n, x, y});
    }
    const auto& d = g.tower.metric(n);
    for (std::size_t x = 0; x < mn; ++x)
      for (std::size_t y = x + 1; y < mn; ++y)
        for (std::size_t s = 0; s < mn; ++s)
          if (d(g.op[x][s], g.op[y][s]) != d(x, y))
            throw Error(ErrorKind::InvarianceViolation, "metric is not translation invariant", {n, x, y, s});
  }
  return g;
}

/// ℤ_{k_0} × … × ℤ_{k_N} with level n the first n+1 factors, and the
/// invariant metric Σ_i w_i·|c_i − c'_i| where |c| is the Hamming length
/// (0 or 1) or, with `lee`, the cyclic length min(c, k − c).
inline GroupTower cyclic_product_group(const std::vector<std::size_t>& orders, const std::vector<Rational>& weights,
                                       bool lee = false) {
  if (orders.empty() || orders.size() != weights.size())
    throw Error(ErrorKind::InvalidArgument, "one weight per cyclic factor required");
  std::vector<std::vector<std::size_t>> coords;
  std::vector<std::size_t> level_sizes;
  for (std::size_t n = 0; n < orders.size(); ++n) {
    // New layer: coordinate n nonzero; enumerate (c_0..c_n) lexicographically.
    std::vector<std::size_t> c(orders.size(), 0);
    std::vector<std::vector<std::size_t>> layer;
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (i > n) {
        if (n == 0 || c[n] != 0) layer.push_back(c);
        return;
      }
      for (std::size_t v = 0; v < orders[i]; ++v) {
        c[i] = v;
        rec(i + 1);
      }
      c[i] = 0;
    };
    rec(0);
    for (auto& e : layer) coords.push_back(std::move(e));
    level_sizes.push_back(coords.size());
  }
  std::map<std::vector<std::size_t>, std::size_t> index;
  for (std::size_t i = 0; i < coords.size(); ++i) index[coords[i]] = i;
  const std::size_t m = coords.size();

  auto length = [&](std::size_t i, std::size_t c) -> Rational {
    if (c == 0) return 0;
    return lee ? Rational(std::min(c, orders[i] - c)) : Rational(1);
  };
  Pseudometric top(m);
  for (std::size_t x = 0; x < m; ++x)
    for (std::size_t y = x + 1; y < m; ++y) {
      Rational s = 0;
      for (std::size_t i = 0; i < orders.size(); ++i)
        s += weights[i] * length(i, (coords[x][i] + orders[i] - coords[y][i]) % orders[i]);
      top.set(x, y, s);
    }

  GroupTower g;
  g.tower.strict = true;
  g.tower.level_sizes = level_sizes;
  for (const auto& c : coords) {
    std::string label;
    for (auto v : c) label += std::to_string(v);
    g.tower.labels.push_back(label);
  }
  for (auto s : level_sizes) g.tower.level_metrics.push_back(top.restricted(s));
  g.op.assign(m, std::vector<std::size_t>(m));
  g.neg.assign(m, 0);
  for (std::size_t x = 0; x < m; ++x) {
    std::vector<std::size_t> nc(orders.size());
    for (std::size_t i = 0; i < orders.size(); ++i) nc[i] = (orders[i] - coords[x][i]) % orders[i];
    g.neg[x] = index.at(nc);
    for (std::size_t y = 0; y < m; ++y) {
      std::vector<std::size_t> s(orders.size());
      for (std::size_t i = 0; i < orders.size(); ++i) s[i] = (coords[x][i] + coords[y][i]) % orders[i];
      g.op[x][y] = index.at(s);
    }
  }
  return validate_group_tower(std::move(g));
}

namespace detail {

inline ElementSet group_product(const GroupTower& g, const ElementSet& a, const ElementSet& b) {
  ElementSet out(g.tower.size());
  for (auto x : members(a))
    for (auto y : members(b)) out.set(g.add(x, y));
  return out;
}

/// U_n = {g ∈ G_n : d⁽ⁿ⁾(g, e) < ε}.
inline ElementSet identity_ball(const GroupTower& g, std::size_t level, const Rational& eps) {
  ElementSet out(g.tower.size());
  const auto& d = g.tower.metric(level);
  for (std::size_t x = 0; x < d.size(); ++x)
    if (d(x, 0) < eps) out.set(x);
  return out;
}

inline void check_radii(const GroupTower& g, const std::vector<Rational>& radii) {
  if (radii.size() != g.tower.level_count())
    throw Error(ErrorKind::LevelCountMismatch, "one radius per level required");
  for (const auto& r : radii)
    if (r <= 0) throw Error(ErrorKind::InvalidArgument, "radii must be positive");
}

}  // namespace detail

/// U_0·U_1·…·U_N inside the top group.
inline ElementSet ordered_product_ball(const GroupTower& g, const std::vector<Rational>& radii) {
  detail::check_radii(g, radii);
  ElementSet acc = singleton(g.tower.size(), 0);
  for (std::size_t n = 0; n < radii.size(); ++n)
    acc = detail::group_product(g, acc, detail::identity_ball(g, n, radii[n]));
  return acc;
}

struct GroupLimitVerdict {
  /// (i) B(e; Σ U_n^LR) against the ordered product.
  ElementSet sum_ball;
  ElementSet product_ball;
  bool ball_matches = false;
  /// (ii) U_n·U_m = U_m·U_n for n ≤ m.
  bool commute = true;
  std::optional<std::pair<std::size_t, std::size_t>> noncommuting;
  /// (iii) V_n·V_n ⊆ U_n for the halved radii, and then
  /// (∏_{n≤m} V_n)·(∏_{n≤m} V_n) ⊆ ∏_{n≤m} U_n for every m.
  bool halving_holds = true;
  bool eq_holds = true;
  std::optional<std::size_t> eq_failure;
  bool passed = false;
};

/// The sum of the two-sided entourages is taken through the top level with
/// the diagonal as tail, matching the finite ordered product U_0⋯U_N.
inline GroupLimitVerdict check_group_limit(const GroupTower& g, const std::vector<Rational>& radii) {
  detail::check_radii(g, radii);
  validate_group_tower(g);
  GroupLimitVerdict out;

  EntourageSequence seq;
  seq.start = 0;
  for (std::size_t n = 0; n < radii.size(); ++n) seq.entries.push_back(Entourage::sublevel(g.tower, n, radii[n]));
  seq.tail = Entourage::diagonal(g.tower.top_level(), g.tower.size());
  out.sum_ball = ball(0, sigma_sum(seq));
  out.product_ball = ordered_product_ball(g, radii);
  out.ball_matches = out.sum_ball == out.product_ball;

  std::vector<ElementSet> u, v;
  for (std::size_t n = 0; n < radii.size(); ++n) {
    u.push_back(detail::identity_ball(g, n, radii[n]));
    v.push_back(detail::identity_ball(g, n, radii[n] / 2));
  }
  for (std::size_t n = 0; n < u.size() && out.commute; ++n)
    for (std::size_t m = n; m < u.size(); ++m)
      if (detail::group_product(g, u[n], u[m]) != detail::group_product(g, u[m], u[n])) {
        out.commute = false;
        out.noncommuting = std::make_pair(n, m);
        break;
      }
  for (std::size_t n = 0; n < u.size(); ++n)
    if (!detail::group_product(g, v[n], v[n]).is_subset_of(u[n])) out.halving_holds = false;
  ElementSet pv = singleton(g.tower.size(), 0);
  ElementSet pu = pv;
  for (std::size_t m = 0; m < u.size(); ++m) {
    pv = detail::group_product(g, pv, v[m]);
    pu = detail::group_product(g, pu, u[m]);
    if (!detail::group_product(g, pv, pv).is_subset_of(pu)) {
      out.eq_holds = false;
      out.eq_failure = m;
      break;
    }
  }
  out.passed = out.ball_matches && out.commute && out.halving_holds && out.eq_holds;
  return out;
}

// ---------------------------------------------------------------------------
// Small box products

struct PointedSpace {
  Pseudometric metric;
  std::size_t basepoint = 0;
  std::vector<std::string> labels;
};

inline void validate_pointed(const PointedSpace& p) {
  check_pseudometric(p.metric);
  if (p.metric.size() == 0) throw Error(ErrorKind::InvalidArgument, "empty pointed space");
  if (p.basepoint >= p.metric.size()) throw Error(ErrorKind::IndexOutOfRange, "basepoint outside space");
  if (!p.labels.empty() && p.labels.size() != p.metric.size())
    throw Error(ErrorKind::InvalidArgument, "label count differs from space size");
}

/// Coordinates of each point of the box tower: level n holds the tuples
/// that sit at the basepoint beyond coordinate n; the tuples new at level n
/// follow in lexicographic order.
inline std::vector<std::vector<std::size_t>> box_layout(const std::vector<PointedSpace>& factors, std::size_t depth) {
  if (depth == 0 || depth > factors.size())
    throw Error(ErrorKind::InvalidArgument, "depth must lie between 1 and the number of factors");
  for (const auto& f : factors) validate_pointed(f);
  for (std::size_t i = 1; i < depth; ++i)
    if (factors[i].metric.size() < 2)
      throw Error(ErrorKind::InvalidArgument, "a one-point factor adds no level", {i});
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> c(depth);
  for (std::size_t i = 0; i < depth; ++i) c[i] = factors[i].basepoint;
  for (std::size_t n = 0; n < depth; ++n) {
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (i > n) {
        if (n == 0 || c[n] != factors[n].basepoint) out.push_back(c);
        return;
      }
      for (std::size_t v = 0; v < factors[i].metric.size(); ++v) {
        c[i] = v;
        rec(i + 1);
      }
      c[i] = factors[i].basepoint;
    };
    rec(0);
  }
  return out;
}

inline Tower box_tower(const std::vector<PointedSpace>& factors, std::size_t depth) {
  const auto layout = box_layout(factors, depth);
  Tower t;
  t.strict = true;
  for (const auto& c : layout) {
    std::string label = "(";
    for (std::size_t i = 0; i < depth; ++i) {
      if (i) label += ",";
      label += factors[i].labels.empty() ? std::to_string(c[i]) : factors[i].labels[c[i]];
    }
    t.labels.push_back(label + ")");
  }
  Pseudometric top(layout.size());
  for (std::size_t p = 0; p < layout.size(); ++p)
    for (std::size_t q = p + 1; q < layout.size(); ++q) {
      Rational best = 0;
      for (std::size_t i = 0; i < depth; ++i) best = std::max(best, factors[i].metric(layout[p][i], layout[q][i]));
      top.set(p, q, best);
    }
  std::size_t size = 1;
  for (std::size_t n = 0; n < depth; ++n) {
    size = n == 0 ? factors[0].metric.size() : size * factors[n].metric.size();
    t.level_sizes.push_back(size);
    t.level_metrics.push_back(top.restricted(size));
  }
  return validate_tower(std::move(t));
}

struct BoxLimitVerdict {
  TopologyComparison comparison;
  bool equal = false;
};

/// Compares the direct-limit topology of the box tower with the box
/// topology generated by the products ∏ B(x_i; ε_i) of factor balls.
inline BoxLimitVerdict check_box_limit(const std::vector<PointedSpace>& factors, std::size_t depth) {
  const auto layout = box_layout(factors, depth);
  const Tower tower = box_tower(factors, depth);
  std::map<std::vector<std::size_t>, std::size_t> index;
  for (std::size_t p = 0; p < layout.size(); ++p) index[layout[p]] = p;

  // Smallest factor neighbourhoods: intersections of the grid balls.
  std::vector<std::vector<ElementSet>> smallest(depth);
  for (std::size_t i = 0; i < depth; ++i) {
    const auto& d = factors[i].metric;
    auto thresholds = d.positive_values();
    thresholds.push_back(thresholds.empty() ? Rational(1) : thresholds.back() + 1);
    for (std::size_t x = 0; x < d.size(); ++x) {
      ElementSet acc(d.size());
      acc.set();
      for (const auto& eps : thresholds) {
        ElementSet b(d.size());
        for (std::size_t y = 0; y < d.size(); ++y)
          if (d(x, y) < eps) b.set(y);
        acc &= b;
      }
      smallest[i].push_back(acc);
    }
  }
  std::vector<ElementSet> boxes;
  for (const auto& c : layout) {
    ElementSet box(layout.size());
    std::vector<std::size_t> cur(depth);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (i == depth) {
        box.set(index.at(cur));
        return;
      }
      for (auto v : members(smallest[i][c[i]])) {
        cur[i] = v;
        rec(i + 1);
      }
    };
    rec(0);
    boxes.push_back(std::move(box));
  }
  BoxLimitVerdict out;
  out.comparison = compare_topologies(ulim_topology(tower), TopologyFamily::generated_by(layout.size(), boxes));
  out.equal = out.comparison.order == TopologyOrder::Equal;
  return out;
}

}  // namespace unilim
