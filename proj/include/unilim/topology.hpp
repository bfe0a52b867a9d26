#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <vector>

#include "unilim/relation.hpp"
#include "unilim/tower.hpp"

namespace unilim {

/// A topology on {0, …, n-1}. Every topology on a finite set is determined
/// by the smallest open set around each point, so that table is the stored
/// form; open sets are exactly the unions of its rows. The full family is
/// available through `opens()` for small ground sets.
class TopologyFamily {
 public:
  TopologyFamily() = default;

  /// The coarsest topology in which every member of `family` is open.
  static TopologyFamily generated_by(std::size_t ground, const std::vector<ElementSet>& family) {
    TopologyFamily t;
    t.ground_ = ground;
    t.nbhd_.assign(ground, ElementSet(ground));
    for (auto& n : t.nbhd_) n.set();
    for (const auto& s : family) {
      if (s.size() != ground) throw Error(ErrorKind::GroundMismatch, "family member has wrong ground size");
      for (auto p : members(s)) t.nbhd_[p] &= s;
    }
    return t;
  }

  static TopologyFamily discrete(std::size_t ground) {
    std::vector<ElementSet> fam;
    for (std::size_t i = 0; i < ground; ++i) fam.push_back(singleton(ground, i));
    return generated_by(ground, fam);
  }

  static TopologyFamily indiscrete(std::size_t ground) { return generated_by(ground, {}); }

  std::size_t ground_size() const noexcept { return ground_; }
  const ElementSet& minimal_neighborhood(std::size_t x) const { return nbhd_.at(x); }
  const std::vector<ElementSet>& minimal_neighborhoods() const noexcept { return nbhd_; }

  bool is_open(const ElementSet& s) const {
    if (s.size() != ground_) return false;
    for (auto p : members(s))
      if (!nbhd_[p].is_subset_of(s)) return false;
    return true;
  }

  /// All open sets, sorted by their member lists.
  std::vector<ElementSet> opens() const {
    if (ground_ > 16)
      throw Error(ErrorKind::InvalidArgument, "open-set enumeration limited to 16 points");
    std::set<std::vector<std::size_t>> seen;
    std::vector<ElementSet> frontier{ElementSet(ground_)};
    seen.insert({});
    std::vector<ElementSet> all = frontier;
    while (!frontier.empty()) {
      std::vector<ElementSet> next;
      for (const auto& o : frontier)
        for (const auto& n : nbhd_) {
          ElementSet u = o | n;
          if (seen.insert(members(u)).second) {
            next.push_back(u);
            all.push_back(u);
          }
        }
      frontier = std::move(next);
    }
    std::sort(all.begin(), all.end(),
              [](const ElementSet& a, const ElementSet& b) { return members(a) < members(b); });
    return all;
  }

  friend bool operator==(const TopologyFamily& a, const TopologyFamily& b) {
    return a.ground_ == b.ground_ && a.nbhd_ == b.nbhd_;
  }

 private:
  std::size_t ground_ = 0;
  std::vector<ElementSet> nbhd_;
};

/// The grid entourages {d⁽ⁿ⁾ < ε}, ε ∈ GridScale(n), smallest first.
inline std::vector<Entourage> grid_entourages(const Tower& t, std::size_t level) {
  std::vector<Entourage> out;
  for (const auto& eps : grid_scale(t, level).thresholds) out.push_back(Entourage::sublevel(t, level, eps));
  return out;
}

/// B(x; Σ_{i≥|x|} U_i) with the ω-sum of the sequence.
inline ElementSet base_ball(const Tower& t, std::size_t x, const EntourageSequence& seq) {
  const std::size_t h = height(t, x);
  if (seq.start != h)
    throw Error(ErrorKind::StartMismatch, "sequence must start at the height of the centre", {seq.start, h});
  validate_entourage_sequence(seq);
  if (seq.last_level() != t.top_level())
    throw Error(ErrorKind::LevelMismatch, "sequence must reach the top level");
  for (const auto& u : seq.entries) {
    if (u.size() != t.level_size(u.level()))
      throw Error(ErrorKind::LevelMismatch, "entry size mismatch", {u.level()});
    if (!included(Entourage::zero_relation(t, u.level()), u))
      throw Error(ErrorKind::NotAnEntourage, "entry misses a zero pair", {u.level()});
  }
  if (const auto* e = std::get_if<Entourage>(&seq.tail))
    if (e->size() != t.size() || !included(Entourage::zero_relation(t, t.top_level()), *e))
      throw Error(ErrorKind::NotAnEntourage, "tail is not a top-level entourage", {t.top_level()});
  ElementSet b = ball(x, sigma_sum(seq));
  b.resize(t.size());
  return b;
}

/// Enumerates the base balls B(x; Σ U_i) over every grid choice of
/// (U_i)_{i≥|x|} with the repeat-last tail. Balls are built by applying the
/// entries one at a time, B(x; U+V) = B(B(x;U);V), which avoids forming the
/// summed relations.
class GridBase {
 public:
  explicit GridBase(const Tower& t) : tower_(&t) {
    for (std::size_t n = 0; n < t.level_count(); ++n) grids_.push_back(grid_entourages(t, n));
  }

  const std::vector<Entourage>& grid(std::size_t level) const { return grids_.at(level); }

  /// visit(ball, choice) where choice[i] indexes the grid of level |x|+i.
  template <class Visit>
  void for_each_ball(std::size_t x, Visit&& visit) const {
    const std::size_t h = height(*tower_, x);
    std::vector<std::size_t> choice;
    walk(h, singleton(tower_->size(), x), choice, visit);
  }

  /// The ball for one explicit grid choice.
  ElementSet ball_for(std::size_t x, const std::vector<std::size_t>& choice) const {
    const std::size_t h = height(*tower_, x);
    ElementSet s = singleton(tower_->size(), x);
    for (std::size_t i = 0; i < choice.size(); ++i) s = ball_set_promoted(s, grids_[h + i][choice[i]]);
    return close_tail(std::move(s), grids_.back()[choice.back()]);
  }

 private:
  static ElementSet close_tail(ElementSet s, const Entourage& tail) {
    for (;;) {
      ElementSet next = ball_set_promoted(s, tail);
      if (next == s) return s;
      s = std::move(next);
    }
  }

  template <class Visit>
  void walk(std::size_t level, const ElementSet& s, std::vector<std::size_t>& choice, Visit& visit) const {
    const auto& g = grids_[level];
    for (std::size_t c = 0; c < g.size(); ++c) {
      ElementSet next = ball_set_promoted(s, g[c]);
      choice.push_back(c);
      if (level == tower_->top_level())
        visit(close_tail(std::move(next), g[c]), static_cast<const std::vector<std::size_t>&>(choice));
      else
        walk(level + 1, next, choice, visit);
      choice.pop_back();
    }
  }

  const Tower* tower_;
  std::vector<std::vector<Entourage>> grids_;
};

/// All distinct grid base balls centred at x.
inline std::vector<ElementSet> base_balls(const GridBase& base, std::size_t x) {
  std::set<std::vector<std::size_t>> seen;
  std::vector<ElementSet> out;
  base.for_each_ball(x, [&](const ElementSet& b, const std::vector<std::size_t>&) {
    if (seen.insert(members(b)).second) out.push_back(b);
  });
  return out;
}

/// The topology generated by every grid base ball. Restricting the entries
/// to grid entourages loses nothing: the grids are bases of the level
/// uniformities and the ball grows with each entry.
inline TopologyFamily ulim_topology(const Tower& t) {
  GridBase base(t);
  std::vector<ElementSet> family;
  for (std::size_t x = 0; x < t.size(); ++x)
    for (auto& b : base_balls(base, x)) family.push_back(std::move(b));
  return TopologyFamily::generated_by(t.size(), family);
}

/// The final topology of the inclusions X_n → X: a set is open iff its
/// trace on every level is a union of that level's zero classes.
inline TopologyFamily tlim_topology(const Tower& t) {
  std::vector<Entourage> zeros;
  for (std::size_t n = 0; n < t.level_count(); ++n) zeros.push_back(Entourage::zero_relation(t, n));
  std::vector<ElementSet> nbhd;
  for (std::size_t x = 0; x < t.size(); ++x) {
    ElementSet o = singleton(t.size(), x);
    for (bool grew = true; grew;) {
      grew = false;
      for (const auto& z : zeros) {
        ElementSet next = ball_set_promoted(o, z);
        if (next != o) {
          o = std::move(next);
          grew = true;
        }
      }
    }
    nbhd.push_back(o);
  }
  return TopologyFamily::generated_by(t.size(), nbhd);
}

enum class TopologyOrder { Equal, AFiner, BFiner, Incomparable };

inline const char* order_name(TopologyOrder o) {
  switch (o) {
    case TopologyOrder::Equal: return "equal";
    case TopologyOrder::AFiner: return "A_finer";
    case TopologyOrder::BFiner: return "B_finer";
    case TopologyOrder::Incomparable: return "incomparable";
  }
  return "?";
}

/// `witness` is an open set of one family missing from the other;
/// `witness_in_a` says which family it came from.
struct TopologyComparison {
  TopologyOrder order = TopologyOrder::Equal;
  std::optional<ElementSet> witness;
  bool witness_in_a = true;
};

inline TopologyComparison compare_topologies(const TopologyFamily& a, const TopologyFamily& b) {
  if (a.ground_size() != b.ground_size())
    throw Error(ErrorKind::GroundMismatch, "topologies live on different ground sets",
                {a.ground_size(), b.ground_size()});
  auto extra = [](const TopologyFamily& from, const TopologyFamily& other) -> std::optional<ElementSet> {
    for (const auto& n : from.minimal_neighborhoods())
      if (!other.is_open(n)) return n;
    return std::nullopt;
  };
  auto a_extra = extra(a, b);
  auto b_extra = extra(b, a);
  if (!a_extra && !b_extra) return {TopologyOrder::Equal, std::nullopt, true};
  if (a_extra && !b_extra) return {TopologyOrder::AFiner, a_extra, true};
  if (!a_extra) return {TopologyOrder::BFiner, b_extra, false};
  return {TopologyOrder::Incomparable, a_extra, true};
}

/// Diagnostic ‖x‖ = min{n ≤ |x| : x lies in the closure of X_n inside X_{|x|}}.
inline std::size_t seminorm_height(const Tower& t, std::size_t x) {
  const std::size_t h = height(t, x);
  const auto& d = t.metric(h);
  for (std::size_t n = 0; n <= h; ++n)
    for (std::size_t a = 0; a < t.level_size(n); ++a)
      if (d(x, a) == 0) return n;
  return h;
}

}  // namespace unilim
