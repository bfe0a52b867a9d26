#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "unilim/tower.hpp"

namespace unilim {

/// A binary relation on the ground set X_level of a tower, stored as one
/// bit row per first coordinate: row(x) = {z : (x,z) ∈ U}. Entourages are
/// the reflexive relations; the algebra below works on arbitrary relations
/// and callers enforce reflexivity with `require_reflexive`.
class Entourage {
 public:
  Entourage() = default;

  /// The empty relation on a ground set of `size` points.
  Entourage(std::size_t level, std::size_t size) : level_(level), rows_(size, ElementSet(size)) {}

  static Entourage diagonal(std::size_t level, std::size_t size) {
    Entourage u(level, size);
    for (std::size_t i = 0; i < size; ++i) u.insert(i, i);
    return u;
  }

  static Entourage full(std::size_t level, std::size_t size) {
    Entourage u(level, size);
    for (auto& r : u.rows_) r.set();
    return u;
  }

  /// {(x,y) ∈ X_level² : d(x,y) < eps} for the level metric.
  static Entourage sublevel(const Tower& t, std::size_t level, const Rational& eps) {
    return sublevel(t.metric(level), level, eps);
  }

  static Entourage sublevel(const Pseudometric& d, std::size_t level, const Rational& eps) {
    Entourage u(level, d.size());
    for (std::size_t i = 0; i < d.size(); ++i)
      for (std::size_t j = 0; j < d.size(); ++j)
        if (d(i, j) < eps) u.insert(i, j);
    return u;
  }

  /// {d = 0}: the smallest entourage of the level's uniformity.
  static Entourage zero_relation(const Tower& t, std::size_t level) {
    const auto& d = t.metric(level);
    Entourage u(level, d.size());
    for (std::size_t i = 0; i < d.size(); ++i)
      for (std::size_t j = 0; j < d.size(); ++j)
        if (d(i, j) == 0) u.insert(i, j);
    return u;
  }

  static Entourage from_pairs(std::size_t level, std::size_t size,
                              const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
    Entourage u(level, size);
    for (auto [x, y] : pairs) {
      if (x >= size || y >= size)
        throw Error(ErrorKind::IndexOutOfRange, "pair outside level " + std::to_string(level), {x, y});
      u.insert(x, y);
    }
    return u;
  }

  std::size_t level() const noexcept { return level_; }
  std::size_t size() const noexcept { return rows_.size(); }

  bool contains(std::size_t x, std::size_t y) const { return rows_[x].test(y); }
  void insert(std::size_t x, std::size_t y) { rows_[x].set(y); }
  const ElementSet& row(std::size_t x) const { return rows_[x]; }

  /// {y : (y,x) ∈ U}.
  ElementSet column(std::size_t x) const {
    ElementSet out(size());
    for (std::size_t y = 0; y < size(); ++y)
      if (rows_[y].test(x)) out.set(y);
    return out;
  }

  bool is_reflexive() const {
    for (std::size_t i = 0; i < size(); ++i)
      if (!contains(i, i)) return false;
    return true;
  }

  bool is_symmetric() const {
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j = i + 1; j < size(); ++j)
        if (contains(i, j) != contains(j, i)) return false;
    return true;
  }

  std::size_t count() const {
    std::size_t c = 0;
    for (const auto& r : rows_) c += r.count();
    return c;
  }

  /// Sorted list of member pairs.
  std::vector<std::pair<std::size_t, std::size_t>> pairs() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t x = 0; x < size(); ++x)
      for (auto y : members(rows_[x])) out.emplace_back(x, y);
    return out;
  }

  Entourage& operator|=(const Entourage& o) {
    for (std::size_t i = 0; i < size(); ++i) rows_[i] |= o.rows_[i];
    return *this;
  }

  Entourage& operator&=(const Entourage& o) {
    for (std::size_t i = 0; i < size(); ++i) rows_[i] &= o.rows_[i];
    return *this;
  }

  friend bool operator==(const Entourage& a, const Entourage& b) {
    return a.level_ == b.level_ && a.rows_ == b.rows_;
  }

 private:
  std::size_t level_ = 0;
  std::vector<ElementSet> rows_;
};

inline void require_reflexive(const Entourage& u) {
  for (std::size_t i = 0; i < u.size(); ++i)
    if (!u.contains(i, i))
      throw Error(ErrorKind::NotReflexive, "relation misses the diagonal", {u.level(), i});
}

/// Embeds a relation on X_m into X_n² (n ≥ m): pairs are kept and the
/// diagonal of the new points is added.
inline Entourage promote(const Entourage& u, std::size_t level, std::size_t size) {
  if (level < u.level() || size < u.size() || (level == u.level() && size != u.size()))
    throw Error(ErrorKind::LevelMismatch,
                "cannot promote level " + std::to_string(u.level()) + " to level " + std::to_string(level),
                {u.level(), level});
  Entourage out(level, size);
  for (std::size_t x = 0; x < u.size(); ++x)
    for (auto y : members(u.row(x))) out.insert(x, y);
  for (std::size_t i = u.size(); i < size; ++i) out.insert(i, i);
  return out;
}

namespace detail {

inline std::pair<Entourage, Entourage> common_level(const Entourage& u, const Entourage& v) {
  if (u.level() == v.level() && u.size() != v.size())
    throw Error(ErrorKind::LevelMismatch, "same level, different ground sizes", {u.level(), v.level()});
  if (u.level() < v.level()) return {promote(u, v.level(), v.size()), v};
  if (v.level() < u.level()) return {u, promote(v, u.level(), u.size())};
  return {u, v};
}

}  // namespace detail

/// U ⊆ V after promotion to the common level.
inline bool included(const Entourage& u, const Entourage& v) {
  auto [a, b] = detail::common_level(u, v);
  for (std::size_t x = 0; x < a.size(); ++x)
    if (!a.row(x).is_subset_of(b.row(x))) return false;
  return true;
}

inline Entourage inverse(const Entourage& u) {
  Entourage out(u.level(), u.size());
  for (std::size_t x = 0; x < u.size(); ++x)
    for (auto y : members(u.row(x))) out.insert(y, x);
  return out;
}

inline Entourage symmetrize(const Entourage& u) {
  Entourage out = u;
  out |= inverse(u);
  return out;
}

/// U + V. The summands are applied to balls in order, so that
/// B(x; U+V) = B(B(x;U); V); as a set of pairs
/// U + V = {(x,z) : ∃y, (x,y) ∈ V and (y,z) ∈ U}.
inline Entourage compose(const Entourage& u, const Entourage& v) {
  auto [a, b] = detail::common_level(u, v);
  Entourage out(a.level(), a.size());
  for (std::size_t x = 0; x < a.size(); ++x) {
    ElementSet acc(a.size());
    for (auto y : members(b.row(x))) acc |= a.row(y);
    for (auto z : members(acc)) out.insert(x, z);
  }
  return out;
}

/// k·U with 1·U = U and (k+1)·U = k·U + U.
inline Entourage multiple(const Entourage& u, std::size_t k) {
  if (k == 0) throw Error(ErrorKind::InvalidArgument, "multiple needs k >= 1");
  Entourage acc = u;
  for (std::size_t i = 1; i < k; ++i) acc = compose(acc, u);
  return acc;
}

/// Tail U_i = U_N for every i beyond the last entry.
struct RepeatLast {};
using TailPolicy = std::variant<RepeatLast, Entourage>;

/// (U_i) for i = start, start+1, …; entries[i - start] lives on X_i.
struct EntourageSequence {
  std::size_t start = 0;
  std::vector<Entourage> entries;
  TailPolicy tail = RepeatLast{};

  std::size_t last_level() const { return start + entries.size() - 1; }
};

inline void validate_entourage_sequence(const EntourageSequence& seq) {
  if (seq.entries.empty()) throw Error(ErrorKind::InvalidArgument, "empty entourage sequence");
  for (std::size_t i = 0; i < seq.entries.size(); ++i) {
    if (seq.entries[i].level() != seq.start + i)
      throw Error(ErrorKind::LevelMismatch,
                  "entry " + std::to_string(i) + " lives on level " +
                      std::to_string(seq.entries[i].level()),
                  {seq.start + i, seq.entries[i].level()});
    if (i > 0 && seq.entries[i].size() < seq.entries[i - 1].size())
      throw Error(ErrorKind::LevelMismatch, "ground sets must grow along the sequence", {seq.start + i});
  }
  if (const auto* e = std::get_if<Entourage>(&seq.tail)) {
    const auto& last = seq.entries.back();
    if (e->level() < last.level() || e->size() < last.size())
      throw Error(ErrorKind::LevelMismatch, "tail entourage below the last entry", {e->level()});
  }
}

namespace detail {

inline Entourage tail_entourage(const EntourageSequence& seq) {
  if (const auto* e = std::get_if<Entourage>(&seq.tail)) return *e;
  return seq.entries.back();
}

}  // namespace detail

/// Σ_{start ≤ i ≤ upto} U_i, or the ω-sum when `upto` is empty: the finite
/// sum through the last entry followed by the tail entourage, added until
/// the relation stops growing. Reflexive summands make the partial sums
/// increase, so the loop ends within |X|² rounds.
inline Entourage sigma_sum(const EntourageSequence& seq, std::optional<std::size_t> upto = std::nullopt) {
  validate_entourage_sequence(seq);
  if (upto && *upto < seq.start)
    throw Error(ErrorKind::LevelOutOfRange, "sum bound below sequence start", {*upto, seq.start});
  const std::size_t stop = upto ? std::min(*upto, seq.last_level()) : seq.last_level();
  Entourage acc = seq.entries.front();
  for (std::size_t i = seq.start + 1; i <= stop; ++i) acc = compose(acc, seq.entries[i - seq.start]);
  if (upto && *upto <= seq.last_level()) return acc;

  const Entourage tail = detail::tail_entourage(seq);
  if (upto) {
    for (std::size_t i = seq.last_level(); i < *upto; ++i) acc = compose(acc, tail);
    return acc;
  }
  for (;;) {
    Entourage next = compose(acc, tail);
    if (next == acc) return acc;
    acc = std::move(next);
  }
}

/// B(x;U) = {y : (y,x) ∈ U}.
inline ElementSet ball(std::size_t x, const Entourage& u) {
  if (x >= u.size())
    throw Error(ErrorKind::IndexOutOfRange, "ball centre outside level " + std::to_string(u.level()),
                {x});
  return u.column(x);
}

/// B(A;U) = ⋃_{a∈A} B(a;U); `a` must lie in the relation's ground set.
inline ElementSet ball_set(const ElementSet& a, const Entourage& u) {
  for (auto i : members(a))
    if (i >= u.size())
      throw Error(ErrorKind::IndexOutOfRange, "set member outside level " + std::to_string(u.level()), {i});
  ElementSet src = a;
  src.resize(u.size());
  ElementSet out(u.size());
  for (std::size_t y = 0; y < u.size(); ++y)
    if (u.row(y).intersects(src)) out.set(y);
  return out;
}

/// Ball around a set living on a larger ground set than the relation's:
/// the relation acts as if promoted, so points outside its ground set only
/// reach themselves.
inline ElementSet ball_set_promoted(const ElementSet& a, const Entourage& u) {
  ElementSet src = a;
  src.resize(u.size());
  ElementSet out(std::max(a.size(), u.size()));
  for (std::size_t y = 0; y < u.size(); ++y)
    if (u.row(y).intersects(src)) out.set(y);
  for (std::size_t i = u.size(); i < a.size(); ++i)
    if (a.test(i)) out.set(i);
  return out;
}

}  // namespace unilim
