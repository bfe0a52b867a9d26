#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "unilim/error.hpp"
#include "unilim/rational.hpp"

namespace unilim {

/// A subset of a ground set, indexed by element.
using ElementSet = boost::dynamic_bitset<>;

inline ElementSet singleton(std::size_t size, std::size_t x) {
  ElementSet s(size);
  s.set(x);
  return s;
}

inline std::vector<std::size_t> members(const ElementSet& s) {
  std::vector<std::size_t> out;
  for (auto i = s.find_first(); i != ElementSet::npos; i = s.find_next(i)) out.push_back(i);
  return out;
}

/// Symmetric square table of exact distances. The pseudometric axioms are
/// checked by `check_pseudometric`, not on every write, so intermediate
/// weight tables can share the representation.
class Pseudometric {
 public:
  Pseudometric() = default;
  explicit Pseudometric(std::size_t size) : size_(size), dist_(size * size) {}

  std::size_t size() const noexcept { return size_; }

  const Rational& operator()(std::size_t i, std::size_t j) const { return dist_[i * size_ + j]; }

  void set(std::size_t i, std::size_t j, const Rational& v) {
    dist_[i * size_ + j] = v;
    dist_[j * size_ + i] = v;
  }

  /// The subspace metric on the first `m` points.
  Pseudometric restricted(std::size_t m) const {
    Pseudometric out(m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) out.dist_[i * m + j] = (*this)(i, j);
    return out;
  }

  Rational max_value() const {
    Rational best = 0;
    for (const auto& v : dist_) best = std::max(best, v);
    return best;
  }

  /// Sorted distinct positive values.
  std::vector<Rational> positive_values() const {
    std::vector<Rational> vals;
    for (const auto& v : dist_)
      if (v > 0) vals.push_back(v);
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    return vals;
  }

  bool is_zero_pair(std::size_t i, std::size_t j) const { return (*this)(i, j) == 0; }

  Pseudometric scaled(const Rational& factor) const {
    Pseudometric out = *this;
    for (auto& v : out.dist_) v *= factor;
    return out;
  }

  friend bool operator==(const Pseudometric& a, const Pseudometric& b) {
    return a.size_ == b.size_ && a.dist_ == b.dist_;
  }

 private:
  std::size_t size_ = 0;
  std::vector<Rational> dist_;
};

/// First (i, j, k) in lexicographic order with d(i,k) > d(i,j) + d(j,k).
inline std::optional<std::array<std::size_t, 3>> first_triangle_violation(const Pseudometric& d) {
  const std::size_t n = d.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (d(i, k) > d(i, j) + d(j, k)) return std::array<std::size_t, 3>{i, j, k};
  return std::nullopt;
}

/// Diagonal, sign and symmetry checks; the triangle inequality is separate
/// so callers can order diagnostics.
inline void check_pseudometric_basic(const Pseudometric& d, std::size_t level) {
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d(i, i) != 0)
      throw Error(ErrorKind::NotPseudometric, "nonzero diagonal at level " + std::to_string(level),
                  {level, i, i});
    for (std::size_t j = 0; j < d.size(); ++j) {
      if (d(i, j) < 0)
        throw Error(ErrorKind::NotPseudometric, "negative distance at level " + std::to_string(level),
                    {level, i, j});
      if (d(i, j) != d(j, i))
        throw Error(ErrorKind::NotPseudometric, "asymmetric distance at level " + std::to_string(level),
                    {level, i, j});
    }
  }
}

inline void check_triangle(const Pseudometric& d, std::size_t level) {
  if (auto v = first_triangle_violation(d)) {
    const auto [i, j, k] = *v;
    throw Error(ErrorKind::TriangleViolation,
                "level " + std::to_string(level) + ": d(" + std::to_string(i) + "," + std::to_string(k) +
                    ") exceeds d(" + std::to_string(i) + "," + std::to_string(j) + ") + d(" +
                    std::to_string(j) + "," + std::to_string(k) + ")",
                {level, i, j, k});
  }
}

inline void check_pseudometric(const Pseudometric& d, std::size_t level = 0) {
  check_pseudometric_basic(d, level);
  check_triangle(d, level);
}

/// All-pairs shortest paths over a nonnegative symmetric weight table. The
/// result is the largest pseudometric lying below the weights.
inline Pseudometric shortest_path_closure(Pseudometric w) {
  const std::size_t n = w.size();
  for (std::size_t i = 0; i < n; ++i) w.set(i, i, 0);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        Rational via = w(i, k) + w(k, j);
        if (via < w(i, j)) w.set(i, j, via);
      }
  return w;
}

/// A finite tower X_0 ⊂ X_1 ⊂ … ⊂ X_N. Level n is the prefix of the first
/// `level_sizes[n]` labels and carries `level_metrics[n]`.
struct Tower {
  std::vector<std::string> labels;
  std::vector<std::size_t> level_sizes;
  std::vector<Pseudometric> level_metrics;
  bool strict = false;

  std::size_t size() const noexcept { return labels.size(); }
  std::size_t level_count() const noexcept { return level_sizes.size(); }
  std::size_t top_level() const noexcept { return level_sizes.size() - 1; }
  std::size_t level_size(std::size_t n) const { return level_sizes.at(n); }
  const Pseudometric& metric(std::size_t n) const { return level_metrics.at(n); }
  const Pseudometric& top_metric() const { return level_metrics.back(); }

  std::optional<std::size_t> index_of(const std::string& label) const {
    auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) return std::nullopt;
    return static_cast<std::size_t>(it - labels.begin());
  }

  friend bool operator==(const Tower&, const Tower&) = default;
};

inline void check_level(const Tower& t, std::size_t level) {
  if (level >= t.level_count())
    throw Error(ErrorKind::LevelOutOfRange, "level " + std::to_string(level) + " outside tower",
                {level});
}

/// Checks every structural invariant and returns the tower unchanged, or
/// throws naming the first offending witness. Checks run in the order
/// nesting, pseudometric basics, subspace compatibility, triangle inequality.
inline Tower validate_tower(Tower raw) {
  const std::size_t levels = raw.level_sizes.size();
  if (levels == 0) throw Error(ErrorKind::NestingViolation, "tower has no levels");
  for (std::size_t n = 0; n < levels; ++n) {
    if (raw.level_sizes[n] == 0)
      throw Error(ErrorKind::NestingViolation, "level 0 is empty", {n});
    if (n > 0 && raw.level_sizes[n] <= raw.level_sizes[n - 1])
      throw Error(ErrorKind::NestingViolation,
                  "level sizes must be strictly increasing at level " + std::to_string(n), {n});
  }
  if (raw.level_sizes.back() != raw.labels.size())
    throw Error(ErrorKind::NestingViolation, "top level size differs from label count", {levels - 1});
  if (raw.level_metrics.size() != levels)
    throw Error(ErrorKind::NestingViolation, "one metric per level required");
  for (std::size_t n = 0; n < levels; ++n)
    if (raw.level_metrics[n].size() != raw.level_sizes[n])
      throw Error(ErrorKind::NestingViolation,
                  "metric size mismatch at level " + std::to_string(n), {n});
  {
    std::unordered_set<std::string> seen;
    for (std::size_t i = 0; i < raw.labels.size(); ++i)
      if (!seen.insert(raw.labels[i]).second)
        throw Error(ErrorKind::InvalidArgument, "duplicate label '" + raw.labels[i] + "'", {i});
  }
  for (std::size_t n = 0; n < levels; ++n) check_pseudometric_basic(raw.level_metrics[n], n);
  for (std::size_t n = 0; n + 1 < levels; ++n) {
    const auto& lo = raw.level_metrics[n];
    const auto& hi = raw.level_metrics[n + 1];
    for (std::size_t i = 0; i < lo.size(); ++i)
      for (std::size_t j = i + 1; j < lo.size(); ++j)
        if (lo.is_zero_pair(i, j) != hi.is_zero_pair(i, j))
          throw Error(ErrorKind::SubspaceViolation,
                      "zero pairs of levels " + std::to_string(n) + " and " + std::to_string(n + 1) +
                          " disagree",
                      {n, i, j});
  }
  for (std::size_t n = 0; n < levels; ++n) check_triangle(raw.level_metrics[n], n);
  if (raw.strict) {
    for (std::size_t n = 0; n + 1 < levels; ++n) {
      const auto& lo = raw.level_metrics[n];
      const auto& hi = raw.level_metrics[n + 1];
      for (std::size_t i = 0; i < lo.size(); ++i)
        for (std::size_t j = i + 1; j < lo.size(); ++j)
          if (lo(i, j) != hi(i, j))
            throw Error(ErrorKind::SubspaceViolation,
                        "strict tower: level " + std::to_string(n + 1) + " does not restrict to level " +
                            std::to_string(n),
                        {n, i, j});
    }
  }
  return raw;
}

/// |x| = min{n : x ∈ X_n}.
inline std::size_t height(const Tower& t, std::size_t x) {
  if (x >= t.size())
    throw Error(ErrorKind::IndexOutOfRange, "element " + std::to_string(x) + " outside tower", {x});
  return static_cast<std::size_t>(
      std::upper_bound(t.level_sizes.begin(), t.level_sizes.end(), x) - t.level_sizes.begin());
}

inline std::size_t pair_height(const Tower& t, std::size_t x, std::size_t y) {
  return std::max(height(t, x), height(t, y));
}

/// Thresholds ε whose sublevel relations {d < ε} form a finite base of a
/// level's uniformity: each distinct positive distance, then one value above
/// the maximum. The first threshold always yields the zero relation.
struct GridScale {
  std::size_t level = 0;
  std::vector<Rational> thresholds;
};

inline GridScale grid_scale(const Tower& t, std::size_t level) {
  check_level(t, level);
  GridScale g{level, t.metric(level).positive_values()};
  g.thresholds.push_back(g.thresholds.empty() ? Rational(1) : g.thresholds.back() + 1);
  return g;
}

/// Per-level pseudometrics d_n on X_n with d_n ≤ d_{n+1} on X_n².
struct MonotonePseudometricSequence {
  std::vector<Pseudometric> metrics;

  friend bool operator==(const MonotonePseudometricSequence&,
                         const MonotonePseudometricSequence&) = default;
};

inline void validate_sequence(const Tower& t, const MonotonePseudometricSequence& seq) {
  if (seq.metrics.size() != t.level_count())
    throw Error(ErrorKind::LevelCountMismatch, "sequence needs one metric per tower level");
  for (std::size_t n = 0; n < t.level_count(); ++n) {
    const auto& d = seq.metrics[n];
    if (d.size() != t.level_size(n))
      throw Error(ErrorKind::LevelMismatch, "sequence metric size mismatch at level " + std::to_string(n),
                  {n});
    check_pseudometric(d, n);
    const auto& base = t.metric(n);
    for (std::size_t i = 0; i < d.size(); ++i)
      for (std::size_t j = i + 1; j < d.size(); ++j)
        if (base.is_zero_pair(i, j) && d(i, j) != 0)
          throw Error(ErrorKind::NotUniform,
                      "sequence metric positive on a zero pair at level " + std::to_string(n), {n, i, j});
    if (n + 1 < t.level_count()) {
      const auto& next = seq.metrics[n + 1];
      for (std::size_t i = 0; i < d.size(); ++i)
        for (std::size_t j = i + 1; j < d.size(); ++j)
          if (d(i, j) > next(i, j))
            throw Error(ErrorKind::NotMonotone, "d_n exceeds d_{n+1} at level " + std::to_string(n),
                        {n, i, j});
    }
  }
}

/// The sequence d_n = level metric n. Monotone whenever the tower is strict.
inline MonotonePseudometricSequence level_sequence(const Tower& t) {
  return MonotonePseudometricSequence{t.level_metrics};
}

}  // namespace unilim
