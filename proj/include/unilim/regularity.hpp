#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "unilim/relation.hpp"
#include "unilim/topology.hpp"
#include "unilim/tower.hpp"

namespace unilim {

/// f : X → Y from the top level of `source` into the top level of `target`.
/// The target's uniformity is that of its top-level metric, which at finite
/// scale is also the uniformity of its direct limit.
struct SpaceMap {
  Tower source;
  Tower target;
  std::vector<std::size_t> values;
};

inline void validate_map(const SpaceMap& f) {
  if (f.values.size() != f.source.size())
    throw Error(ErrorKind::InvalidArgument, "map must assign a value to every source point");
  for (std::size_t x = 0; x < f.values.size(); ++x)
    if (f.values[x] >= f.target.size())
      throw Error(ErrorKind::IndexOutOfRange, "map value outside target", {x, f.values[x]});
}

/// Finite continuity of f|X_n: zero pairs of d⁽ⁿ⁾ go to zero pairs of Y.
inline std::optional<std::pair<std::size_t, std::size_t>> restriction_discontinuity(const SpaceMap& f,
                                                                                   std::size_t level) {
  const auto& d = f.source.metric(level);
  const auto& dy = f.target.top_metric();
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = i + 1; j < d.size(); ++j)
      if (d(i, j) == 0 && dy(f.values[i], f.values[j]) != 0) return std::make_pair(i, j);
  return std::nullopt;
}

/// Whether X_subset is closed in X_level: no zero pair of d^(level) joins
/// it to an outside point.
inline bool level_closed_in(const Tower& t, std::size_t subset_level, std::size_t level) {
  const auto& d = t.metric(level);
  for (std::size_t x = t.level_size(subset_level); x < t.level_size(level); ++x)
    for (std::size_t a = 0; a < t.level_size(subset_level); ++a)
      if (d(x, a) == 0) return false;
  return true;
}

/// W chosen for the target threshold `target_eps` and source threshold
/// `source_eps` (all entourages are grid sublevel sets {d < ε}).
struct RegularityCell {
  Rational target_eps;
  Rational source_eps;
  Rational witness_eps;
};

struct RegularityFailure {
  Rational target_eps;
  Rational source_eps;
  std::size_t point = 0;
};

struct RegularityVerdict {
  bool regular = true;
  std::vector<RegularityCell> witnesses;
  std::optional<RegularityFailure> counterexample;
  bool subset_closed = true;
};

namespace detail {

/// Definition check for one (U, V, W): every x ∈ B(A;W) has a ∈ A with
/// (a,x) ∈ V and (f(x), f(a)) ∈ U. Returns the first failing x.
inline std::optional<std::size_t> regularity_defect(const SpaceMap& f, std::size_t level, std::size_t subset_size,
                                                    const Rational& u_eps, const Rational& v_eps,
                                                    const Rational& w_eps) {
  const auto& d = f.source.metric(level);
  const auto& dy = f.target.top_metric();
  for (std::size_t x = 0; x < d.size(); ++x) {
    bool near = false;
    for (std::size_t a = 0; a < subset_size && !near; ++a) near = d(x, a) < w_eps;
    if (!near) continue;
    bool ok = false;
    for (std::size_t a = 0; a < subset_size && !ok; ++a)
      ok = d(a, x) < v_eps && dy(f.values[x], f.values[a]) < u_eps;
    if (!ok) return x;
  }
  return std::nullopt;
}

}  // namespace detail

/// Regularity of f|X_level at the subset X_subset_level, with every
/// quantifier ranging over grid entourages. The condition only gets easier
/// as W shrinks, so W is searched from the zero relation upward and a
/// failure at the zero relation defeats every W.
inline RegularityVerdict is_regular_at(const SpaceMap& f, std::size_t level, std::size_t subset_level) {
  validate_map(f);
  check_level(f.source, level);
  if (subset_level > level)
    throw Error(ErrorKind::LevelOutOfRange, "subset level above level", {subset_level, level});
  RegularityVerdict out;
  out.subset_closed = level_closed_in(f.source, subset_level, level);
  const auto u_grid = grid_scale(f.target, f.target.top_level()).thresholds;
  const auto x_grid = grid_scale(f.source, level).thresholds;
  const std::size_t subset_size = f.source.level_size(subset_level);
  for (const auto& u : u_grid)
    for (const auto& v : x_grid) {
      std::optional<Rational> found;
      for (const auto& w : x_grid)
        if (!detail::regularity_defect(f, level, subset_size, u, v, w)) {
          found = w;
          break;
        }
      if (!found) {
        out.regular = false;
        out.witnesses.clear();
        out.counterexample =
            RegularityFailure{u, v, *detail::regularity_defect(f, level, subset_size, u, v, x_grid.front())};
        return out;
      }
      out.witnesses.push_back({u, v, *found});
    }
  return out;
}

/// Regularity of f|X_n at X_{n-1}; vacuous at n = 0.
inline RegularityVerdict is_regular_at(const SpaceMap& f, std::size_t level) {
  if (level == 0) {
    validate_map(f);
    return RegularityVerdict{};
  }
  return is_regular_at(f, level, level - 1);
}

struct ContinuityVerdict {
  bool continuous = true;
  /// An open set of the target whose preimage is not open, and a point of
  /// the preimage that is not interior.
  std::optional<ElementSet> witness_open;
  std::optional<std::size_t> point;
};

/// Open-preimage check of f against the direct-limit topology of the
/// source and the topology of the target.
inline ContinuityVerdict is_continuous(const SpaceMap& f) {
  validate_map(f);
  const auto src = ulim_topology(f.source);
  const auto dst = ulim_topology(f.target);
  for (std::size_t x = 0; x < f.source.size(); ++x) {
    const auto& target_nbhd = dst.minimal_neighborhood(f.values[x]);
    for (auto y : members(src.minimal_neighborhood(x)))
      if (!target_nbhd.test(f.values[y])) return {false, target_nbhd, x};
  }
  return {};
}

struct LevelReport {
  std::size_t level = 0;
  std::optional<std::pair<std::size_t, std::size_t>> discontinuity;
  RegularityVerdict regularity;
};

struct CriterionVerdict {
  bool hypothesis = true;
  bool conclusion = true;
  /// Hypothesis holds but f is discontinuous; never expected.
  bool violation = false;
  std::vector<LevelReport> levels;
  std::vector<std::size_t> non_closed_levels;
  ContinuityVerdict continuity;
};

/// Evaluates "f|X_n is continuous and regular at X_{n-1} for every n ≥ 1"
/// together with the direct continuity check. A tower truncated at level N
/// stands for X_n = X_N beyond N, so a one-level tower is checked at n = 1
/// with X_1 = X_0.
inline CriterionVerdict continuity_criterion(const SpaceMap& f) {
  validate_map(f);
  CriterionVerdict out;
  const std::size_t top = f.source.top_level();
  const std::size_t last = std::max<std::size_t>(top, 1);
  for (std::size_t n = 1; n <= last; ++n) {
    const std::size_t lvl = std::min(n, top);
    const std::size_t sub = std::min(n - 1, top);
    LevelReport rep;
    rep.level = n;
    rep.discontinuity = restriction_discontinuity(f, lvl);
    rep.regularity = is_regular_at(f, lvl, sub);
    if (!rep.regularity.subset_closed) out.non_closed_levels.push_back(n);
    if (rep.discontinuity || !rep.regularity.regular) out.hypothesis = false;
    out.levels.push_back(std::move(rep));
  }
  out.continuity = is_continuous(f);
  out.conclusion = out.continuity.continuous;
  out.violation = out.hypothesis && !out.conclusion;
  return out;
}

struct HomeoVerdict {
  CriterionVerdict forward;
  CriterionVerdict backward;
  /// Both hypotheses hold.
  bool criterion_holds = false;
  /// Both directions are continuous.
  bool homeomorphic = false;
  /// Source topology pushed along h, compared with the target topology.
  TopologyComparison transported;
  /// `homeomorphic` agrees with the transported comparison, and the
  /// criterion never claims more than the direct check.
  bool consistent = false;
};

inline HomeoVerdict homeo_criterion(const SpaceMap& h, const SpaceMap& h_inv) {
  validate_map(h);
  validate_map(h_inv);
  if (!(h.source == h_inv.target) || !(h.target == h_inv.source) || h.source.size() != h.target.size())
    throw Error(ErrorKind::NotInverse, "maps do not run between the same two towers");
  for (std::size_t x = 0; x < h.values.size(); ++x)
    if (h_inv.values[h.values[x]] != x) throw Error(ErrorKind::NotInverse, "h_inv(h(x)) != x", {x});
  for (std::size_t y = 0; y < h_inv.values.size(); ++y)
    if (h.values[h_inv.values[y]] != y) throw Error(ErrorKind::NotInverse, "h(h_inv(y)) != y", {y});

  HomeoVerdict out;
  out.forward = continuity_criterion(h);
  out.backward = continuity_criterion(h_inv);
  out.criterion_holds = out.forward.hypothesis && out.backward.hypothesis;
  out.homeomorphic = out.forward.conclusion && out.backward.conclusion;

  const auto src = ulim_topology(h.source);
  std::vector<ElementSet> pushed(h.target.size(), ElementSet(h.target.size()));
  for (std::size_t x = 0; x < h.source.size(); ++x)
    for (auto y : members(src.minimal_neighborhood(x))) pushed[h.values[x]].set(h.values[y]);
  out.transported = compare_topologies(TopologyFamily::generated_by(h.target.size(), pushed),
                                       ulim_topology(h.target));
  out.consistent = out.homeomorphic == (out.transported.order == TopologyOrder::Equal) &&
                   (!out.criterion_holds || out.homeomorphic);
  return out;
}

}  // namespace unilim
