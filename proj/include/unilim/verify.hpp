#pragma once

// Theorem-suite runner: one check per (theorem id, instance), each compared
// against a brute-force oracle or a direct definition. A failed check is a
// soundness violation of the library, never an expected outcome.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "unilim/constructions.hpp"
#include "unilim/fixtures.hpp"
#include "unilim/generate.hpp"
#include "unilim/io.hpp"
#include "unilim/limit_metric.hpp"
#include "unilim/oracle.hpp"
#include "unilim/regularity.hpp"
#include "unilim/topology.hpp"

namespace unilim::verify {

using json = nlohmann::json;

inline const std::vector<std::string>& theorem_ids() {
  static const std::vector<std::string> ids = {"T1", "T2", "T3", "L-mod", "L-adeq", "L-pseudo",
                                               "T5", "C6", "P-group", "P-box", "P-lc"};
  return ids;
}

inline std::size_t theorem_rank(const std::string& id) {
  const auto& ids = theorem_ids();
  auto it = std::find(ids.begin(), ids.end(), id);
  if (it == ids.end()) throw Error(ErrorKind::UnknownTheoremId, "unknown theorem id '" + id + "'");
  return static_cast<std::size_t>(it - ids.begin());
}

struct Outcome {
  bool pass = true;
  json certificate = json::object();
  json counterexample;  // null when passing
};

struct Report {
  std::string theorem;
  std::string instance;
  std::optional<std::uint64_t> seed;
  Outcome outcome;
  std::optional<double> wall_ms;

  json to_json() const {
    json j;
    j["theorem"] = theorem;
    j["instance"] = instance;
    j["seed"] = seed ? json(*seed) : json();
    j["verdict"] = outcome.pass ? "pass" : "fail";
    j["certificate"] = outcome.certificate;
    if (!outcome.pass) j["counterexample"] = outcome.counterexample;
    if (wall_ms) j["wall_ms"] = *wall_ms;
    return j;
  }
};

namespace detail {

inline json sets_json(const std::vector<ElementSet>& v) {
  json a = json::array();
  for (const auto& s : v) a.push_back(members(s));
  return a;
}

inline Profile small_profile(Rng& rng, std::size_t max_levels, std::size_t max_size) {
  Profile p;
  p.levels = 1 + rng.below(max_levels);
  p.max_size = max_size;
  return p;
}

// --- T3 and L-mod -----------------------------------------------------------

inline Outcome check_limit(const Tower& t, const MonotonePseudometricSequence& seq) {
  Outcome o;
  const auto fast = limit_pseudometric(t, seq).dist;
  const auto slow = oracle::limit_by_chains(t, seq);
  for (std::size_t x = 0; x < t.size(); ++x)
    for (std::size_t y = x + 1; y < t.size(); ++y)
      if (fast(x, y) != slow(x, y)) {
        o.pass = false;
        o.counterexample = {{"pair", {x, y}}, {"fast", to_string(fast(x, y))}, {"oracle", to_string(slow(x, y))}};
        return o;
      }
  check_pseudometric(fast);
  o.certificate = {{"points", t.size()}, {"levels", t.level_count()}, {"d_inf", io::metric_to_json(fast)}};
  return o;
}

inline Outcome check_valley(const Tower& t, const MonotonePseudometricSequence& seq) {
  Outcome o;
  const auto lim = limit_pseudometric(t, seq).dist;
  for (std::size_t x = 0; x < t.size(); ++x)
    for (std::size_t y = 0; y < t.size(); ++y) {
      if (x == y) continue;
      const Rational v = valley_distance(t, seq, x, y);
      const Chain c = valley_witness(t, seq, x, y);
      const bool ok = v == lim(x, y) && is_valley_chain(t, c) && chain_weight(t, seq, c) == v &&
                      c.points.front() == x && c.points.back() == y &&
                      (t.size() > 6 || oracle::valley_by_chains(t, seq, x, y) == v);
      if (!ok) {
        o.pass = false;
        o.counterexample = {{"pair", {x, y}}, {"valley", to_string(v)}, {"limit", to_string(lim(x, y))},
                            {"chain", c.points}};
        return o;
      }
    }
  o.certificate = {{"points", t.size()}, {"pairs", t.size() * (t.size() - 1)}};
  return o;
}

// --- T1 and P-lc -----------------------------------------------------------

inline Outcome check_base(const Tower& t, Rng& rng) {
  Outcome o;
  GridBase base(t);
  std::vector<std::vector<ElementSet>> balls(t.size());
  std::size_t total = 0;
  for (std::size_t x = 0; x < t.size(); ++x) {
    balls[x] = base_balls(base, x);
    total += balls[x].size();
  }
  auto open_by_balls = [&](const ElementSet& s) {
    for (auto y : members(s)) {
      bool inside = false;
      for (const auto& b : balls[y])
        if (b.is_subset_of(s)) {
          inside = true;
          break;
        }
      if (!inside) return false;
    }
    return true;
  };
  for (std::size_t x = 0; x < t.size(); ++x)
    for (const auto& b : balls[x])
      if (!b.test(x) || !open_by_balls(b)) {
        o.pass = false;
        o.counterexample = {{"kind", "ball not open"}, {"centre", x}, {"ball", members(b)}};
        return o;
      }
  const auto topo = ulim_topology(t);
  for (std::size_t x = 0; x < t.size(); ++x) {
    const auto& n = topo.minimal_neighborhood(x);
    bool found = false;
    for (const auto& b : balls[x]) found = found || b.is_subset_of(n);
    if (!found) {
      o.pass = false;
      o.counterexample = {{"kind", "no base ball inside neighbourhood"}, {"point", x}, {"neighbourhood", members(n)}};
      return o;
    }
  }
  // Balls of a limit pseudometric are open as well.
  const auto seq = random_sequence(rng, t, Profile{}.value_pool);
  const auto lim = limit_pseudometric(t, seq).dist;
  auto thresholds = lim.positive_values();
  thresholds.push_back(thresholds.empty() ? Rational(1) : thresholds.back() + 1);
  for (std::size_t x = 0; x < t.size(); ++x)
    for (const auto& eps : thresholds) {
      ElementSet b(t.size());
      for (std::size_t y = 0; y < t.size(); ++y)
        if (lim(x, y) < eps) b.set(y);
      if (!topo.is_open(b)) {
        o.pass = false;
        o.counterexample = {{"kind", "limit-metric ball not open"}, {"centre", x}, {"radius", to_string(eps)}};
        return o;
      }
    }
  o.certificate = {{"points", t.size()}, {"levels", t.level_count()}, {"base_balls", total}};
  return o;
}

inline Outcome check_lc(const Tower& t) {
  Outcome o;
  const auto u = ulim_topology(t);
  const auto cmp = compare_topologies(u, tlim_topology(t));
  const auto zc = compare_topologies(u, oracle::zero_class_topology(t));
  o.pass = cmp.order == TopologyOrder::Equal && zc.order == TopologyOrder::Equal;
  o.certificate = {{"points", t.size()}, {"order", order_name(cmp.order)},
                   {"neighbourhoods", sets_json(u.minimal_neighborhoods())}};
  if (!o.pass)
    o.counterexample = {{"tlim", order_name(cmp.order)}, {"zero_classes", order_name(zc.order)},
                        {"witness", cmp.witness ? json(members(*cmp.witness)) : json()}};
  return o;
}

// --- T2 ----------------------------------------------------------------------

inline Outcome check_product(const Tower& a, const Tower& b) {
  Outcome o;
  const auto v = check_multiplicativity(a, b);
  o.pass = v.equal;
  o.certificate = {{"points", a.size() * b.size()}, {"order", order_name(v.comparison.order)}};
  if (!o.pass) o.counterexample = {{"witness", members(*v.comparison.witness)}, {"in_product_tower", v.comparison.witness_in_a}};
  return o;
}

// --- L-adeq and L-pseudo ---------------------------------------------------------

inline Outcome check_adequate(const Tower& t, const EntourageSequence& targets) {
  Outcome o;
  const auto seq = adequate_sequence(t, targets);
  try {
    validate_sequence(t, seq);
  } catch (const Error& e) {
    o.pass = false;
    o.counterexample = {{"error", kind_name(e.kind())}, {"witness", e.witness()}};
    return o;
  }
  for (std::size_t n = 0; n < t.level_count(); ++n)
    if (!included(Entourage::sublevel(seq.metrics[n], n, 1), targets.entries[n])) {
      o.pass = false;
      o.counterexample = {{"level", n}, {"kind", "{d_n < 1} not inside U_n"}};
      return o;
    }
  o.certificate = {{"points", t.size()}, {"sequence", io::sequence_to_json(seq)}};
  return o;
}

/// U = {d < r}, U_0 = {d < r/5}, U_{n+1} = {d < r/(5·2^{n+1})} for the top
/// metric d; the sequence is adequate for the ladder traces on each level.
inline Outcome check_generation(const Tower& t, const Rational& r) {
  Outcome o;
  const std::size_t top = t.top_level();
  const auto& d = t.top_metric();
  const Entourage u = Entourage::sublevel(d, top, r);
  std::vector<Entourage> ladder;
  Rational radius = r / 5;
  EntourageSequence targets;
  targets.start = 0;
  for (std::size_t n = 0; n < t.level_count(); ++n) {
    ladder.push_back(Entourage::sublevel(d, top, radius));
    targets.entries.push_back(Entourage::sublevel(d.restricted(t.level_size(n)), n, radius));
    radius /= 2;
  }
  const auto seq = adequate_sequence(t, targets);
  const auto v = verify_generation(t, u, seq, ladder);
  o.pass = v.confirmed;
  o.certificate = {{"points", t.size()}, {"radius", to_string(r)}};
  if (!o.pass) o.counterexample = {{"pair", {v.counterexample->first, v.counterexample->second}}};
  return o;
}

// --- T5 and C6 ------------------------------------------------------------------

inline Outcome check_criterion(const SpaceMap& f) {
  Outcome o;
  const auto v = continuity_criterion(f);
  for (const auto& lv : v.levels) {
    const std::size_t lvl = std::min(lv.level, f.source.top_level());
    const std::size_t sub = std::min(lv.level - 1, f.source.top_level());
    if (f.source.level_size(lvl) <= 8 && lv.regularity.regular != oracle::regular_naive(f, lvl, sub)) {
      o.pass = false;
      o.counterexample = {{"kind", "regularity shortcut disagrees with naive check"}, {"level", lv.level}};
      return o;
    }
  }
  o.pass = !v.violation;
  o.certificate = {{"hypothesis", v.hypothesis}, {"conclusion", v.conclusion},
                   {"non_closed_levels", v.non_closed_levels}};
  if (!o.pass) o.counterexample = {{"values", f.values}, {"point", *v.continuity.point}};
  return o;
}

inline Outcome check_homeo(const SpaceMap& h, const SpaceMap& h_inv) {
  Outcome o;
  const auto v = homeo_criterion(h, h_inv);
  o.pass = v.consistent;
  o.certificate = {{"criterion", v.criterion_holds}, {"homeomorphic", v.homeomorphic},
                   {"transported", order_name(v.transported.order)}};
  if (!o.pass) o.counterexample = {{"values", h.values}};
  return o;
}

inline std::pair<SpaceMap, SpaceMap> bijection(const Tower& a, const Tower& b, std::vector<std::size_t> values) {
  std::vector<std::size_t> inv(values.size());
  for (std::size_t x = 0; x < values.size(); ++x) inv[values[x]] = x;
  return {SpaceMap{a, b, std::move(values)}, SpaceMap{b, a, std::move(inv)}};
}

// --- P-group and P-box ---------------------------------------------------------

inline Outcome check_group(const GroupTower& g, const std::vector<Rational>& radii) {
  Outcome o;
  const auto v = check_group_limit(g, radii);
  o.pass = v.passed;
  json r = json::array();
  for (const auto& x : radii) r.push_back(to_string(x));
  o.certificate = {{"order", g.tower.size()}, {"radii", r}, {"ball", members(v.product_ball)}};
  if (!o.pass)
    o.counterexample = {{"ball_matches", v.ball_matches}, {"commute", v.commute}, {"halving", v.halving_holds},
                        {"eq", v.eq_holds}, {"sum_ball", members(v.sum_ball)}};
  return o;
}

inline Outcome check_box(const std::vector<PointedSpace>& factors, std::size_t depth) {
  Outcome o;
  const auto v = check_box_limit(factors, depth);
  o.pass = v.equal;
  o.certificate = {{"factors", factors.size()}, {"depth", depth}, {"order", order_name(v.comparison.order)}};
  if (!o.pass) o.counterexample = {{"witness", members(*v.comparison.witness)}};
  return o;
}

}  // namespace detail

/// Fixture instances checked before the seeded ones, per theorem.
inline std::vector<std::pair<std::string, std::function<Outcome()>>> fixture_checks(const std::string& id) {
  using namespace detail;
  std::vector<std::pair<std::string, std::function<Outcome()>>> out;
  if (id == "T1") out.emplace_back("fixture:T1", [] {
    Rng rng(0);
    return check_base(fixtures::t1(), rng);
  });
  if (id == "T3") out.emplace_back("fixture:T1/M1", [] { return check_limit(fixtures::t1(), fixtures::m1()); });
  if (id == "L-mod") out.emplace_back("fixture:T1/M1", [] { return check_valley(fixtures::t1(), fixtures::m1()); });
  if (id == "T5") {
    out.emplace_back("fixture:glued", [] {
      Outcome o = check_criterion(fixtures::glued_map());
      // Both verdicts are known here: the hypothesis and continuity fail.
      o.pass = o.pass && !o.certificate["hypothesis"].get<bool>() && !o.certificate["conclusion"].get<bool>();
      return o;
    });
    out.emplace_back("fixture:T1-identity", [] {
      const Tower t = fixtures::t1();
      Tower y = t;
      y.labels = {"a", "b", "c"};
      y.level_sizes = {3};
      y.level_metrics = {t.top_metric()};
      Outcome o = check_criterion(SpaceMap{t, validate_tower(y), {0, 1, 2}});
      o.pass = o.pass && o.certificate["hypothesis"].get<bool>() && o.certificate["conclusion"].get<bool>();
      return o;
    });
  }
  if (id == "C6") {
    out.emplace_back("fixture:T1-scaled", [] {
      auto [h, g] = bijection(fixtures::t1(), fixtures::t1_scaled(), {0, 1, 2});
      Outcome o = check_homeo(h, g);
      o.pass = o.pass && o.certificate["homeomorphic"].get<bool>();
      return o;
    });
    out.emplace_back("fixture:onto-glued", [] {
      auto [h, g] = bijection(fixtures::two_point(1), fixtures::two_point(0), {0, 1});
      Outcome o = check_homeo(h, g);
      o.pass = o.pass && !o.certificate["homeomorphic"].get<bool>();
      return o;
    });
  }
  if (id == "P-group") out.emplace_back("fixture:G1", [] { return check_group(fixtures::g1(), fixtures::g1_radii()); });
  if (id == "P-box") out.emplace_back("fixture:dyadic", [] { return check_box(fixtures::dyadic_factors(), 3); });
  if (id == "P-lc") out.emplace_back("fixture:T1", [] { return check_lc(fixtures::t1()); });
  return out;
}

/// The seeded instance for one theorem.
inline Outcome seeded_check(const std::string& id, std::uint64_t seed) {
  using namespace detail;
  Rng rng(mix_seed(seed, id));
  const auto pool = Profile{}.value_pool;
  if (id == "T1") return check_base(generate_tower(rng, small_profile(rng, 4, 8)), rng);
  if (id == "T2") {
    Profile p = small_profile(rng, 3, 6);
    const Tower a = generate_tower(rng, p);
    const Tower b = generate_tower(rng, p);
    return check_product(a, b);
  }
  if (id == "T3" || id == "L-mod") {
    const Tower t = generate_tower(rng, small_profile(rng, 3, 6));
    const auto seq = random_sequence(rng, t, pool);
    return id == "T3" ? check_limit(t, seq) : check_valley(t, seq);
  }
  if (id == "L-adeq") {
    const Tower t = generate_tower(rng, small_profile(rng, 3, 6));
    return check_adequate(t, random_targets(rng, t));
  }
  if (id == "L-pseudo") {
    const Tower t = generate_tower(rng, small_profile(rng, 3, 6));
    const Rational r = rng.pick(grid_scale(t, t.top_level()).thresholds) * rng.pick(std::vector<Rational>{1, 5, 20});
    return check_generation(t, r);
  }
  if (id == "T5") {
    const Tower src = generate_tower(rng, small_profile(rng, 3, 6));
    const Tower dst = generate_tower(rng, small_profile(rng, 2, 4));
    return check_criterion(SpaceMap{src, dst, random_map_values(rng, src, dst)});
  }
  if (id == "C6") {
    const Tower a = generate_tower(rng, small_profile(rng, 3, 6));
    std::vector<std::size_t> perm(a.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    if (rng.chance(1, 3)) {
      Tower b = a;
      const Rational f = rng.pick(pool);
      for (auto& d : b.level_metrics) d = d.scaled(f);
      auto [h, g] = bijection(a, validate_tower(std::move(b)), perm);
      return check_homeo(h, g);
    }
    Profile p = small_profile(rng, 3, a.size());
    p.levels = std::min(p.levels, a.size());
    p.min_size = a.size();
    const Tower b = generate_tower(rng, p);
    rng.shuffle(perm);
    auto [h, g] = bijection(a, b, perm);
    return check_homeo(h, g);
  }
  if (id == "P-group") {
    const GroupTower g = random_group_tower(rng, pool);
    return check_group(g, random_radii(rng, g.tower));
  }
  if (id == "P-box") {
    const auto fs = random_factors(rng, pool);
    return check_box(fs, 1 + rng.below(fs.size()));
  }
  if (id == "P-lc") return check_lc(generate_tower(rng, small_profile(rng, 4, 8)));
  throw Error(ErrorKind::UnknownTheoremId, "unknown theorem id '" + id + "'");
}

struct SuiteOptions {
  std::vector<std::string> targets;
  std::uint64_t first_seed = 0;
  std::uint64_t last_seed = 0;  // inclusive
  bool fixtures = true;
  bool timing = false;
};

/// Reports ordered by theorem id (in the canonical order), fixtures first,
/// then seeds ascending.
inline std::vector<Report> run_suite(const SuiteOptions& opt) {
  std::vector<std::string> ids = opt.targets;
  for (const auto& id : ids) theorem_rank(id);
  std::sort(ids.begin(), ids.end(), [](const auto& a, const auto& b) { return theorem_rank(a) < theorem_rank(b); });
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

  std::vector<Report> out;
  auto timed = [&](Report r, const std::function<Outcome()>& fn) {
    const auto start = std::chrono::steady_clock::now();
    r.outcome = fn();
    if (opt.timing)
      r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    out.push_back(std::move(r));
  };
  for (const auto& id : ids) {
    if (opt.fixtures)
      for (const auto& [name, fn] : fixture_checks(id)) timed(Report{id, name, std::nullopt, {}, std::nullopt}, fn);
    for (std::uint64_t s = opt.first_seed; s <= opt.last_seed; ++s)
      timed(Report{id, "seed:" + std::to_string(s), s, {}, std::nullopt}, [&] { return seeded_check(id, s); });
  }
  return out;
}

}  // namespace unilim::verify
