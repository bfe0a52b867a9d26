#pragma once

#include <cstddef>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "unilim/constructions.hpp"
#include "unilim/regularity.hpp"
#include "unilim/relation.hpp"
#include "unilim/tower.hpp"

namespace unilim::io {

using json = nlohmann::json;

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, path + ": " + e.what());
  }
}

inline Rational rational_from_json(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long long>());
  throw Error(ErrorKind::ParseError, "rational must be a \"p/q\" string or an integer, got " + j.dump());
}

inline json rational_to_json(const Rational& r) { return to_string(r); }

template <class T>
T field(const json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) throw Error(ErrorKind::ParseError, std::string("missing field '") + name + "'");
  try {
    return j.at(name).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("field '") + name + "': " + e.what());
  }
}

/// Accepts lower-triangular rows with the diagonal (row i has i+1 entries),
/// strictly lower rows (i entries), or full square rows.
inline Pseudometric metric_from_json(const json& rows, std::size_t size) {
  if (!rows.is_array() || rows.size() != size)
    throw Error(ErrorKind::ParseError, "metric needs " + std::to_string(size) + " rows");
  Pseudometric d(size);
  std::vector<std::tuple<std::size_t, std::size_t, Rational>> upper;
  for (std::size_t i = 0; i < size; ++i) {
    const auto& row = rows[i];
    if (!row.is_array()) throw Error(ErrorKind::ParseError, "metric row must be an array");
    const std::size_t len = row.size();
    if (len != i + 1 && len != i && len != size)
      throw Error(ErrorKind::ParseError, "metric row " + std::to_string(i) + " has " + std::to_string(len) + " entries");
    const std::size_t cols = len == size ? size : len;
    for (std::size_t j = 0; j < cols; ++j) {
      Rational v = rational_from_json(row[j]);
      if (i == j) {
        if (v != 0)
          throw Error(ErrorKind::NotPseudometric, "nonzero diagonal entry", {i});
      } else if (j < i) {
        d.set(i, j, v);
      } else {
        upper.push_back({i, j, std::move(v)});
      }
    }
  }
  for (const auto& [i, j, v] : upper)
    if (d(i, j) != v) throw Error(ErrorKind::NotPseudometric, "matrix is not symmetric", {i, j});
  return d;
}

/// Lower-triangular rows including the diagonal.
inline json metric_to_json(const Pseudometric& d) {
  json rows = json::array();
  for (std::size_t i = 0; i < d.size(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j <= i; ++j) row.push_back(rational_to_json(d(i, j)));
    rows.push_back(row);
  }
  return rows;
}

inline Tower tower_from_json(const json& j) {
  Tower t;
  t.labels = field<std::vector<std::string>>(j, "labels");
  t.level_sizes = field<std::vector<std::size_t>>(j, "level_sizes");
  if (j.contains("strict")) t.strict = field<bool>(j, "strict");
  const json& metrics = j.contains("metrics") ? j.at("metrics") : json();
  if (!metrics.is_array() || metrics.size() != t.level_sizes.size())
    throw Error(ErrorKind::ParseError, "need one metric per level");
  for (std::size_t n = 0; n < t.level_sizes.size(); ++n)
    t.level_metrics.push_back(metric_from_json(metrics[n], t.level_sizes[n]));
  return validate_tower(std::move(t));
}

inline json tower_to_json(const Tower& t) {
  json j;
  j["labels"] = t.labels;
  j["level_sizes"] = t.level_sizes;
  json ms = json::array();
  for (const auto& d : t.level_metrics) ms.push_back(metric_to_json(d));
  j["metrics"] = ms;
  if (t.strict) j["strict"] = true;
  return j;
}

/// `{"metrics": [...]}` or a bare array of level matrices.
inline MonotonePseudometricSequence sequence_from_json(const json& j, const Tower& t) {
  const json& arr = j.is_object() ? j.at("metrics") : j;
  if (!arr.is_array() || arr.size() != t.level_count())
    throw Error(ErrorKind::LevelCountMismatch, "sequence needs one metric per tower level");
  MonotonePseudometricSequence seq;
  for (std::size_t n = 0; n < arr.size(); ++n) seq.metrics.push_back(metric_from_json(arr[n], t.level_size(n)));
  validate_sequence(t, seq);
  return seq;
}

inline json sequence_to_json(const MonotonePseudometricSequence& s) {
  json ms = json::array();
  for (const auto& d : s.metrics) ms.push_back(metric_to_json(d));
  return json{{"metrics", ms}};
}

inline json set_to_json(const ElementSet& s) { return members(s); }

inline json entourage_to_json(const Entourage& u) {
  json pairs = json::array();
  for (auto [x, y] : u.pairs()) pairs.push_back({x, y});
  return json{{"level", u.level()}, {"pairs", pairs}};
}

inline Entourage entourage_from_json(const json& j, const Tower& t) {
  const auto level = field<std::size_t>(j, "level");
  check_level(t, level);
  const auto pairs = field<std::vector<std::pair<std::size_t, std::size_t>>>(j, "pairs");
  return Entourage::from_pairs(level, t.level_size(level), pairs);
}

/// Optional `entourages` object of a tower file: name → entourage.
inline std::map<std::string, Entourage> named_entourages(const json& j, const Tower& t) {
  std::map<std::string, Entourage> out;
  if (!j.contains("entourages")) return out;
  for (const auto& [name, e] : j.at("entourages").items()) out.emplace(name, entourage_from_json(e, t));
  return out;
}

/// A map file is a JSON array of target indices (or an object with `values`).
inline std::vector<std::size_t> map_values_from_json(const json& j) {
  const json& arr = j.is_object() ? j.at("values") : j;
  try {
    return arr.get<std::vector<std::size_t>>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("map must be an array of indices: ") + e.what());
  }
}

/// Tower fields plus `op` (top-level Cayley table) and optional `neg`.
inline GroupTower group_from_json(const json& j) {
  GroupTower g;
  g.tower = tower_from_json(j);
  g.op = field<std::vector<std::vector<std::size_t>>>(j, "op");
  if (j.contains("neg")) g.neg = field<std::vector<std::size_t>>(j, "neg");
  return validate_group_tower(std::move(g));
}

inline json group_to_json(const GroupTower& g) {
  json j = tower_to_json(g.tower);
  j["op"] = g.op;
  j["neg"] = g.neg;
  return j;
}

/// `{"factors": [...]}` or a bare array; each factor has `metric` rows,
/// optional `labels` and `basepoint` (default 0).
inline std::vector<PointedSpace> factors_from_json(const json& j) {
  const json& arr = j.is_object() ? j.at("factors") : j;
  if (!arr.is_array()) throw Error(ErrorKind::ParseError, "factor list must be an array");
  std::vector<PointedSpace> out;
  for (const auto& f : arr) {
    PointedSpace p;
    if (f.contains("labels")) p.labels = field<std::vector<std::string>>(f, "labels");
    const json& rows = f.contains("metric") ? f.at("metric") : json();
    p.metric = metric_from_json(rows, rows.is_array() ? rows.size() : 0);
    if (f.contains("basepoint")) p.basepoint = field<std::size_t>(f, "basepoint");
    validate_pointed(p);
    out.push_back(std::move(p));
  }
  return out;
}

inline json factors_to_json(const std::vector<PointedSpace>& fs) {
  json arr = json::array();
  for (const auto& f : fs) {
    json o{{"metric", metric_to_json(f.metric)}, {"basepoint", f.basepoint}};
    if (!f.labels.empty()) o["labels"] = f.labels;
    arr.push_back(o);
  }
  return json{{"factors", arr}};
}

}  // namespace unilim::io
