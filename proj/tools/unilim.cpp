// unilim: command-line front end for the tower library.

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "unilim/fixtures.hpp"
#include "unilim/generate.hpp"
#include "unilim/io.hpp"
#include "unilim/unilim.hpp"
#include "unilim/verify.hpp"

using namespace unilim;
using json = nlohmann::json;

namespace {

constexpr int exit_true = 0;
constexpr int exit_false = 1;
constexpr int exit_input = 2;
constexpr int exit_unsound = 3;

void emit(const json& j, const std::string& output) {
  if (output.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(output);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write '" + output + "'");
  out << j.dump(2) << "\n";
}

std::size_t point_index(const Tower& t, const std::string& s) {
  if (auto i = t.index_of(s)) return *i;
  if (!s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); })) {
    const std::size_t i = std::stoul(s);
    if (i < t.size()) return i;
  }
  throw Error(ErrorKind::IndexOutOfRange, "no point named '" + s + "'");
}

json labelled(const Tower& t, const ElementSet& s) {
  json a = json::array();
  for (auto i : members(s)) a.push_back(t.labels[i]);
  return a;
}

std::vector<Rational> parse_rational_list(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(parse_rational(item));
  return out;
}

// --- relation expressions ----------------------------------------------------
//
//   E := NAME | (lt n eps) | (diag n) | (zero n) | (full n)
//      | (sum E E ...) | (mul k E) | (sigma k [E ...] TAIL) | (ball x E)
//   TAIL := repeat | INTEGER (finite sum bound) | E

struct Sexp {
  std::string atom;
  std::vector<Sexp> list;
  bool is_list = false;
  bool bracket = false;
};

class SexpParser {
 public:
  explicit SexpParser(std::string text) : text_(std::move(text)) {}

  Sexp parse() {
    Sexp s = next();
    skip();
    if (pos_ != text_.size()) fail("trailing input");
    return s;
  }

 private:
  [[noreturn]] void fail(const std::string& why) {
    throw Error(ErrorKind::ParseError, "expression: " + why + " at offset " + std::to_string(pos_));
  }
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  Sexp next() {
    skip();
    if (pos_ == text_.size()) fail("unexpected end");
    const char c = text_[pos_];
    if (c == '(' || c == '[') {
      const char close = c == '(' ? ')' : ']';
      ++pos_;
      Sexp s;
      s.is_list = true;
      s.bracket = c == '[';
      for (;;) {
        skip();
        if (pos_ == text_.size()) fail("unclosed list");
        if (text_[pos_] == close) {
          ++pos_;
          return s;
        }
        s.list.push_back(next());
      }
    }
    if (c == ')' || c == ']') fail("unexpected close");
    Sexp s;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) && text_[pos_] != '(' &&
           text_[pos_] != ')' && text_[pos_] != '[' && text_[pos_] != ']')
      s.atom += text_[pos_++];
    return s;
  }

  std::string text_;
  std::size_t pos_ = 0;
};

using Value = std::variant<Entourage, ElementSet>;

class Evaluator {
 public:
  Evaluator(const Tower& t, std::map<std::string, Entourage> names) : t_(t), names_(std::move(names)) {}

  Value eval(const Sexp& s) {
    if (!s.is_list) return entourage_atom(s.atom);
    if (s.list.empty() || s.list[0].is_list) throw Error(ErrorKind::ParseError, "expression: expected an operator");
    const std::string& op = s.list[0].atom;
    auto arity = [&](std::size_t n) {
      if (s.list.size() != n + 1)
        throw Error(ErrorKind::ParseError, "expression: '" + op + "' takes " + std::to_string(n) + " arguments");
    };
    if (op == "lt") {
      arity(2);
      const auto n = level(s.list[1]);
      return Entourage::sublevel(t_, n, parse_rational(s.list[2].atom));
    }
    if (op == "diag" || op == "zero" || op == "full") {
      arity(1);
      const auto n = level(s.list[1]);
      if (op == "diag") return Entourage::diagonal(n, t_.level_size(n));
      if (op == "full") return Entourage::full(n, t_.level_size(n));
      return Entourage::zero_relation(t_, n);
    }
    if (op == "sum") {
      if (s.list.size() < 3) throw Error(ErrorKind::ParseError, "expression: 'sum' takes at least 2 arguments");
      Entourage acc = rel(s.list[1]);
      for (std::size_t i = 2; i < s.list.size(); ++i) acc = compose(acc, rel(s.list[i]));
      return acc;
    }
    if (op == "mul") {
      arity(2);
      return multiple(rel(s.list[2]), number(s.list[1]));
    }
    if (op == "sigma") {
      arity(3);
      EntourageSequence seq;
      seq.start = number(s.list[1]);
      if (!s.list[2].is_list) throw Error(ErrorKind::ParseError, "expression: sigma needs a [U ...] list");
      for (const auto& e : s.list[2].list) seq.entries.push_back(rel(e));
      for (const auto& e : seq.entries) require_reflexive(e);
      const Sexp& tail = s.list[3];
      std::optional<std::size_t> upto;
      if (!tail.is_list && tail.atom == "repeat") {
        seq.tail = RepeatLast{};
      } else if (!tail.is_list && !tail.atom.empty() && std::isdigit(static_cast<unsigned char>(tail.atom[0]))) {
        upto = number(tail);
      } else {
        seq.tail = rel(tail);
      }
      return sigma_sum(seq, upto);
    }
    if (op == "ball") {
      arity(2);
      if (s.list[1].is_list) throw Error(ErrorKind::ParseError, "expression: ball centre must be a point");
      return ball(point_index(t_, s.list[1].atom), rel(s.list[2]));
    }
    throw Error(ErrorKind::ParseError, "expression: unknown operator '" + op + "'");
  }

 private:
  Entourage entourage_atom(const std::string& name) {
    auto it = names_.find(name);
    if (it == names_.end()) throw Error(ErrorKind::ParseError, "expression: unknown entourage '" + name + "'");
    return it->second;
  }
  Entourage rel(const Sexp& s) {
    Value v = eval(s);
    if (auto* e = std::get_if<Entourage>(&v)) return *e;
    throw Error(ErrorKind::ParseError, "expression: expected a relation, got a ball");
  }
  static std::size_t number(const Sexp& s) {
    if (s.is_list || s.atom.empty() ||
        !std::all_of(s.atom.begin(), s.atom.end(), [](unsigned char c) { return std::isdigit(c); }))
      throw Error(ErrorKind::ParseError, "expression: expected a nonnegative integer");
    return std::stoul(s.atom);
  }
  std::size_t level(const Sexp& s) {
    const auto n = number(s);
    check_level(t_, n);
    return n;
  }

  const Tower& t_;
  std::map<std::string, Entourage> names_;
};

// --- subcommands --------------------------------------------------------------

int cmd_rel(const std::string& tower_file, const std::string& expr, const std::string& output) {
  const json doc = io::read_json_file(tower_file);
  const Tower t = io::tower_from_json(doc);
  Evaluator ev(t, io::named_entourages(doc, t));
  const Value v = ev.eval(SexpParser(expr).parse());
  if (const auto* e = std::get_if<Entourage>(&v)) {
    json j = io::entourage_to_json(*e);
    json named = json::array();
    for (auto [x, y] : e->pairs()) named.push_back({t.labels[x], t.labels[y]});
    j["labelled"] = named;
    emit(j, output);
  } else {
    const auto& b = std::get<ElementSet>(v);
    emit(json{{"ball", members(b)}, {"labelled", labelled(t, b)}}, output);
  }
  return exit_true;
}

int cmd_limit(const std::string& tower_file, const std::string& seq_file, const std::vector<std::string>& witness,
              const std::string& output) {
  const Tower t = io::tower_from_json(io::read_json_file(tower_file));
  const auto seq = io::sequence_from_json(io::read_json_file(seq_file), t);
  const auto lim = limit_pseudometric(t, seq);
  json j{{"labels", t.labels}, {"d_inf", io::metric_to_json(lim.dist)}};
  if (witness.size() == 2) {
    const auto x = point_index(t, witness[0]);
    const auto y = point_index(t, witness[1]);
    const Chain c = valley_witness(t, seq, x, y);
    json names = json::array();
    for (auto p : c.points) names.push_back(t.labels[p]);
    j["witness"] = {{"chain", names}, {"indices", c.points}, {"weight", to_string(chain_weight(t, seq, c))}};
  }
  emit(j, output);
  return exit_true;
}

json topology_json(const Tower& t, const TopologyFamily& f) {
  json nb = json::array();
  for (const auto& n : f.minimal_neighborhoods()) nb.push_back(labelled(t, n));
  json j{{"neighbourhoods", nb}};
  if (f.ground_size() <= 16) {
    json opens = json::array();
    for (const auto& o : f.opens()) opens.push_back(labelled(t, o));
    j["opens"] = opens;
  }
  return j;
}

json comparison_json(const Tower& t, const TopologyComparison& c) {
  json j{{"order", order_name(c.order)}};
  if (c.witness) j["witness"] = {{"set", labelled(t, *c.witness)}, {"open_in", c.witness_in_a ? "A" : "B"}};
  return j;
}

int cmd_topo(const std::string& tower_file, const std::string& compare, const std::string& output) {
  const Tower t = io::tower_from_json(io::read_json_file(tower_file));
  const auto u = ulim_topology(t);
  json j{{"ulim", topology_json(t, u)}};
  int code = exit_true;
  if (!compare.empty()) {
    if (compare != "tlim") throw Error(ErrorKind::InvalidArgument, "--compare accepts only 'tlim'");
    const auto tl = tlim_topology(t);
    const auto c = compare_topologies(u, tl);
    j["tlim"] = topology_json(t, tl);
    j["comparison"] = comparison_json(t, c);
    if (c.order != TopologyOrder::Equal) code = exit_false;
  }
  emit(j, output);
  return code;
}

Tower top_as_space(const Tower& t) {
  Tower y;
  y.labels = t.labels;
  y.level_sizes = {t.size()};
  y.level_metrics = {t.top_metric()};
  return validate_tower(std::move(y));
}

json criterion_json(const Tower& src, const CriterionVerdict& v) {
  json levels = json::array();
  for (const auto& lv : v.levels) {
    json l{{"level", lv.level}, {"continuous", !lv.discontinuity}, {"regular", lv.regularity.regular},
           {"subset_closed", lv.regularity.subset_closed}};
    if (lv.discontinuity) l["zero_pair"] = {src.labels[lv.discontinuity->first], src.labels[lv.discontinuity->second]};
    if (const auto& c = lv.regularity.counterexample)
      l["counterexample"] = {{"U", to_string(c->target_eps)}, {"V", to_string(c->source_eps)},
                             {"point", src.labels[c->point]}};
    levels.push_back(l);
  }
  return {{"hypothesis", v.hypothesis}, {"conclusion", v.conclusion}, {"violation", v.violation},
          {"levels", levels}, {"non_closed_levels", v.non_closed_levels}};
}

int cmd_check(const std::string& tower_file, const std::string& map_file, const std::string& target_file,
              const std::string& mode, const std::string& inverse_file, const std::string& output) {
  const Tower src = io::tower_from_json(io::read_json_file(tower_file));
  const Tower dst = target_file.empty() ? top_as_space(src) : io::tower_from_json(io::read_json_file(target_file));
  SpaceMap f{src, dst, io::map_values_from_json(io::read_json_file(map_file))};
  validate_map(f);
  if (!inverse_file.empty()) {
    SpaceMap g{dst, src, io::map_values_from_json(io::read_json_file(inverse_file))};
    const auto v = homeo_criterion(f, g);
    emit({{"criterion", v.criterion_holds}, {"homeomorphic", v.homeomorphic},
          {"forward", criterion_json(src, v.forward)}, {"backward", criterion_json(dst, v.backward)},
          {"transported", order_name(v.transported.order)}, {"consistent", v.consistent}},
         output);
    if (!v.consistent) return exit_unsound;
    return v.homeomorphic ? exit_true : exit_false;
  }
  if (mode == "direct") {
    const auto c = is_continuous(f);
    json j{{"continuous", c.continuous}};
    if (c.witness_open) j["witness_open"] = labelled(dst, *c.witness_open);
    if (c.point) j["point"] = src.labels[*c.point];
    emit(j, output);
    return c.continuous ? exit_true : exit_false;
  }
  const auto v = continuity_criterion(f);
  emit(criterion_json(src, v), output);
  if (v.violation) return exit_unsound;
  return v.hypothesis ? exit_true : exit_false;
}

int cmd_product(const std::string& a_file, const std::string& b_file, bool check, const std::string& output) {
  const Tower a = io::tower_from_json(io::read_json_file(a_file));
  const Tower b = io::tower_from_json(io::read_json_file(b_file));
  if (!check) {
    emit(io::tower_to_json(product_tower(a, b)), output);
    return exit_true;
  }
  const auto v = check_multiplicativity(a, b);
  emit(comparison_json(product_tower(a, b), v.comparison), output);
  return v.equal ? exit_true : exit_false;
}

int cmd_group(const std::string& file, const std::string& radii_text, bool check, const std::string& output) {
  const GroupTower g = io::group_from_json(io::read_json_file(file));
  const auto radii = parse_rational_list(radii_text);
  const auto& t = g.tower;
  if (!check) {
    emit({{"product_ball", labelled(t, ordered_product_ball(g, radii))}}, output);
    return exit_true;
  }
  const auto v = check_group_limit(g, radii);
  json j{{"sum_ball", labelled(t, v.sum_ball)}, {"product_ball", labelled(t, v.product_ball)},
         {"ball_matches", v.ball_matches}, {"commute", v.commute}, {"halving", v.halving_holds},
         {"eq", v.eq_holds}, {"passed", v.passed}};
  if (v.noncommuting) j["noncommuting"] = {v.noncommuting->first, v.noncommuting->second};
  if (v.eq_failure) j["eq_failure"] = *v.eq_failure;
  emit(j, output);
  return v.passed ? exit_true : exit_false;
}

int cmd_box(const std::string& file, std::size_t depth, bool check, const std::string& output) {
  const auto factors = io::factors_from_json(io::read_json_file(file));
  const Tower t = box_tower(factors, depth);
  if (!check) {
    emit(io::tower_to_json(t), output);
    return exit_true;
  }
  const auto v = check_box_limit(factors, depth);
  emit(comparison_json(t, v.comparison), output);
  return v.equal ? exit_true : exit_false;
}

std::uint64_t default_seed() {
  if (const char* s = std::getenv("UNILIM_SEED")) {
    try {
      return std::stoull(s);
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidArgument, "UNILIM_SEED must be a nonnegative integer");
    }
  }
  return 0;
}

int cmd_gen(std::optional<std::uint64_t> seed, std::size_t levels, std::size_t max_size, const std::string& pool,
            const std::string& output) {
  Profile p;
  p.levels = levels;
  p.max_size = max_size;
  if (!pool.empty()) p.value_pool = parse_rational_list(pool);
  emit(io::tower_to_json(generate_tower(seed ? *seed : default_seed(), p)), output);
  return exit_true;
}

std::pair<std::uint64_t, std::uint64_t> parse_seed_range(const std::string& text) {
  try {
    const auto dots = text.find("..");
    if (dots == std::string::npos) {
      const auto s = std::stoull(text);
      return {s, s};
    }
    return {std::stoull(text.substr(0, dots)), std::stoull(text.substr(dots + 2))};
  } catch (const std::exception&) {
    throw Error(ErrorKind::InvalidArgument, "seed range must look like A..B");
  }
}

int cmd_verify(bool all, const std::vector<std::string>& targets, const std::string& seeds, bool no_fixtures,
               bool timing, const std::string& output) {
  verify::SuiteOptions opt;
  if (all) {
    opt.targets = verify::theorem_ids();
  } else {
    // `--targets ""` is an explicit empty list.
    for (const auto& t : targets)
      if (!t.empty()) opt.targets.push_back(t);
  }
  if (seeds.empty()) {
    opt.first_seed = opt.last_seed = default_seed();
  } else {
    std::tie(opt.first_seed, opt.last_seed) = parse_seed_range(seeds);
  }
  opt.fixtures = !no_fixtures;
  opt.timing = timing;
  const auto reports = verify::run_suite(opt);

  std::ofstream file;
  if (!output.empty()) {
    file.open(output);
    if (!file) throw Error(ErrorKind::InvalidArgument, "cannot write '" + output + "'");
  }
  std::ostream& out = output.empty() ? std::cout : file;
  std::size_t failed = 0;
  for (const auto& r : reports) {
    out << r.to_json().dump() << "\n";
    if (!r.outcome.pass) ++failed;
  }
  std::cerr << reports.size() << " checks, " << failed << " failed\n";
  return failed ? exit_unsound : exit_true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite towers of pseudometric spaces and their uniform direct limits"};
  app.require_subcommand(1);
  std::string output;
  int code = exit_true;

  auto* rel = app.add_subcommand("rel", "Evaluate an entourage expression");
  std::string rel_tower, rel_expr;
  rel->add_option("--tower", rel_tower, "Tower file (may carry named entourages)")->required();
  rel->add_option("--expr", rel_expr, "Expression, e.g. \"(ball a (sum U V))\"")->required();
  rel->add_option("--output", output);
  rel->callback([&] { code = cmd_rel(rel_tower, rel_expr, output); });

  auto* lim = app.add_subcommand("limit", "Limit pseudometric of a monotone sequence");
  std::string lim_tower, lim_seq;
  std::vector<std::string> lim_witness;
  lim->add_option("--tower", lim_tower)->required();
  lim->add_option("--seq", lim_seq)->required();
  lim->add_option("--witness", lim_witness, "Print an optimal valley chain between two points")->expected(2);
  lim->add_option("--output", output);
  lim->callback([&] { code = cmd_limit(lim_tower, lim_seq, lim_witness, output); });

  auto* topo = app.add_subcommand("topo", "Direct-limit topology of a tower");
  std::string topo_tower, topo_compare;
  topo->add_option("--tower", topo_tower)->required();
  topo->add_option("--compare", topo_compare, "Compare with another topology (tlim)");
  topo->add_option("--output", output);
  topo->callback([&] { code = cmd_topo(topo_tower, topo_compare, output); });

  auto* check = app.add_subcommand("check", "Continuity criterion for a map");
  std::string chk_tower, chk_map, chk_target, chk_inv;
  bool chk_criterion = false, chk_direct = false;
  check->add_option("--tower", chk_tower, "Source tower")->required();
  check->add_option("--map", chk_map, "JSON array of target indices")->required();
  check->add_option("--target", chk_target, "Target tower (default: the source's top level)");
  auto* crit_flag = check->add_flag("--criterion", chk_criterion, "Evaluate the regularity hypothesis (default)");
  auto* direct_flag = check->add_flag("--direct", chk_direct, "Check preimages of opens directly");
  auto* homeo_opt = check->add_option("--homeo", chk_inv, "Inverse map file; checks a homeomorphism");
  crit_flag->excludes(direct_flag)->excludes(homeo_opt);
  direct_flag->excludes(homeo_opt);
  check->add_option("--output", output);
  check->callback([&] {
    code = cmd_check(chk_tower, chk_map, chk_target, chk_direct ? "direct" : "criterion", chk_inv, output);
  });

  auto* prod = app.add_subcommand("product", "Product of two towers");
  std::string prod_a, prod_b;
  bool prod_check = false;
  prod->add_option("A", prod_a)->required();
  prod->add_option("B", prod_b)->required();
  prod->add_flag("--check", prod_check, "Compare with the product topology");
  prod->add_option("--output", output);
  prod->callback([&] { code = cmd_product(prod_a, prod_b, prod_check, output); });

  auto* grp = app.add_subcommand("group", "Ordered product balls in a group tower");
  std::string grp_file, grp_radii;
  bool grp_check = false;
  grp->add_option("G", grp_file)->required();
  grp->add_option("--radii", grp_radii, "Comma-separated radii, one per level")->required();
  grp->add_flag("--check", grp_check, "Run the sum/product, commutation and inclusion checks");
  grp->add_option("--output", output);
  grp->callback([&] { code = cmd_group(grp_file, grp_radii, grp_check, output); });

  auto* box = app.add_subcommand("box", "Small box product of pointed spaces");
  std::string box_file;
  std::size_t box_depth = 1;
  bool box_check = false;
  box->add_option("FACTORS", box_file)->required();
  box->add_option("--depth", box_depth)->required();
  box->add_flag("--check", box_check, "Compare with the box topology");
  box->add_option("--output", output);
  box->callback([&] { code = cmd_box(box_file, box_depth, box_check, output); });

  auto* gen = app.add_subcommand("gen", "Generate a random tower");
  std::optional<std::uint64_t> gen_seed;
  std::size_t gen_levels = 3, gen_max = 6;
  std::string gen_pool;
  gen->add_option("--seed", gen_seed, "Seed (default: UNILIM_SEED or 0)");
  gen->add_option("--levels", gen_levels);
  gen->add_option("--max-size", gen_max);
  gen->add_option("--pool", gen_pool, "Comma-separated distance values");
  gen->add_option("--output", output);
  gen->callback([&] { code = cmd_gen(gen_seed, gen_levels, gen_max, gen_pool, output); });

  auto* ver = app.add_subcommand("verify", "Run the theorem suite");
  bool ver_all = false, ver_no_fixtures = false, ver_timing = false;
  std::vector<std::string> ver_targets;
  std::string ver_seeds;
  auto* all_flag = ver->add_flag("--all", ver_all, "Every theorem id");
  ver->add_option("--targets", ver_targets, "Theorem ids")->delimiter(',')->expected(0, -1)->excludes(all_flag);
  ver->add_option("--seeds", ver_seeds, "Seed range A..B (inclusive)");
  ver->add_flag("--no-fixtures", ver_no_fixtures, "Skip the fixture instances");
  ver->add_flag("--timing", ver_timing, "Add wall time to each report line");
  ver->add_option("--output", output, "Write JSON lines here");
  ver->callback([&] { code = cmd_verify(ver_all, ver_targets, ver_seeds, ver_no_fixtures, ver_timing, output); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_input;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_input;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: ParseError: " << e.what() << "\n";
    return exit_input;
  }
  return code;
}
