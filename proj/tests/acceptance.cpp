// One line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include <unistd.h>

#include "unilim/fixtures.hpp"
#include "unilim/verify.hpp"

using namespace unilim;

namespace {

int failures = 0;

void report(const std::string& name, bool ok, const std::string& detail) {
  std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << ": " << detail << std::endl;
  if (!ok) ++failures;
}

struct SuiteResult {
  std::size_t checks = 0;
  std::size_t failed = 0;
  double seconds = 0;
  std::vector<verify::Report> reports;
  std::string first_failure;
};

SuiteResult suite(const std::string& id, std::uint64_t last_seed, bool fixtures = true) {
  verify::SuiteOptions opt;
  opt.targets = {id};
  opt.first_seed = 0;
  opt.last_seed = last_seed;
  opt.fixtures = fixtures;
  const auto start = std::chrono::steady_clock::now();
  SuiteResult r;
  r.reports = verify::run_suite(opt);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.checks = r.reports.size();
  for (const auto& rep : r.reports)
    if (!rep.outcome.pass) {
      if (!r.failed) r.first_failure = rep.instance + " " + rep.outcome.counterexample.dump();
      ++r.failed;
    }
  return r;
}

std::string summary(const SuiteResult& r) {
  std::ostringstream s;
  s << r.checks << " checks, " << r.failed << " failed, " << r.seconds << " s";
  if (r.failed) s << "; first: " << r.first_failure;
  return s.str();
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

int main() {
  // Oracle equivalence on M1 and 500 seeded towers.
  {
    const auto lim = limit_pseudometric(fixtures::t1(), fixtures::m1()).dist;
    const bool exact = lim(0, 2) == 2 && lim(0, 1) == 1 && lim(1, 2) == 1;
    const auto r = suite("T3", 499);
    report("T3 oracle equivalence", exact && r.failed == 0 && r.checks == 501 && r.seconds < 10,
           std::string("M1 values ") + (exact ? "exact" : "wrong") + "; " + summary(r));
  }
  {
    const auto r = suite("L-mod", 499);
    report("L-mod valley distance", r.failed == 0 && r.checks == 501, summary(r));
  }
  {
    const auto r = suite("L-adeq", 199);
    report("L-adeq adequate sequences", r.failed == 0 && r.checks == 200, summary(r));
  }
  {
    const auto r = suite("L-pseudo", 199);
    report("L-pseudo generation", r.failed == 0 && r.checks == 200, summary(r));
  }
  {
    const auto r = suite("T1", 199);
    report("T1 base balls open", r.failed == 0 && r.checks == 201 && r.seconds < 60, summary(r));
  }
  {
    const auto r = suite("T5", 299);
    std::size_t hyp = 0;
    for (const auto& rep : r.reports)
      if (rep.seed && rep.outcome.certificate.value("hypothesis", false)) ++hyp;
    const auto glued = continuity_criterion(fixtures::glued_map());
    const bool glued_ok = !glued.hypothesis && !glued.conclusion;
    report("T5 criterion soundness", r.failed == 0 && glued_ok && r.checks == 302,
           summary(r) + "; " + std::to_string(hyp) + " seeded maps meet the hypothesis; glued " +
               (glued_ok ? "false/false" : "WRONG"));
  }
  {
    const auto r = suite("T2", 49, false);
    report("T2 multiplicativity", r.failed == 0 && r.checks == 50, summary(r));
  }
  {
    const auto r = suite("P-lc", 499);
    report("P-lc ulim = tlim", r.failed == 0 && r.checks == 501, summary(r));
  }
  {
    const auto r = suite("P-group", 19);
    report("P-group ordered products", r.failed == 0 && r.checks == 21, summary(r));
  }
  {
    const auto r = suite("P-box", 19);
    report("P-box box topology", r.failed == 0 && r.checks == 21, summary(r));
  }
  {
    const auto dir = std::filesystem::temp_directory_path() / ("unilim-accept-" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    const std::string cmd = std::string("\"") + UNILIM_CLI + "\" verify --all --seeds 0..200 --output \"";
    const int s1 = std::system((cmd + (dir / "a.jsonl").string() + "\" 2>/dev/null").c_str());
    const int s2 = std::system((cmd + (dir / "b.jsonl").string() + "\" 2>/dev/null").c_str());
    const std::string a = slurp(dir / "a.jsonl"), b = slurp(dir / "b.jsonl");
    const bool ok = s1 == 0 && s2 == 0 && !a.empty() && a == b;
    std::ostringstream d;
    d << "exit " << s1 << "/" << s2 << ", " << a.size() << " bytes, " << (a == b ? "identical" : "DIFFERENT");
    std::filesystem::remove_all(dir);
    report("Determinism of verify --all", ok, d.str());
  }
  std::cout << (failures ? std::to_string(failures) + " criteria failed" : "all criteria passed") << std::endl;
  return failures ? 1 : 0;
}
