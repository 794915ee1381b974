// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "cli.hpp"
#include "hsamm/coverage.hpp"
#include "hsamm/explorer.hpp"
#include "hsamm/json_io.hpp"
#include "hsamm/testgen.hpp"
#include "oracle/reference_model.hpp"
#include "random_tests.hpp"

namespace fs = std::filesystem;
using namespace hsamm;

namespace {

std::string Path(const std::string& name) {
  return std::string(HSAMM_CORPUS_DIR) + "/" + name + ".litmus";
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

LitmusTest Load(const std::string& name) { return Parse(Slurp(Path(name))); }

struct Cli {
  int code;
  std::string out, err;
};

Cli Run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::Run(args, out, err);
  return {code, out.str(), err.str()};
}

struct Line {
  std::string id;
  bool pass;
  std::string detail;
};

// Pairs of (M2, M3) combos in a set of oracle register maps.
std::set<std::pair<std::size_t, std::size_t>> OraclePairs(
    const LitmusTest& t, const std::set<oracle::Registers>& maps) {
  std::set<std::pair<std::size_t, std::size_t>> out;
  auto combo = [&](const std::map<std::string, std::int64_t>& row) {
    RegCombo c;
    for (const auto& r : t.config.registers) c.push_back(row.at(r));
    return ComboIndex(c, t.config.values);
  };
  for (const auto& m : maps) out.emplace(combo(m.at("M2")), combo(m.at("M3")));
  return out;
}

std::string PointList(const std::vector<CoveragePoint>& pts) {
  std::string s;
  for (const auto& p : pts) {
    s += "(";
    for (std::size_t k = 0; k < p.size(); ++k) s += (k ? "," : "") + ComboName(p[k]);
    s += ")";
  }
  return s.empty() ? "none" : s;
}

Line Criterion1() {
  auto start = std::chrono::steady_clock::now();
  auto r = Run({"check", Path("iriw-fence"), "--json"});
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  auto j = Json::parse(r.out);
  bool ok = r.code == 0 && j["verdict"] == "Holds" && secs < 10.0;
  std::ostringstream d;
  d << "verdict " << j["verdict"].get<std::string>() << ", exit " << r.code << ", "
    << j["stateCount"] << " states, " << secs << " s";
  return {"1 iriw-fence forbidden outcome unreachable", ok, d.str()};
}

Line Criterion2() {
  auto r = Run({"cover", Path("iriw-fence"), "--watch", "M2,M3", "--json"});
  auto j = Json::parse(r.out);
  bool ok = r.code == 0 && j["covered"].size() == 15 && j["total"] == 16 &&
            j["uncovered"] == Json::parse(R"([["C2","C2"]])");
  std::ostringstream d;
  d << j["covered"].size() << "/" << j["total"] << " covered, uncovered "
    << j["uncovered"].dump();
  return {"2 iriw-fence coverage 15/16 missing (C2,C2)", ok, d.str()};
}

Line Criterion3() {
  auto t = Load("iriw-nofence");
  auto check = Run({"check", Path("iriw-nofence"), "--json"});
  auto cover = Run({"cover", Path("iriw-nofence"), "--watch", "M2,M3", "--json"});
  auto cj = Json::parse(cover.out);
  auto o = oracle::Enumerate(t.config);
  auto pairs = OraclePairs(t, o.trigger_maps);
  bool ok = check.code == 1 && Json::parse(check.out)["verdict"] == "Violated" &&
            cj["covered"].size() == 16 && pairs.size() == 16;
  std::ostringstream d;
  d << "verdict " << Json::parse(check.out)["verdict"].get<std::string>() << ", explorer "
    << cj["covered"].size() << "/16, oracle " << pairs.size() << "/16";
  return {"3 no-fence variant reachable with 16/16 coverage", ok, d.str()};
}

Line Criterion4() {
  auto t = Load("iriw-atomic");
  auto fence = Load("iriw-fence");
  auto v = CheckOutcome(t);
  std::vector<MasterIndex> w = {*t.config.FindMaster("M2"), *t.config.FindMaster("M3")};
  auto report = Cover(t, w);
  auto fence_report = Cover(fence, w);
  auto o = oracle::Enumerate(t.config);
  auto oracle_pairs = OraclePairs(t, o.trigger_maps);
  std::set<std::pair<std::size_t, std::size_t>> ours;
  for (const auto& p : report.covered) ours.emplace(p[0], p[1]);
  bool verdict_ok = v.kind == Verdict::Kind::kHolds;
  bool oracle_ok = ours == oracle_pairs;
  bool same_as_fence = report.covered == fence_report.covered;
  std::ostringstream d;
  d << "verdict " << VerdictName(v.kind) << ", coverage " << report.covered.size()
    << "/16 (oracle " << oracle_pairs.size() << "/16), fence variant "
    << fence_report.covered.size() << "/16";
  if (!same_as_fence) {
    auto four = Load("iriw4-atomic");
    auto four_report = Cover(four, {*four.config.FindMaster("M2"),
                                    *four.config.FindMaster("M3")});
    d << "; coverage differs from the fence variant, uncovered "
      << PointList(report.Uncovered())
      << " (release orders M1's two stores for every observer; with one "
         "writer per address iriw4-atomic covers "
      << four_report.covered.size() << "/16, uncovered "
      << PointList(four_report.Uncovered()) << ")";
  }
  return {"4 atomic variant forbidden outcome unreachable", verdict_ok && oracle_ok,
          d.str()};
}

Line Criterion5() {
  auto dir = fs::temp_directory_path() / "hsamm-acceptance-gen";
  fs::remove_all(dir);
  fs::create_directories(dir);
  int generated = 0, verified = 0;
  std::size_t max_issues = 0, max_all_issues = 0, c0c0_issues = 0;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      if (a == 2 && b == 2) continue;
      std::string goal = "M2:C" + std::to_string(a) + ",M3:C" + std::to_string(b);
      fs::path out = dir / ("C" + std::to_string(a) + "C" + std::to_string(b) + ".json");
      auto r = Run({"gen", Path("iriw-fence"), "--target", goal, "--out", out.string()});
      if (r.code != 0) continue;
      ++generated;
      auto tc = TestCaseFromJson(Json::parse(Slurp(out)));
      if (VerifyTest(tc).ok) ++verified;
      std::size_t issues = 0, all_issues = 0;
      for (const auto& e : tc.trace) {
        if (!IsIssueEvent(e.kind)) continue;
        ++all_issues;
        if (e.kind != EventKind::kIssueFence) ++issues;
      }
      max_issues = std::max(max_issues, issues);
      max_all_issues = std::max(max_all_issues, all_issues);
      if (a == 0 && b == 0) c0c0_issues = all_issues;
    }
  }
  auto c2 = Run({"gen", Path("iriw-fence"), "--target", "M2:C2,M3:C2"});
  bool ok = generated == 15 && verified == 15 && c2.code == 4 &&
            max_issues <= 6 && c0c0_issues == 6;
  std::ostringstream d;
  d << generated << "/15 generated, " << verified << "/15 verified, (C2,C2) exit "
    << c2.code << ", (C0,C0) trace has " << c0c0_issues
    << " issue events, at most " << max_issues
    << " access issue events per trace (" << max_all_issues
    << " counting fence issues)";
  return {"5 test generation for the 15 covered pairs", ok, d.str()};
}

Line Criterion6() {
  auto three = fs::temp_directory_path() / "hsamm-acceptance-suite3";
  auto one = fs::temp_directory_path() / "hsamm-acceptance-suite1";
  for (const auto& d : {three, one}) {
    fs::remove_all(d);
    fs::create_directories(d);
  }
  for (const char* n : {"iriw-fence", "iriw-nofence", "iriw-atomic"}) {
    fs::copy_file(Path(n), three / (std::string(n) + ".litmus"));
  }
  fs::copy_file(Path("iriw-fence"), one / "iriw-fence.litmus");
  auto j3 = Json::parse(Run({"suite", three.string(), "--json"}).out);
  auto j1 = Json::parse(Run({"suite", one.string(), "--json"}).out);
  bool ok = j3["eventCoverage"]["verdict"] == "FULL" &&
            j1["eventCoverage"]["verdict"] == "NOT-FULL";
  std::ostringstream d;
  d << "three variants " << j3["eventCoverage"]["verdict"].get<std::string>()
    << ", iriw-fence alone " << j1["eventCoverage"]["verdict"].get<std::string>()
    << " missing " << j1["eventCoverage"]["uncovered"].dump();
  return {"6 suite event coverage", ok, d.str()};
}

Line Criterion7a() {
  const auto tests = RandomTests(20240601, 60);
  std::mt19937_64 rng(11);
  std::size_t traces = 0, violations = 0, co_bad = 0;
  for (const auto& t : tests) {
    const SystemConfig& c = t.config;
    Kernel k(c);
    for (int run = 0; run < 200; ++run, ++traces) {
      MachineState s = k.Init();
      std::vector<Value> lov = s.lov;
      while (true) {
        auto enabled = k.Enabled(s);
        if (enabled.empty()) break;
        const auto& ev = enabled[rng() % enabled.size()];
        s = k.Fire(s, ev);
        if (ev.s && !ev.l && ev.m && !IsIssueEvent(ev.kind) && IsStore(c.instr(*ev.s).kind)) {
          lov[*ev.m * c.addresses.size() + *c.instr(*ev.s).address] = *c.instr(*ev.s).value;
        }
        if (s.lov != lov) ++co_bad;
        violations += k.CheckInvariants(s).size();
      }
    }
  }
  std::ostringstream d;
  d << traces << " traces over " << tests.size() << " configs, " << violations
    << " invariant violations, " << co_bad << " co mismatches";
  return {"7a invariant preservation on random traces",
          traces >= 10000 && tests.size() >= 50 && violations == 0 && co_bad == 0,
          d.str()};
}

std::vector<std::string> CorpusNames() {
  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(HSAMM_CORPUS_DIR)) {
    if (e.path().extension() == ".litmus") names.push_back(e.path().stem().string());
  }
  std::sort(names.begin(), names.end());
  return names;
}

Line Criterion7b() {
  int checked = 0, agree = 0;
  for (const auto& name : CorpusNames()) {
    auto t = Load(name);
    if (t.config.num_instructions() > 8) continue;
    ++checked;
    auto r = Explore(t.config);
    auto o = oracle::Enumerate(t.config);
    std::set<oracle::Registers> ours;
    for (const auto& rf : r.final_register_maps) {
      auto named = NamedRegisters(t.config, rf);
      ours.insert(oracle::Registers(named.begin(), named.end()));
    }
    if (ours == o.final_maps) ++agree;
  }
  std::ostringstream d;
  d << agree << "/" << checked << " corpus tests agree with the reference enumerator";
  return {"7b oracle equivalence", checked > 0 && agree == checked, d.str()};
}

Line Criterion7c() {
  int checked = 0, same = 0;
  for (const auto& name : CorpusNames()) {
    auto t = Load(name);
    auto w = LoadingMasters(t.config);
    std::vector<std::pair<std::uint64_t, std::set<CoveragePoint>>> runs;
    for (unsigned workers : {1u, 2u, 8u}) {
      ExploreOptions opts;
      opts.workers = workers;
      opts.watched_loads = t.watched_loads;
      auto r = Explore(t.config, opts);
      runs.emplace_back(r.state_count, Cover(t, r, w).covered);
    }
    ++checked;
    if (runs[0] == runs[1] && runs[0] == runs[2]) ++same;
  }
  std::ostringstream d;
  d << same << "/" << checked << " corpus tests identical across 1/2/8 workers";
  return {"7c exploration determinism", same == checked, d.str()};
}

Line Criterion7d() {
  int checked = 0, same = 0;
  for (const auto& name : CorpusNames()) {
    auto t = Load(name);
    ++checked;
    if (Parse(Format(t)) == t) ++same;
  }
  std::ostringstream d;
  d << same << "/" << checked << " corpus files round-trip";
  return {"7d parser round-trip", same == checked, d.str()};
}

}  // namespace

int main() {
  bool all = true;
  for (auto criterion : {Criterion1, Criterion2, Criterion3, Criterion4, Criterion5,
                         Criterion6, Criterion7a, Criterion7b, Criterion7c,
                         Criterion7d}) {
    Line l;
    try {
      l = criterion();
    } catch (const std::exception& e) {
      l = {"?", false, std::string("exception: ") + e.what()};
    }
    all &= l.pass;
    std::cout << (l.pass ? "PASS" : "FAIL") << "  criterion " << l.id << ": "
              << l.detail << "\n";
  }
  return all ? 0 : 1;
}
