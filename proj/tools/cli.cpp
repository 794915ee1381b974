#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hsamm/coverage.hpp"
#include "hsamm/errors.hpp"
#include "hsamm/explorer.hpp"
#include "hsamm/json_io.hpp"
#include "hsamm/litmus.hpp"
#include "hsamm/testgen.hpp"

namespace hsamm::cli {

namespace fs = std::filesystem;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path.string());
  out << text;
}

std::vector<std::string> SplitList(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string part; std::getline(ss, part, ',');) {
    part.erase(0, part.find_first_not_of(" \t"));
    part.erase(part.find_last_not_of(" \t") + 1);
    if (!part.empty()) out.push_back(part);
  }
  return out;
}

struct Style {
  bool color = false;
  std::string Paint(const std::string& s, const char* code) const {
    return color ? std::string("\033[") + code + "m" + s + "\033[0m" : s;
  }
  std::string Good(const std::string& s) const { return Paint(s, "32"); }
  std::string Bad(const std::string& s) const { return Paint(s, "31"); }
};

void PrintTrace(std::ostream& out, const SystemConfig& c, const Trace& t) {
  for (std::size_t i = 0; i < t.size(); ++i) {
    out << "    " << (i + 1) << ". " << Describe(c, t[i]) << "\n";
  }
}

std::string ComboText(const SystemConfig& c, const RegCombo& combo) {
  std::string s = "{";
  for (std::size_t r = 0; r < combo.size(); ++r) {
    if (r) s += ", ";
    s += c.registers[r] + "=" + std::to_string(combo[r]);
  }
  return s + "}";
}

std::string PointText(const CoveragePoint& p) {
  std::string s = "(";
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (k) s += ", ";
    s += ComboName(p[k]);
  }
  return s + ")";
}

struct Common {
  bool json = false;
  std::uint64_t max_states = 10'000'000;
  unsigned workers = 1;
};

ExploreOptions Options(const Common& c) {
  ExploreOptions o;
  o.max_states = c.max_states;
  o.workers = c.workers;
  return o;
}

int Check(const std::string& file, const Common& common,
          const std::string& trace_out, std::ostream& out, const Style& st) {
  LitmusTest test = Parse(ReadFile(file));
  Verdict v = CheckOutcome(test, Options(common));
  if (v.witness && !trace_out.empty()) {
    WriteFile(trace_out,
              TraceToJson(test.config, v.witness->trace).dump(2) + "\n");
  }
  const bool bad = v.kind == Verdict::Kind::kViolated ||
                   v.kind == Verdict::Kind::kUnreachable;
  if (common.json) {
    out << VerdictToJson(test, v).dump(2) << "\n";
  } else {
    std::string name(VerdictName(v.kind));
    out << test.name << ": " << (bad ? st.Bad(name) : st.Good(name)) << " ("
        << ModeName(test.mode) << " " << FormatOutcome(test.outcome) << ")\n";
    out << "  states: " << v.state_count
        << "  transitions: " << v.transition_count << "\n";
    if (v.witness) {
      out << "  " << (v.kind == Verdict::Kind::kViolated ? "counterexample"
                                                         : "witness")
          << " (" << v.witness->trace.size() << " steps):\n";
      PrintTrace(out, test.config, v.witness->trace);
    }
  }
  return bad ? kViolated : kOk;
}

int Cover(const std::string& file, const Common& common,
          const std::string& watch, std::ostream& out) {
  LitmusTest test = Parse(ReadFile(file));
  std::vector<MasterIndex> watched;
  if (watch.empty()) {
    watched = LoadingMasters(test.config);
  } else {
    for (const auto& name : SplitList(watch)) {
      auto m = test.config.FindMaster(name);
      if (!m) throw UsageError("--watch: unknown master " + name);
      watched.push_back(*m);
    }
  }
  CoverageReport report = hsamm::Cover(test, watched, Options(common));
  if (common.json) {
    out << CoverageToJson(test, report).dump(2) << "\n";
    return kOk;
  }
  out << test.name << ": " << report.covered.size() << "/" << report.total
      << " register-combination points covered (watched";
  for (auto m : watched) out << " " << test.config.masters[m];
  out << ")\n";
  for (std::size_t i = 0; i < report.combos.size(); ++i) {
    out << "  " << ComboName(i) << " = "
        << ComboText(test.config, report.combos[i]) << "\n";
  }
  out << "  covered:";
  for (const auto& p : report.covered) out << " " << PointText(p);
  out << "\n  uncovered:";
  for (const auto& p : report.Uncovered()) out << " " << PointText(p);
  out << "\n";
  return kOk;
}

int Gen(const std::string& file, const Common& common,
        const std::string& target_text, const std::string& events, bool only,
        const std::string& out_path, std::ostream& out) {
  LitmusTest test = Parse(ReadFile(file));
  TestTarget target = ParseTarget(target_text, test);
  try {
    target.must_cover = ParseEventList(events);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--cover-events: ") + e.what());
  }
  target.only_these = only;
  TestCase tc = FindTrace(test, target, common.max_states);
  const std::string doc = TestCaseToJson(tc).dump(2) + "\n";
  if (out_path.empty()) {
    out << doc;
    return kOk;
  }
  WriteFile(out_path, doc);
  if (common.json) {
    Json j;
    j["file"] = out_path;
    j["steps"] = tc.trace.size();
    out << j.dump(2) << "\n";
  } else {
    std::size_t issues = std::count_if(
        tc.trace.begin(), tc.trace.end(),
        [](const EventDescriptor& e) { return IsIssueEvent(e.kind); });
    out << "wrote " << out_path << " (" << tc.trace.size() << " steps, "
        << issues << " issue events)\n";
  }
  return kOk;
}

struct FuzzFlags {
  std::size_t count = 0;
  std::uint64_t seed = 0;
  std::string out_dir;
  std::optional<std::size_t> min_len, max_len;
  std::string kinds;
  std::string policy = "none";
};

int Fuzz(const std::string& file, const Common& common, const FuzzFlags& f,
         std::ostream& out) {
  LitmusTest seed_test = Parse(ReadFile(file));
  Bounds b;
  std::size_t longest = 0;
  for (const auto& p : seed_test.config.programs) {
    longest = std::max(longest, p.size());
  }
  b.max_length = f.max_len.value_or(longest);
  b.min_length = f.min_len.value_or(std::min<std::size_t>(1, b.max_length));
  for (const auto& k : SplitList(f.kinds)) {
    auto kind = KindFromMnemonic(k);
    if (!kind) throw UsageError("--kinds: unknown instruction " + k);
    b.kinds.push_back(*kind);
  }
  auto policy = PolicyFromName(f.policy);
  if (!policy) throw UsageError("--policy: unknown policy " + f.policy);
  b.policy = *policy;
  ProgramClass cls = Generalize(seed_test, b);
  Suite suite = GenerateSuite(cls, f.count, f.seed, common.max_states);

  fs::create_directories(f.out_dir);
  for (const auto& tc : suite.cases) {
    WriteFile(fs::path(f.out_dir) / (tc.name + ".json"),
              TestCaseToJson(tc).dump(2) + "\n");
  }
  Json manifest = ManifestToJson(cls, f.count, f.seed, suite);
  WriteFile(fs::path(f.out_dir) / "manifest.json", manifest.dump(2) + "\n");
  std::size_t skipped = 0;
  for (const auto& s : suite.samples) skipped += s.skipped;
  if (common.json) {
    out << manifest.dump(2) << "\n";
  } else {
    out << "wrote " << suite.cases.size() << " tests to " << f.out_dir;
    if (skipped) out << " (" << skipped << " samples skipped)";
    out << "\n";
    for (const auto& s : suite.samples) {
      if (s.skipped) out << "  skipped " << s.name << ": " << s.reason << "\n";
    }
  }
  return kOk;
}

// `current` names the file being read, for diagnostics.
int SuiteCmd(const std::string& dir, const Common& common, std::ostream& out,
             const Style& st, std::string& current) {
  if (!fs::is_directory(dir)) throw UsageError(dir + " is not a directory");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    const auto ext = e.path().extension();
    if (e.is_regular_file() && (ext == ".litmus" || ext == ".json")) {
      files.push_back(e.path());
    }
  }
  std::sort(files.begin(), files.end());

  std::vector<std::string> names;
  std::vector<EventSet> sets;
  Json results = Json::array();
  bool failed = false;
  for (const auto& path : files) {
    Json entry;
    entry["file"] = path.filename().string();
    current = path.string();
    EventSet fired{};
    if (path.extension() == ".litmus") {
      LitmusTest test = Parse(ReadFile(path.string()));
      ExploreOptions opts = Options(common);
      const std::size_t regs = test.config.registers.size();
      const bool want = test.mode != OutcomeMode::kRequired;
      opts.goal = [&](const MachineState& s) {
        return Triggered(test, s) && test.outcome.Evaluate(s.rf, regs) == want;
      };
      ExplorationResult r = Explore(test.config, opts);
      fired = FiredEvents(r);
      Verdict::Kind kind;
      if (test.mode == OutcomeMode::kAllowed) {
        kind = r.violation ? Verdict::Kind::kReachable
                           : Verdict::Kind::kUnreachable;
      } else {
        kind = r.violation ? Verdict::Kind::kViolated : Verdict::Kind::kHolds;
      }
      const bool bad = kind == Verdict::Kind::kViolated ||
                       kind == Verdict::Kind::kUnreachable;
      entry["test"] = test.name;
      entry["verdict"] = std::string(VerdictName(kind));
      entry["stateCount"] = r.state_count;
      names.push_back(test.name);
      if (!common.json) {
        std::string v(VerdictName(kind));
        out << path.filename().string() << ": "
            << (bad ? st.Paint(v, "33") : st.Good(v)) << " (" << r.state_count
            << " states)\n";
      }
    } else {
      Json doc;
      try {
        doc = Json::parse(ReadFile(path.string()));
      } catch (const Json::parse_error& e) {
        throw UsageError(path.string() + ": " + e.what());
      }
      if (!doc.is_object() || !doc.contains("steps")) continue;  // manifests
      TestCase tc;
      VerifyResult vr;
      try {
        tc = TestCaseFromJson(doc);
        vr = VerifyTest(tc);
      } catch (const std::exception& e) {
        vr.ok = false;
        vr.message = e.what();
      }
      for (const auto& ev : tc.trace) {
        fired[static_cast<std::size_t>(ev.kind)] = true;
      }
      failed |= !vr.ok;
      entry["test"] = tc.name;
      entry["verdict"] = vr.ok ? "pass" : "fail";
      if (!vr.ok) entry["message"] = vr.message;
      names.push_back(tc.name);
      if (!common.json) {
        out << path.filename().string() << ": "
            << (vr.ok ? st.Good("pass") : st.Bad("fail"));
        if (!vr.ok) out << " (" << vr.message << ")";
        out << "\n";
      }
    }
    sets.push_back(fired);
    results.push_back(std::move(entry));
  }
  EventCoverageReport cov = EventCoverage(sets);
  if (common.json) {
    Json j;
    j["results"] = std::move(results);
    j["eventCoverage"] = EventCoverageToJson(names, cov);
    out << j.dump(2) << "\n";
  } else {
    out << "event coverage: "
        << (cov.full ? st.Good("FULL") : st.Paint("NOT-FULL", "33"));
    if (!cov.full) {
      out << " (uncovered:";
      for (auto k : cov.uncovered) out << " " << EventName(k);
      out << ")";
    }
    out << "\n";
  }
  return failed ? kViolated : kOk;
}

int Fmt(const std::string& file, bool check, std::ostream& out) {
  const std::string src = ReadFile(file);
  const std::string canonical = Format(Parse(src));
  if (check) {
    if (src == canonical) return kOk;
    out << file << " is not in canonical form\n";
    return kViolated;
  }
  out << canonical;
  return kOk;
}

void Diagnose(std::ostream& err, const std::string& file,
              const ValidationError& e) {
  for (const auto& d : e.diagnostics()) {
    err << file << ":" << d.line << ":" << d.column << ": " << d.message
        << "\n";
  }
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err, bool color) {
  CLI::App app{"HSA weak-memory model checker", "hsamm"};
  app.require_subcommand(1);
  Common common;
  Style st{color};
  auto add_common = [&](CLI::App* sub, bool explore) {
    sub->add_flag("--json", common.json, "Print one JSON document");
    if (explore) {
      sub->add_option("--max-states", common.max_states,
                      "Abort beyond this many states")
          ->check(CLI::PositiveNumber);
      sub->add_option("--workers", common.workers, "Exploration threads")
          ->check(CLI::Range(1u, 256u));
    }
  };

  std::string file;
  auto* check = app.add_subcommand("check", "Verify a litmus outcome");
  std::string trace_out;
  check->add_option("file", file, "Litmus file")->required();
  check->add_option("--trace-out", trace_out, "Write the counterexample trace");
  add_common(check, true);

  auto* cover = app.add_subcommand("cover", "Register-combination coverage");
  std::string watch;
  cover->add_option("file", file, "Litmus file")->required();
  cover->add_option("--watch", watch, "Watched masters, e.g. M2,M3");
  add_common(cover, true);

  auto* gen = app.add_subcommand("gen", "Generate a test reaching a target");
  std::string target, events, out_path;
  bool only = false;
  gen->add_option("file", file, "Litmus file")->required();
  gen->add_option("--target", target,
                  "Coverage point (M2:C0,M3:C0) or outcome expression")
      ->required();
  gen->add_option("--cover-events", events, "Events the trace must fire");
  gen->add_flag("--only", only, "Fire no other observe events");
  gen->add_option("--out", out_path, "Output test document");
  add_common(gen, true);

  auto* fuzz = app.add_subcommand("fuzz", "Generate platform tests");
  FuzzFlags ff;
  fuzz->add_option("file", file, "Seed litmus file")->required();
  fuzz->add_option("--count", ff.count, "Number of samples")->required();
  fuzz->add_option("--seed", ff.seed, "Random seed")->required();
  fuzz->add_option("--out", ff.out_dir, "Output directory")->required();
  fuzz->add_option("--min-len", ff.min_len, "Minimum program length");
  fuzz->add_option("--max-len", ff.max_len, "Maximum program length");
  fuzz->add_option("--kinds", ff.kinds, "Instruction kinds, e.g. ST,LD,FENCE");
  fuzz->add_option("--policy", ff.policy,
                   "none, fence-after-first-load or release-acquire");
  add_common(fuzz, true);

  auto* suite = app.add_subcommand("suite", "Run a directory of tests");
  std::string dir;
  suite->add_option("dir", dir, "Directory of .litmus and .json tests")
      ->required();
  add_common(suite, true);

  auto* fmt = app.add_subcommand("fmt", "Print canonical litmus text");
  bool fmt_check = false;
  fmt->add_option("file", file, "Litmus file")->required();
  fmt->add_flag("--check", fmt_check, "Only report whether the file is canonical");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "hsamm: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (*check) return Check(file, common, trace_out, out, st);
    if (*cover) return Cover(file, common, watch, out);
    if (*gen) return Gen(file, common, target, events, only, out_path, out);
    if (*fuzz) return Fuzz(file, common, ff, out);
    if (*suite) return SuiteCmd(dir, common, out, st, file);
    if (*fmt) return Fmt(file, fmt_check, out);
  } catch (const ParseError& e) {
    err << file << ":" << e.line() << ":" << e.column() << ": " << e.message()
        << "\n";
    return kUsage;
  } catch (const ValidationError& e) {
    Diagnose(err, file, e);
    return kUsage;
  } catch (const StateLimitExceeded& e) {
    err << "hsamm: " << e.what() << "\n";
    return kStateLimit;
  } catch (const Unreachable& e) {
    err << "hsamm: " << e.what() << "\n";
    return kUnreachable;
  } catch (const InvalidBounds& e) {
    err << "hsamm: invalid bounds: " << e.what() << "\n";
    return kUsage;
  } catch (const UsageError& e) {
    err << "hsamm: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "hsamm: " << e.what() << "\n";
    return kUsage;
  } catch (const fs::filesystem_error& e) {
    err << "hsamm: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace hsamm::cli
