#include "hsamm/testgen.hpp"

#include <algorithm>
#include <random>
#include <regex>
#include <sstream>
#include <unordered_set>

#include "hsamm/errors.hpp"

namespace hsamm {

namespace {

std::string Trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

// Uniform draw from [0, n) without relying on the library distribution, whose
// output is implementation defined.
std::uint64_t Draw(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

std::uint64_t SplitMix(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

RegisterValues RegistersOf(const SystemConfig& c, const MachineState& s) {
  return NamedRegisters(c, s.rf);
}

bool Admitted(const ProgramClass& cls, InstrKind k) {
  if (std::find(cls.kinds.begin(), cls.kinds.end(), k) != cls.kinds.end()) {
    return true;
  }
  if (cls.policy == SyncPolicy::kFenceAfterFirstLoad) {
    return k == InstrKind::kFence;
  }
  if (cls.policy == SyncPolicy::kReleaseAcquire) {
    return k == InstrKind::kScRelStore || k == InstrKind::kScAcqLoad;
  }
  return false;
}

}  // namespace

bool TestTarget::Holds(const LitmusTest& test, const MachineState& s) const {
  const std::size_t regs = test.config.registers.size();
  for (const auto& [m, idx] : combos) {
    RegCombo combo(s.rf.begin() + m * regs, s.rf.begin() + (m + 1) * regs);
    if (ComboIndex(combo, test.config.values) != idx) return false;
  }
  if (predicate && !predicate->Evaluate(s.rf, regs)) return false;
  return true;
}

TestTarget ParseTarget(std::string_view text, const LitmusTest& test) {
  static const std::regex kPoint(R"(\s*([A-Za-z_][\w.]*)\s*:\s*C(\d+)\s*)");
  TestTarget target;
  std::string s(text);
  std::vector<std::string> parts;
  std::stringstream ss(s);
  for (std::string part; std::getline(ss, part, ',');) parts.push_back(part);
  bool points = !parts.empty();
  for (const auto& p : parts) {
    if (!std::regex_match(p, kPoint)) points = false;
  }
  if (!points) {
    target.predicate = ParseOutcome(text, test.config);
    return target;
  }
  const std::size_t combos =
      RegCombos(test.config.registers.size(), test.config.values).size();
  std::vector<Diagnostic> diags;
  std::size_t column = 1;
  for (const auto& p : parts) {
    std::smatch m;
    std::regex_match(p, m, kPoint);
    auto master = test.config.FindMaster(m[1].str());
    const std::size_t col = column + m.position(1);
    std::size_t idx = 0;
    try {
      idx = std::stoull(m[2].str());
    } catch (const std::out_of_range&) {
      idx = combos;
    }
    if (!master) {
      diags.push_back({1, col, "unknown master " + m[1].str()});
    } else if (idx >= combos) {
      diags.push_back({1, col, "combo C" + m[2].str() + " does not exist (" +
                                   std::to_string(combos) + " combos)"});
    } else if (std::any_of(target.combos.begin(), target.combos.end(),
                           [&](const auto& c) { return c.first == *master; })) {
      diags.push_back({1, col, "master " + m[1].str() + " listed twice"});
    } else {
      target.combos.emplace_back(*master, idx);
    }
    column += p.size() + 1;
  }
  if (!diags.empty()) throw ValidationError(std::move(diags));
  return target;
}

std::string FormatTarget(const TestTarget& target, const LitmusTest& test) {
  std::string out;
  for (const auto& [m, idx] : target.combos) {
    if (!out.empty()) out += ",";
    out += test.config.masters[m] + ":" + ComboName(idx);
  }
  if (target.predicate) {
    if (!out.empty()) out += " ";
    out += FormatOutcome(*target.predicate);
  }
  return out;
}

EventMask ParseEventList(std::string_view text) {
  EventMask mask = 0;
  std::stringstream ss{std::string(text)};
  for (std::string part; std::getline(ss, part, ',');) {
    std::string name = Trim(part);
    if (name.empty()) continue;
    auto k = EventKindFromName(name);
    if (!k) throw std::invalid_argument("unknown event " + name);
    mask |= EventBit(*k);
  }
  return mask;
}

RegisterValues NamedRegisters(const SystemConfig& c, const RegisterMap& rf) {
  RegisterValues out;
  const std::size_t regs = c.registers.size();
  for (std::size_t m = 0; m < c.masters.size(); ++m) {
    auto& row = out[c.masters[m]];
    for (std::size_t r = 0; r < regs; ++r) {
      row[c.registers[r]] = rf[m * regs + r];
    }
  }
  return out;
}

TestCase FindTrace(const LitmusTest& test, const TestTarget& target,
                   std::uint64_t max_states) {
  const Kernel kernel(test.config);
  const EventMask issue_events =
      EventBit(EventKind::kIssueStore) | EventBit(EventKind::kIssueLoad) |
      EventBit(EventKind::kIssueFence) | EventBit(EventKind::kIssueScRelStore) |
      EventBit(EventKind::kIssueScAcqLoad);
  const EventMask permitted = target.must_cover | issue_events;

  struct Node {
    std::uint32_t parent;
    EventDescriptor via;
  };
  std::vector<Node> nodes;
  std::unordered_set<std::string> seen;
  auto key_of = [](const MachineState& s, EventMask covered) {
    std::string k = CanonicalKey(s);
    for (int b = 0; b < 4; ++b) k.push_back(static_cast<char>(covered >> (8 * b)));
    return k;
  };
  auto goal = [&](const MachineState& s, EventMask covered) {
    return Triggered(test, s) && (covered & target.must_cover) == target.must_cover &&
           target.Holds(test, s);
  };
  auto finish = [&](std::uint32_t id, const MachineState& s) {
    TestCase tc;
    while (id != 0) {
      tc.trace.push_back(nodes[id].via);
      id = nodes[id].parent;
    }
    std::reverse(tc.trace.begin(), tc.trace.end());
    tc.name = test.name;
    tc.litmus = Format(test);
    tc.expected = RegistersOf(test.config, s);
    std::string g = FormatTarget(target, test);
    if (!g.empty()) {
      tc.goal = g;
      tc.name += " " + g;
    }
    return tc;
  };

  struct Item {
    std::uint32_t id;
    MachineState state;
    EventMask covered;
  };
  MachineState init = kernel.Init();
  seen.insert(key_of(init, 0));
  nodes.push_back({0, {}});
  if (goal(init, 0)) return finish(0, init);
  std::vector<Item> frontier;
  frontier.push_back({0, std::move(init), 0});
  while (!frontier.empty()) {
    std::vector<Item> next;
    for (const auto& item : frontier) {
      for (const auto& ev : kernel.Enabled(item.state)) {
        if (target.only_these && (EventBit(ev.kind) & permitted) == 0) continue;
        MachineState s = kernel.ApplyUnchecked(item.state, ev);
        const EventMask covered = item.covered | EventBit(ev.kind);
        if (!seen.insert(key_of(s, covered)).second) continue;
        if (nodes.size() >= max_states) throw StateLimitExceeded(max_states);
        const auto id = static_cast<std::uint32_t>(nodes.size());
        nodes.push_back({item.id, ev});
        if (goal(s, covered)) return finish(id, s);
        next.push_back({id, std::move(s), covered});
      }
    }
    frontier = std::move(next);
  }
  throw Unreachable(nodes.size());
}

VerifyResult VerifyTest(const TestCase& tc) {
  VerifyResult r;
  auto fail = [&](std::string msg) {
    r.ok = false;
    r.message = std::move(msg);
    return r;
  };
  LitmusTest test;
  try {
    test = Parse(tc.litmus);
  } catch (const Error& e) {
    return fail(std::string("litmus source rejected: ") + e.what());
  }
  MachineState final_state;
  try {
    final_state = Replay(test.config, tc.trace);
  } catch (const ReplayError& e) {
    r.step = e.step();
    return fail(e.what());
  }
  const RegisterValues got = RegistersOf(test.config, final_state);
  for (const auto& [master, regs] : tc.expected) {
    auto row = got.find(master);
    if (row == got.end()) return fail("unknown master " + master);
    for (const auto& [reg, value] : regs) {
      auto cell = row->second.find(reg);
      if (cell == row->second.end()) return fail("unknown register " + reg);
      if (cell->second != value) {
        return fail(master + ":" + reg + " is " + std::to_string(cell->second) +
                    ", expected " + std::to_string(value));
      }
    }
  }
  if (tc.goal) {
    TestTarget target;
    try {
      target = ParseTarget(*tc.goal, test);
    } catch (const Error& e) {
      return fail(std::string("goal rejected: ") + e.what());
    }
    if (!Triggered(test, final_state)) {
      return fail("watched loads are not all observed at the end of the trace");
    }
    if (!target.Holds(test, final_state)) {
      return fail("goal " + *tc.goal + " does not hold after replay");
    }
  }
  if (tc.allowed &&
      std::find(tc.allowed->begin(), tc.allowed->end(), got) ==
          tc.allowed->end()) {
    return fail("replayed registers are not an allowed outcome");
  }
  return r;
}

std::string_view PolicyName(SyncPolicy p) {
  switch (p) {
    case SyncPolicy::kNone:
      return "none";
    case SyncPolicy::kFenceAfterFirstLoad:
      return "fence-after-first-load";
    case SyncPolicy::kReleaseAcquire:
      return "release-acquire";
  }
  return "?";
}

std::optional<SyncPolicy> PolicyFromName(std::string_view name) {
  for (auto p : {SyncPolicy::kNone, SyncPolicy::kFenceAfterFirstLoad,
                 SyncPolicy::kReleaseAcquire}) {
    if (PolicyName(p) == name) return p;
  }
  return std::nullopt;
}

ProgramClass Generalize(const LitmusTest& seed, const Bounds& bounds) {
  const SystemConfig& c = seed.config;
  if (bounds.min_length > bounds.max_length) {
    throw InvalidBounds("minimum length " + std::to_string(bounds.min_length) +
                        " exceeds maximum " +
                        std::to_string(bounds.max_length));
  }
  if (bounds.max_length * c.num_masters() > kMaxInstructions) {
    throw InvalidBounds("programs of length " +
                        std::to_string(bounds.max_length) + " on " +
                        std::to_string(c.num_masters()) + " masters exceed " +
                        std::to_string(kMaxInstructions) + " instructions");
  }
  ProgramClass cls;
  cls.name = seed.name;
  cls.masters = c.masters;
  cls.registers = c.registers.empty() ? std::vector<std::string>{"R1"}
                                      : c.registers;
  cls.addresses = c.addresses.empty() ? std::vector<std::string>{"a1"}
                                      : c.addresses;
  cls.initial_memory = c.initial_memory;
  cls.initial_memory.resize(cls.addresses.size(), 0);
  for (const auto& ins : c.instructions) {
    if (IsStore(ins.kind) &&
        std::find(cls.store_values.begin(), cls.store_values.end(),
                  *ins.value) == cls.store_values.end()) {
      cls.store_values.push_back(*ins.value);
    }
  }
  std::sort(cls.store_values.begin(), cls.store_values.end());
  if (cls.store_values.empty()) cls.store_values = {1};
  cls.min_length = bounds.min_length;
  cls.max_length = bounds.max_length;
  cls.kinds = bounds.kinds;
  if (cls.kinds.empty()) {
    for (const auto& ins : c.instructions) {
      if (std::find(cls.kinds.begin(), cls.kinds.end(), ins.kind) ==
          cls.kinds.end()) {
        cls.kinds.push_back(ins.kind);
      }
    }
  }
  std::sort(cls.kinds.begin(), cls.kinds.end());
  cls.kinds.erase(std::unique(cls.kinds.begin(), cls.kinds.end()),
                  cls.kinds.end());
  if (cls.kinds.empty() && bounds.max_length > 0) {
    throw InvalidBounds("no instruction kinds to sample from");
  }
  cls.policy = bounds.policy;
  return cls;
}

bool PolicyHolds(SyncPolicy policy, const SystemConfig& config) {
  for (const auto& prog : config.programs) {
    std::optional<std::size_t> first_load, last_load;
    for (std::size_t p = 0; p < prog.size(); ++p) {
      if (IsLoad(config.instr(prog[p]).kind)) {
        if (!first_load) first_load = p;
        last_load = p;
      }
    }
    switch (policy) {
      case SyncPolicy::kNone:
        break;
      case SyncPolicy::kFenceAfterFirstLoad:
        if (first_load && *first_load + 1 < prog.size() &&
            config.instr(prog[*first_load + 1]).kind != InstrKind::kFence) {
          return false;
        }
        break;
      case SyncPolicy::kReleaseAcquire:
        for (std::size_t p = 0; p < prog.size(); ++p) {
          InstrKind k = config.instr(prog[p]).kind;
          if (k == InstrKind::kStore) return false;
          if (k == InstrKind::kLoad && p != last_load) return false;
        }
        break;
    }
  }
  return true;
}

std::optional<std::string> ClassRejects(const ProgramClass& cls,
                                        const LitmusTest& test) {
  const SystemConfig& c = test.config;
  if (c.masters != cls.masters) return "masters differ";
  auto contains = [](const auto& v, const auto& x) {
    return std::find(v.begin(), v.end(), x) != v.end();
  };
  for (std::size_t m = 0; m < c.num_masters(); ++m) {
    const std::size_t len = c.programs[m].size();
    if (len < cls.min_length || len > cls.max_length) {
      return "program of " + c.masters[m] + " has length " +
             std::to_string(len);
    }
  }
  for (const auto& ins : c.instructions) {
    if (!Admitted(cls, ins.kind)) {
      return ins.id + " is a " + std::string(Mnemonic(ins.kind));
    }
    if (ins.reg && !contains(cls.registers, c.registers[*ins.reg])) {
      return ins.id + " uses register " + c.registers[*ins.reg];
    }
    if (ins.value && !contains(cls.store_values, *ins.value)) {
      return ins.id + " stores " + std::to_string(*ins.value);
    }
  }
  for (std::size_t a = 0; a < c.addresses.size(); ++a) {
    auto it = std::find(cls.addresses.begin(), cls.addresses.end(),
                        c.addresses[a]);
    if (it == cls.addresses.end()) return "address " + c.addresses[a];
    if (cls.initial_memory[it - cls.addresses.begin()] != c.initial_memory[a]) {
      return "initial value of " + c.addresses[a];
    }
  }
  if (!PolicyHolds(cls.policy, c)) {
    return "violates policy " + std::string(PolicyName(cls.policy));
  }
  return std::nullopt;
}

std::optional<LitmusTest> SampleProgram(const ProgramClass& cls,
                                        std::uint64_t sample_seed,
                                        const std::string& name) {
  std::mt19937_64 rng(sample_seed);
  struct Draft {
    InstrKind kind;
    std::size_t addr = 0, reg = 0, value = 0;
  };
  std::vector<std::vector<Draft>> progs(cls.masters.size());
  for (auto& prog : progs) {
    std::size_t len =
        cls.min_length + Draw(rng, cls.max_length - cls.min_length + 1);
    for (std::size_t k = 0; k < len; ++k) {
      Draft d;
      d.kind = cls.kinds[Draw(rng, cls.kinds.size())];
      d.addr = Draw(rng, cls.addresses.size());
      d.reg = Draw(rng, cls.registers.size());
      d.value = Draw(rng, cls.store_values.size());
      prog.push_back(d);
    }
    std::optional<std::size_t> first_load, last_load;
    for (std::size_t p = 0; p < prog.size(); ++p) {
      if (IsLoad(prog[p].kind)) {
        if (!first_load) first_load = p;
        last_load = p;
      }
    }
    if (cls.policy == SyncPolicy::kFenceAfterFirstLoad && first_load &&
        *first_load + 1 < prog.size()) {
      prog[*first_load + 1].kind = InstrKind::kFence;
    }
    if (cls.policy == SyncPolicy::kReleaseAcquire) {
      for (std::size_t p = 0; p < prog.size(); ++p) {
        if (prog[p].kind == InstrKind::kStore) prog[p].kind = InstrKind::kScRelStore;
        if (prog[p].kind == InstrKind::kLoad && p != last_load) {
          prog[p].kind = InstrKind::kScAcqLoad;
        }
      }
    }
  }

  std::ostringstream os;
  os << "litmus \"";
  for (char ch : name) {
    if (ch == '"' || ch == '\\') os << '\\';
    os << ch;
  }
  os << "\"\ninit {";
  for (std::size_t a = 0; a < cls.addresses.size(); ++a) {
    os << " " << cls.addresses[a] << " = " << cls.initial_memory[a] << ";";
  }
  os << " }\n";
  std::optional<std::string> atom;
  for (std::size_t m = 0; m < progs.size(); ++m) {
    os << "master " << cls.masters[m] << " {";
    for (std::size_t k = 0; k < progs[m].size(); ++k) {
      const Draft& d = progs[m][k];
      std::string id = "I" + std::to_string(m + 1);
      if (m + 1 >= 10 || progs[m].size() >= 10) id += "_";
      id += std::to_string(k + 1);
      os << " " << id << ": " << Mnemonic(d.kind);
      if (IsLoad(d.kind)) {
        os << " " << cls.registers[d.reg] << " " << cls.addresses[d.addr];
        if (!atom) atom = cls.masters[m] + ":" + cls.registers[d.reg] + " = 0";
      } else if (IsStore(d.kind)) {
        os << " " << cls.addresses[d.addr] << " #" << cls.store_values[d.value];
      }
      os << ";";
    }
    os << " }\n";
  }
  if (!atom) return std::nullopt;
  os << "allowed ( " << *atom << " )\n";
  return Parse(os.str());
}

std::vector<std::uint64_t> SampleSeeds(std::uint64_t seed, std::size_t count) {
  std::vector<std::uint64_t> out;
  std::uint64_t state = seed;
  for (std::size_t i = 0; i < count; ++i) out.push_back(SplitMix(state));
  return out;
}

TestCase PlatformTest(const LitmusTest& test, std::uint64_t max_states) {
  const Kernel kernel(test.config);
  ExploreOptions opts;
  opts.max_states = max_states;
  opts.goal = [&kernel](const MachineState& s) {
    return kernel.Enabled(s).empty();
  };
  ExplorationResult r = Explore(test.config, opts);
  TestCase tc;
  tc.name = test.name;
  tc.litmus = Format(test);
  tc.trace = r.violation->trace;
  tc.expected = RegistersOf(test.config, r.violation->state);
  std::vector<RegisterValues> allowed;
  for (const auto& rf : r.final_register_maps) {
    allowed.push_back(NamedRegisters(test.config, rf));
  }
  tc.allowed = std::move(allowed);
  return tc;
}

Suite GenerateSuite(const ProgramClass& cls, std::size_t count,
                    std::uint64_t seed, std::uint64_t max_states) {
  Suite suite;
  const auto seeds = SampleSeeds(seed, count);
  const std::size_t width = std::max<std::size_t>(3, std::to_string(count).size());
  for (std::size_t i = 0; i < count; ++i) {
    SampleRecord rec;
    rec.index = i;
    rec.seed = seeds[i];
    std::string num = std::to_string(i);
    rec.name = cls.name + "-" + std::string(width - num.size(), '0') + num;
    auto test = SampleProgram(cls, rec.seed, rec.name);
    if (!test) {
      rec.skipped = true;
      rec.reason = "sample has no loads";
    } else {
      try {
        suite.cases.push_back(PlatformTest(*test, max_states));
      } catch (const StateLimitExceeded& e) {
        rec.skipped = true;
        rec.reason = e.what();
      }
    }
    suite.samples.push_back(std::move(rec));
  }
  return suite;
}

}  // namespace hsamm
