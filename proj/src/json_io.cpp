#include "hsamm/json_io.hpp"

#include <stdexcept>

namespace hsamm {

namespace {

InstrIndex InstrFromJson(const SystemConfig& c, const Json& j) {
  auto i = c.FindInstruction(j.get<std::string>());
  if (!i) throw std::invalid_argument("unknown instruction " + j.dump());
  return *i;
}

}  // namespace

Json EventToJson(const SystemConfig& c, const EventDescriptor& ev) {
  Json j;
  j["event"] = std::string(EventName(ev.kind));
  if (ev.l) j["l"] = c.instr(*ev.l).id;
  if (ev.s) j["s"] = c.instr(*ev.s).id;
  if (ev.f) j["f"] = c.instr(*ev.f).id;
  if (ev.m) j["m"] = c.masters[*ev.m];
  return j;
}

EventDescriptor EventFromJson(const SystemConfig& c, const Json& j) {
  if (!j.is_object() || !j.contains("event")) {
    throw std::invalid_argument("event descriptor without \"event\": " +
                                j.dump());
  }
  auto kind = EventKindFromName(j.at("event").get<std::string>());
  if (!kind) throw std::invalid_argument("unknown event " + j.at("event").dump());
  EventDescriptor ev;
  ev.kind = *kind;
  if (j.contains("l")) ev.l = InstrFromJson(c, j.at("l"));
  if (j.contains("s")) ev.s = InstrFromJson(c, j.at("s"));
  if (j.contains("f")) ev.f = InstrFromJson(c, j.at("f"));
  if (j.contains("m")) {
    auto m = c.FindMaster(j.at("m").get<std::string>());
    if (!m) throw std::invalid_argument("unknown master " + j.at("m").dump());
    ev.m = *m;
  }
  return ev;
}

Json TraceToJson(const SystemConfig& c, const Trace& trace) {
  Json j = Json::array();
  for (const auto& ev : trace) j.push_back(EventToJson(c, ev));
  return j;
}

Trace TraceFromJson(const SystemConfig& c, const Json& j) {
  if (!j.is_array()) throw std::invalid_argument("trace must be an array");
  Trace t;
  for (const auto& e : j) t.push_back(EventFromJson(c, e));
  return t;
}

Json RegistersToJson(const RegisterValues& regs) {
  Json j = Json::object();
  for (const auto& [m, row] : regs) {
    Json r = Json::object();
    for (const auto& [reg, v] : row) r[reg] = v;
    j[m] = std::move(r);
  }
  return j;
}

RegisterValues RegistersFromJson(const Json& j) {
  RegisterValues out;
  for (const auto& [m, row] : j.items()) {
    for (const auto& [reg, v] : row.items()) out[m][reg] = v.get<Value>();
  }
  return out;
}

Json VerdictToJson(const LitmusTest& test, const Verdict& v) {
  Json j;
  j["test"] = test.name;
  j["mode"] = std::string(ModeName(test.mode));
  j["outcome"] = FormatOutcome(test.outcome);
  j["verdict"] = std::string(VerdictName(v.kind));
  j["stateCount"] = v.state_count;
  j["transitions"] = v.transition_count;
  if (v.witness) {
    const char* key =
        v.kind == Verdict::Kind::kViolated ? "counterexample" : "witness";
    j[key] = TraceToJson(test.config, v.witness->trace);
    j["finalRegisters"] =
        RegistersToJson(NamedRegisters(test.config, v.witness->state.rf));
  }
  return j;
}

Json ExplorationToJson(const SystemConfig& c, const ExplorationResult& r) {
  Json j;
  j["stateCount"] = r.state_count;
  j["transitions"] = r.transition_count;
  j["finalStates"] = r.final_states.size();
  j["stuckStates"] = r.stuck_states;
  Json maps = Json::array();
  for (const auto& rf : r.final_register_maps) {
    maps.push_back(RegistersToJson(NamedRegisters(c, rf)));
  }
  j["finalRegisterMaps"] = std::move(maps);
  Json tally = Json::object();
  for (std::size_t k = 0; k < kEventKindCount; ++k) {
    tally[std::string(EventName(kAllEventKinds[k]))] = r.event_tally[k];
  }
  j["eventTally"] = std::move(tally);
  j["complete"] = r.complete;
  return j;
}

Json CoverageToJson(const LitmusTest& test, const CoverageReport& report) {
  const SystemConfig& c = test.config;
  auto point = [](const CoveragePoint& p) {
    Json a = Json::array();
    for (auto idx : p) a.push_back(ComboName(idx));
    return a;
  };
  Json j;
  j["test"] = report.test;
  Json watched = Json::array();
  for (auto m : report.watched) watched.push_back(c.masters[m]);
  j["watched"] = std::move(watched);
  Json combos = Json::object();
  for (std::size_t i = 0; i < report.combos.size(); ++i) {
    Json row = Json::object();
    for (std::size_t r = 0; r < c.registers.size(); ++r) {
      row[c.registers[r]] = report.combos[i][r];
    }
    combos[ComboName(i)] = std::move(row);
  }
  j["combos"] = std::move(combos);
  Json covered = Json::array();
  for (const auto& p : report.covered) covered.push_back(point(p));
  j["covered"] = std::move(covered);
  Json uncovered = Json::array();
  for (const auto& p : report.Uncovered()) uncovered.push_back(point(p));
  j["uncovered"] = std::move(uncovered);
  j["total"] = report.total;
  return j;
}

Json EventCoverageToJson(const std::vector<std::string>& names,
                         const EventCoverageReport& report) {
  auto list = [](const EventSet& s) {
    Json a = Json::array();
    for (std::size_t k = 0; k < kEventKindCount; ++k) {
      if (s[k]) a.push_back(std::string(EventName(kAllEventKinds[k])));
    }
    return a;
  };
  Json j;
  Json tests = Json::array();
  for (std::size_t i = 0; i < report.per_test.size(); ++i) {
    Json t;
    t["test"] = i < names.size() ? names[i] : std::to_string(i);
    t["fired"] = list(report.per_test[i]);
    tests.push_back(std::move(t));
  }
  j["tests"] = std::move(tests);
  j["fired"] = list(report.fired);
  Json uncovered = Json::array();
  for (auto k : report.uncovered) uncovered.push_back(std::string(EventName(k)));
  j["uncovered"] = std::move(uncovered);
  j["verdict"] = report.full ? "FULL" : "NOT-FULL";
  return j;
}

Json TestCaseToJson(const TestCase& tc) {
  const LitmusTest test = Parse(tc.litmus);
  Json j;
  j["name"] = tc.name;
  j["litmus"] = tc.litmus;
  j["steps"] = TraceToJson(test.config, tc.trace);
  j["expected"] = RegistersToJson(tc.expected);
  if (tc.goal) j["goal"] = *tc.goal;
  if (tc.allowed) {
    Json a = Json::array();
    for (const auto& regs : *tc.allowed) a.push_back(RegistersToJson(regs));
    j["allowed"] = std::move(a);
  }
  return j;
}

TestCase TestCaseFromJson(const Json& j) {
  TestCase tc;
  tc.name = j.at("name").get<std::string>();
  tc.litmus = j.at("litmus").get<std::string>();
  const LitmusTest test = Parse(tc.litmus);
  tc.trace = TraceFromJson(test.config, j.at("steps"));
  tc.expected = RegistersFromJson(j.at("expected"));
  if (j.contains("goal")) tc.goal = j.at("goal").get<std::string>();
  if (j.contains("allowed")) {
    std::vector<RegisterValues> allowed;
    for (const auto& a : j.at("allowed")) allowed.push_back(RegistersFromJson(a));
    tc.allowed = std::move(allowed);
  }
  return tc;
}

Json ClassToJson(const ProgramClass& cls) {
  Json j;
  j["name"] = cls.name;
  j["masters"] = cls.masters;
  j["registers"] = cls.registers;
  j["addresses"] = cls.addresses;
  j["initialMemory"] = cls.initial_memory;
  j["storeValues"] = cls.store_values;
  j["minLength"] = cls.min_length;
  j["maxLength"] = cls.max_length;
  Json kinds = Json::array();
  for (auto k : cls.kinds) kinds.push_back(std::string(Mnemonic(k)));
  j["kinds"] = std::move(kinds);
  j["policy"] = std::string(PolicyName(cls.policy));
  return j;
}

Json ManifestToJson(const ProgramClass& cls, std::size_t count,
                    std::uint64_t seed, const Suite& suite) {
  Json j;
  j["class"] = ClassToJson(cls);
  j["count"] = count;
  j["seed"] = seed;
  Json samples = Json::array();
  for (const auto& s : suite.samples) {
    Json e;
    e["index"] = s.index;
    e["seed"] = s.seed;
    e["name"] = s.name;
    if (s.skipped) {
      e["skipped"] = s.reason;
    } else {
      e["file"] = s.name + ".json";
    }
    samples.push_back(std::move(e));
  }
  j["samples"] = std::move(samples);
  return j;
}

}  // namespace hsamm
