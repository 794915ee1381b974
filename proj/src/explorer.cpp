#include "hsamm/explorer.hpp"

#include <algorithm>
#include <thread>
#include <unordered_map>

#include "hsamm/errors.hpp"

namespace hsamm {

namespace {

void PutVarint(std::string& out, std::uint64_t v) {
  while (v >= 0x80) {
    out.push_back(static_cast<char>((v & 0x7f) | 0x80));
    v >>= 7;
  }
  out.push_back(static_cast<char>(v));
}

void PutSigned(std::string& out, Value v) {
  // zigzag
  PutVarint(out, (static_cast<std::uint64_t>(v) << 1) ^
                     static_cast<std::uint64_t>(v >> 63));
}

struct Successor {
  EventDescriptor event;
  MachineState state;
  std::string key;
};

// Parent links of the BFS tree, for shortest traces.
struct SearchTree {
  std::vector<std::uint32_t> parent;
  std::vector<EventDescriptor> via;

  Trace TraceTo(std::uint32_t id) const {
    Trace t;
    while (id != 0) {
      t.push_back(via[id]);
      id = parent[id];
    }
    std::reverse(t.begin(), t.end());
    return t;
  }
};

std::vector<Successor> Expand(const Kernel& kernel, const MachineState& s) {
  std::vector<Successor> out;
  for (const auto& ev : kernel.Enabled(s)) {
    Successor succ{ev, kernel.ApplyUnchecked(s, ev), {}};
    succ.key = CanonicalKey(succ.state);
    out.push_back(std::move(succ));
  }
  return out;
}

}  // namespace

std::string CanonicalKey(const MachineState& s) {
  std::string out;
  out.reserve(64 + s.observers.size() * 2 + s.lov.size() + s.rf.size());
  PutVarint(out, s.issued);
  PutVarint(out, s.observed);
  PutVarint(out, s.issued_fence);
  PutVarint(out, s.observers.size());
  for (auto m : s.observers) PutVarint(out, m);
  for (auto a : s.after) PutVarint(out, a);
  PutVarint(out, s.lov.size());
  for (auto v : s.lov) PutSigned(out, v);
  PutVarint(out, s.rf.size());
  for (auto v : s.rf) PutSigned(out, v);
  PutVarint(out, s.cursor.size());
  for (auto c : s.cursor) PutVarint(out, c);
  PutVarint(out, s.atomic_order.size());
  for (auto x : s.atomic_order) PutVarint(out, x);
  PutVarint(out, s.addr_count);
  PutVarint(out, s.reg_count);
  return out;
}

ExplorationResult Explore(const SystemConfig& config,
                          const ExploreOptions& opts) {
  const Kernel kernel(config);
  const unsigned workers = std::max(1u, opts.workers);
  const std::uint64_t all_instrs =
      config.num_instructions() == 64
          ? ~std::uint64_t{0}
          : (std::uint64_t{1} << config.num_instructions()) - 1;

  ExplorationResult result;
  SearchTree tree;
  std::unordered_map<std::string, std::uint32_t> seen;

  // Returns false when exploration has to stop.
  auto visit = [&](const MachineState& s, std::uint32_t id) {
    if (opts.check_invariants) {
      auto violations = kernel.CheckInvariants(s);
      if (!violations.empty()) {
        result.invariant_failure =
            InvariantFailure{std::move(violations), {s, tree.TraceTo(id)}};
        return false;
      }
    }
    if (opts.watched_loads &&
        (*opts.watched_loads & ~s.observed) == 0) {
      result.trigger_register_maps.insert(s.rf);
    }
    if (opts.goal && !result.violation && opts.goal(s)) {
      result.violation = Witness{s, tree.TraceTo(id)};
      if (opts.stop_at_goal) return false;
    }
    return true;
  };

  auto add = [&](std::string key, std::uint32_t parent,
                 const EventDescriptor& via) -> std::optional<std::uint32_t> {
    auto [it, inserted] =
        seen.emplace(std::move(key), static_cast<std::uint32_t>(seen.size()));
    if (!inserted) return std::nullopt;
    tree.parent.push_back(parent);
    tree.via.push_back(via);
    return it->second;
  };

  MachineState init = kernel.Init();
  add(CanonicalKey(init), 0, {});
  result.state_count = 1;
  std::vector<std::pair<std::uint32_t, MachineState>> frontier;
  if (visit(init, 0)) frontier.emplace_back(0, std::move(init));

  bool stop = frontier.empty();
  while (!frontier.empty() && !stop) {
    std::vector<std::vector<Successor>> expanded(frontier.size());
    if (workers == 1 || frontier.size() < 2 * workers) {
      for (std::size_t i = 0; i < frontier.size(); ++i) {
        expanded[i] = Expand(kernel, frontier[i].second);
      }
    } else {
      std::vector<std::thread> pool;
      const std::size_t chunk = (frontier.size() + workers - 1) / workers;
      for (unsigned w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(frontier.size(), lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi] {
          for (std::size_t i = lo; i < hi; ++i) {
            expanded[i] = Expand(kernel, frontier[i].second);
          }
        });
      }
      for (auto& t : pool) t.join();
    }

    // Merge sequentially in frontier order so that ids, counts and witnesses
    // do not depend on the worker count.
    std::vector<std::pair<std::uint32_t, MachineState>> next;
    for (std::size_t i = 0; i < frontier.size() && !stop; ++i) {
      const auto& [id, state] = frontier[i];
      if (expanded[i].empty()) {
        if (state.issued != (kernel.access_mask() & all_instrs) ||
            state.issued_fence != kernel.fence_mask() ||
            (kernel.load_mask() & ~state.observed) != 0) {
          ++result.stuck_states;
        }
        result.final_register_maps.insert(state.rf);
        result.final_states.push_back(state);
        continue;
      }
      for (auto& succ : expanded[i]) {
        ++result.transition_count;
        ++result.event_tally[static_cast<std::size_t>(succ.event.kind)];
        auto new_id = add(std::move(succ.key), id, succ.event);
        if (!new_id) continue;
        if (result.state_count >= opts.max_states) {
          if (!opts.allow_partial) throw StateLimitExceeded(opts.max_states);
          result.complete = false;
          stop = true;
          break;
        }
        ++result.state_count;
        if (!visit(succ.state, *new_id)) {
          stop = true;
          break;
        }
        next.emplace_back(*new_id, std::move(succ.state));
      }
    }
    frontier = std::move(next);
  }
  if (stop && (result.violation || result.invariant_failure)) {
    result.complete = result.complete && frontier.empty();
  }
  return result;
}

std::string_view VerdictName(Verdict::Kind kind) {
  switch (kind) {
    case Verdict::Kind::kHolds:
      return "Holds";
    case Verdict::Kind::kViolated:
      return "Violated";
    case Verdict::Kind::kReachable:
      return "Reachable";
    case Verdict::Kind::kUnreachable:
      return "Unreachable";
  }
  return "?";
}

bool Triggered(const LitmusTest& test, const MachineState& state) {
  return (test.watched_loads & ~state.observed) == 0;
}

Verdict CheckOutcome(const LitmusTest& test, ExploreOptions opts) {
  const std::size_t regs = test.config.registers.size();
  const bool want = test.mode != OutcomeMode::kRequired;
  opts.goal = [&test, regs, want](const MachineState& s) {
    return Triggered(test, s) && test.outcome.Evaluate(s.rf, regs) == want;
  };
  opts.stop_at_goal = true;
  ExplorationResult r = Explore(test.config, opts);
  Verdict v;
  v.state_count = r.state_count;
  v.transition_count = r.transition_count;
  v.witness = std::move(r.violation);
  if (test.mode == OutcomeMode::kAllowed) {
    v.kind = v.witness ? Verdict::Kind::kReachable : Verdict::Kind::kUnreachable;
  } else {
    v.kind = v.witness ? Verdict::Kind::kViolated : Verdict::Kind::kHolds;
  }
  return v;
}

MachineState Replay(const SystemConfig& config, const Trace& trace,
                    ReplayMode mode) {
  const Kernel kernel(config);
  MachineState s = kernel.Init();
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (auto failure = kernel.CheckGuards(s, trace[i])) {
      if (mode == ReplayMode::kStrict || failure->guard == "params") {
        throw ReplayError(i, std::string(EventName(trace[i].kind)) + " " +
                                 failure->guard + ": " + failure->detail);
      }
    }
    s = kernel.ApplyUnchecked(s, trace[i]);
  }
  return s;
}

std::string_view StatusName(PropertyResult::Status status) {
  switch (status) {
    case PropertyResult::Status::kPass:
      return "pass";
    case PropertyResult::Status::kFail:
      return "fail";
    case PropertyResult::Status::kNotApplicable:
      return "not applicable";
  }
  return "?";
}

OrderingReport CheckTraceOrderings(const SystemConfig& config,
                                   const Trace& trace, ReplayMode mode) {
  const Kernel kernel(config);
  const std::size_t n = config.num_instructions();
  const std::size_t masters = config.num_masters();
  constexpr std::size_t kNever = static_cast<std::size_t>(-1);
  auto id = [&](InstrIndex i) { return config.instr(i).id; };
  auto fail = [](PropertyResult& r, std::string w) {
    if (r.status != PropertyResult::Status::kFail) {
      r.status = PropertyResult::Status::kFail;
      r.witness = std::move(w);
    }
  };

  OrderingReport report;
  bool synchronized = false;
  for (const auto& ins : config.instructions) {
    if (ins.kind == InstrKind::kFence || IsAtomic(ins.kind)) synchronized = true;
  }
  if (!synchronized) report.po.status = PropertyResult::Status::kNotApplicable;

  // Step at which access a was performed with respect to master m.
  std::vector<std::size_t> performed(n * masters, kNever);
  std::vector<std::size_t> issued_at(n, kNever);
  std::vector<std::size_t> observed_at(n, kNever);
  std::vector<std::pair<InstrIndex, InstrIndex>> hb_pairs;  // (l1, s)
  // Independent fold of store observations: last store value per (m, addr).
  std::vector<std::optional<Value>> last_store(masters * config.addresses.size());

  MachineState s = kernel.Init();
  for (std::size_t t = 0; t < trace.size(); ++t) {
    const EventDescriptor& ev = trace[t];
    if (auto failure = kernel.CheckGuards(s, ev)) {
      if (mode == ReplayMode::kStrict || failure->guard == "params") {
        throw ReplayError(t, std::string(EventName(ev.kind)) + " " +
                                 failure->guard + ": " + failure->detail);
      }
    }
    const MachineState before = s;
    s = kernel.ApplyUnchecked(s, ev);

    if (IsIssueEvent(ev.kind)) {
      InstrIndex x = ev.f ? *ev.f : (ev.l ? *ev.l : *ev.s);
      issued_at[x] = t;
      continue;
    }
    const MasterIndex m = *ev.m;
    const InstrIndex x = ev.l ? *ev.l : *ev.s;
    const Instruction& ins = config.instr(x);

    if (synchronized && report.po.status != PropertyResult::Status::kFail) {
      auto check_before = [&](InstrIndex a, const std::string& why) {
        if (issued_at[a] == kNever || issued_at[a] > t) return;
        if (performed[a * masters + m] == kNever) {
          fail(report.po, config.masters[m] + " observed " + ins.id +
                              " before " + id(a) + " (" + why + ")");
        }
      };
      for (InstrIndex f : config.programs[ins.issuer]) {
        const Instruction& fi = config.instr(f);
        if (fi.kind != InstrKind::kFence || fi.index > ins.index) continue;
        if (issued_at[f] == kNever || issued_at[f] > t) continue;
        for (InstrIndex a : AheadOf(config, f)) check_before(a, "fence " + fi.id);
      }
      for (InstrIndex a : config.programs[ins.issuer]) {
        const Instruction& ai = config.instr(a);
        if (ai.index >= ins.index || !IsMemAccess(ai.kind)) continue;
        if (ins.kind == InstrKind::kScRelStore) check_before(a, "release");
        if (ai.kind == InstrKind::kScAcqLoad) check_before(a, "acquire");
      }
    }

    if (IsStore(ins.kind)) {
      performed[x * masters + m] = t;
      last_store[m * config.addresses.size() + *ins.address] = *ins.value;
      if (observed_at[x] == kNever) observed_at[x] = t;
      continue;
    }

    // Load observation.
    for (std::size_t mm = 0; mm < masters; ++mm) performed[x * masters + mm] = t;
    observed_at[x] = t;
    const auto& last = last_store[m * config.addresses.size() + *ins.address];
    const Value expect = last ? *last : config.initial_memory[*ins.address];
    const Value got = s.Rf(m, *ins.reg);
    if (got != expect) {
      fail(report.co, ins.id + " returned " + std::to_string(got) +
                          ", last observed store value is " +
                          std::to_string(expect));
    }
    // hb candidates: stores to the same address that m had not observed and
    // that had no load after them when x was observed.
    for (InstrIndex st = 0; st < n; ++st) {
      const Instruction& si = config.instr(st);
      if (!IsStore(si.kind) || si.address != ins.address) continue;
      if (st < before.observers.size() &&
          ((before.observers[st] & Bit(m)) != 0 || before.after[st] != 0)) {
        continue;
      }
      hb_pairs.push_back({x, st});
    }
    if (ev.kind == EventKind::kObserveLoadHappensBeforeWithFence && ev.s &&
        before.after[*ev.s] != 0) {
      fail(report.hb, "HappensBefore observe of " + ins.id + " after a load "
                      "entered after(" + id(*ev.s) + ")");
    }
  }

  for (const auto& [l1, st] : hb_pairs) {
    for (InstrIndex l2 = 0; l2 < n; ++l2) {
      if (l2 >= s.after.size() || (s.after[st] & Bit(l2)) == 0) continue;
      if (config.instr(l2).issuer != config.instr(l1).issuer) continue;
      if (observed_at[l2] <= observed_at[l1]) {
        fail(report.hb, id(l2) + " in after(" + id(st) +
                            ") was observed before " + id(l1));
      }
    }
  }
  return report;
}

}  // namespace hsamm
