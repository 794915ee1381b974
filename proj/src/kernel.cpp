#include "hsamm/kernel.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include "hsamm/errors.hpp"

namespace hsamm {

namespace {

constexpr std::array<std::string_view, kEventKindCount> kEventNames = {
    "IssueStore",
    "IssueLoad",
    "IssueFence",
    "IssueScRelStore",
    "IssueScAcqLoad",
    "ObserveStoreWithFence",
    "ObserveStoreWithoutFence",
    "ObserveLoadHappensBeforeWithFence",
    "ObserveLoadAfterStoreWithFence",
    "ObserveLoadWithoutFence",
    "ObserveLoadAfterStoreWithoutFence",
    "ObserveScRelStore",
    "ObserveScAcqLoad",
};

template <class F>
void ForEachBit(std::uint64_t mask, F&& f) {
  while (mask != 0) {
    auto i = static_cast<std::uint32_t>(std::countr_zero(mask));
    f(i);
    mask &= mask - 1;
  }
}

// Which parameters an event takes. Loads observed "before" a store take an
// optional s: it is absent exactly when no store to the load's address exists.
struct Signature {
  bool l, s, f, m, s_optional;
};

Signature SignatureOf(EventKind k) {
  switch (k) {
    case EventKind::kIssueStore:
    case EventKind::kIssueScRelStore:
      return {false, true, false, false, false};
    case EventKind::kIssueLoad:
    case EventKind::kIssueScAcqLoad:
      return {true, false, false, false, false};
    case EventKind::kIssueFence:
      return {false, false, true, false, false};
    case EventKind::kObserveStoreWithFence:
      return {false, true, true, true, false};
    case EventKind::kObserveStoreWithoutFence:
    case EventKind::kObserveScRelStore:
      return {false, true, false, true, false};
    case EventKind::kObserveLoadHappensBeforeWithFence:
      return {true, true, true, true, true};
    case EventKind::kObserveLoadAfterStoreWithFence:
      return {true, true, true, true, false};
    case EventKind::kObserveLoadWithoutFence:
      return {true, true, false, true, true};
    case EventKind::kObserveLoadAfterStoreWithoutFence:
      return {true, true, false, true, false};
    case EventKind::kObserveScAcqLoad:
      return {true, false, false, true, false};
  }
  return {};
}

std::optional<InstrKind> IssuedKind(EventKind k) {
  switch (k) {
    case EventKind::kIssueStore:
      return InstrKind::kStore;
    case EventKind::kIssueLoad:
      return InstrKind::kLoad;
    case EventKind::kIssueFence:
      return InstrKind::kFence;
    case EventKind::kIssueScRelStore:
      return InstrKind::kScRelStore;
    case EventKind::kIssueScAcqLoad:
      return InstrKind::kScAcqLoad;
    default:
      return std::nullopt;
  }
}

EventKind IssueEventFor(InstrKind k) {
  switch (k) {
    case InstrKind::kStore:
      return EventKind::kIssueStore;
    case InstrKind::kLoad:
      return EventKind::kIssueLoad;
    case InstrKind::kFence:
      return EventKind::kIssueFence;
    case InstrKind::kScRelStore:
      return EventKind::kIssueScRelStore;
    case InstrKind::kScAcqLoad:
      return EventKind::kIssueScAcqLoad;
  }
  return EventKind::kIssueFence;
}

std::optional<GuardFailure> Fail(std::string guard, std::string detail) {
  return GuardFailure{std::move(guard), std::move(detail)};
}

}  // namespace

std::string_view EventName(EventKind k) {
  return kEventNames[static_cast<std::size_t>(k)];
}

std::optional<EventKind> EventKindFromName(std::string_view name) {
  for (std::size_t i = 0; i < kEventNames.size(); ++i) {
    if (kEventNames[i] == name) return static_cast<EventKind>(i);
  }
  return std::nullopt;
}

bool IsIssueEvent(EventKind k) { return IssuedKind(k).has_value(); }

std::string Describe(const SystemConfig& config, const EventDescriptor& ev) {
  std::ostringstream os;
  os << EventName(ev.kind) << "(";
  const char* sep = "";
  auto instr = [&](const char* name, const std::optional<InstrIndex>& i) {
    if (!i) return;
    os << sep << name << "="
       << (*i < config.instructions.size() ? config.instr(*i).id : "?");
    sep = ", ";
  };
  instr("l", ev.l);
  instr("s", ev.s);
  if (ev.m) {
    os << sep << "m="
       << (*ev.m < config.masters.size() ? config.masters[*ev.m] : "?");
    sep = ", ";
  }
  instr("f", ev.f);
  os << ")";
  return os.str();
}

Kernel::Kernel(SystemConfig config) : config_(std::move(config)) {
  ValidateConfig(config_);
  const std::size_t n = config_.num_instructions();
  ahead_.assign(n, 0);
  po_pred_.assign(n, 0);
  acq_pred_.assign(n, 0);
  fences_of_.assign(config_.num_masters(), {});
  stores_to_.assign(config_.addresses.size(), 0);
  for (std::size_t m = 0; m < config_.num_masters(); ++m) {
    all_masters_ |= Bit(static_cast<std::uint32_t>(m));
    std::uint64_t earlier = 0;
    std::uint64_t earlier_acq = 0;
    for (InstrIndex i : config_.programs[m]) {
      const Instruction& ins = config_.instr(i);
      po_pred_[i] = earlier;
      acq_pred_[i] = earlier_acq;
      if (ins.kind == InstrKind::kFence) {
        ahead_[i] = earlier;
        fences_of_[m].push_back(i);
        fence_mask_ |= Bit(i);
      } else {
        earlier |= Bit(i);
      }
      if (ins.kind == InstrKind::kScAcqLoad) earlier_acq |= Bit(i);
      if (IsLoad(ins.kind)) load_mask_ |= Bit(i);
      if (IsStore(ins.kind)) {
        store_mask_ |= Bit(i);
        stores_to_[*ins.address] |= Bit(i);
      }
    }
  }
}

MachineState Kernel::Init() const {
  MachineState s;
  const auto masters = static_cast<std::uint32_t>(config_.num_masters());
  s.addr_count = static_cast<std::uint32_t>(config_.addresses.size());
  s.reg_count = static_cast<std::uint32_t>(config_.registers.size());
  s.observers.assign(config_.num_instructions(), 0);
  s.after.assign(config_.num_instructions(), 0);
  s.lov.reserve(std::size_t{masters} * s.addr_count);
  for (std::uint32_t m = 0; m < masters; ++m) {
    s.lov.insert(s.lov.end(), config_.initial_memory.begin(),
                 config_.initial_memory.end());
  }
  s.rf.assign(std::size_t{masters} * s.reg_count, 0);
  s.cursor.assign(masters, 1);
  return s;
}

bool Kernel::Performed(const MachineState& state, InstrIndex a,
                       MasterIndex m) const {
  if (IsStore(config_.instr(a).kind)) return (state.observers[a] & Bit(m)) != 0;
  return (state.observed & Bit(a)) != 0;
}

bool Kernel::PerformedAll(const MachineState& state, std::uint64_t accesses,
                          MasterIndex m) const {
  accesses &= state.issued;
  if ((accesses & load_mask_ & ~state.observed) != 0) return false;
  bool ok = true;
  ForEachBit(accesses & store_mask_, [&](std::uint32_t s) {
    if ((state.observers[s] & Bit(m)) == 0) ok = false;
  });
  return ok;
}

// For every issued fence g of `fence_owner` that x is not ahead of, all issued
// accesses ahead of g must have been performed with respect to m.
bool Kernel::FencePoHolds(const MachineState& state, MasterIndex fence_owner,
                          InstrIndex x, MasterIndex m) const {
  for (InstrIndex g : fences_of_[fence_owner]) {
    if ((state.issued_fence & Bit(g)) == 0) continue;
    if ((ahead_[g] & Bit(x)) != 0) continue;
    if (!PerformedAll(state, ahead_[g], m)) return false;
  }
  return true;
}

bool Kernel::AcquireHolds(const MachineState& state, InstrIndex x) const {
  return (acq_pred_[x] & ~state.observed) == 0;
}

std::optional<InstrIndex> Kernel::LatestFence(const MachineState& state,
                                              MasterIndex m) const {
  const auto& fences = fences_of_[m];
  for (auto it = fences.rbegin(); it != fences.rend(); ++it) {
    if ((state.issued_fence & Bit(*it)) != 0) return *it;
  }
  return std::nullopt;
}

// The fence an observation of store s by m is labelled with: the latest fence
// of issuer(s) if it has one, else the latest fence of the observer.
std::optional<InstrIndex> Kernel::StoreFence(const MachineState& state,
                                             InstrIndex s,
                                             MasterIndex m) const {
  if (auto f = LatestFence(state, config_.instr(s).issuer)) return f;
  return LatestFence(state, m);
}

std::optional<GuardFailure> Kernel::CheckGuards(
    const MachineState& state, const EventDescriptor& ev) const {
  const std::size_t n = config_.num_instructions();
  const Signature sig = SignatureOf(ev.kind);
  auto bad_instr = [&](const std::optional<InstrIndex>& i, bool want,
                       bool optional) {
    if (!i) return want && !optional;
    return !want || *i >= n;
  };
  if (bad_instr(ev.l, sig.l, false) || bad_instr(ev.s, sig.s, sig.s_optional) ||
      bad_instr(ev.f, sig.f, false) || ev.m.has_value() != sig.m ||
      (ev.m && *ev.m >= config_.num_masters())) {
    return Fail("params", "parameters do not match the event signature");
  }

  if (auto kind = IssuedKind(ev.kind)) {
    InstrIndex x = ev.kind == EventKind::kIssueFence
                       ? *ev.f
                       : (ev.l ? *ev.l : *ev.s);
    const Instruction& ins = config_.instr(x);
    if (ins.kind != *kind) return Fail("grd1", ins.id + " has another kind");
    std::uint64_t done =
        ins.kind == InstrKind::kFence ? state.issued_fence : state.issued;
    if ((done & Bit(x)) != 0) return Fail("grd2", ins.id + " already issued");
    if (state.cursor[ins.issuer] != ins.index) {
      return Fail("grd3", ins.id + " is not next in program order");
    }
    return std::nullopt;
  }

  const MasterIndex m = ev.m.value_or(0);
  switch (ev.kind) {
    case EventKind::kObserveStoreWithoutFence:
    case EventKind::kObserveStoreWithFence: {
      const InstrIndex s = *ev.s;
      const Instruction& st = config_.instr(s);
      if ((state.issued & Bit(s)) == 0) return Fail("grd1", st.id + " not issued");
      if (st.kind != InstrKind::kStore) return Fail("grd2", st.id + " is not a STORE");
      if ((state.observers[s] & Bit(m)) != 0) {
        return Fail("grd3", "already observed by " + config_.masters[m]);
      }
      auto fence = StoreFence(state, s, m);
      if (ev.kind == EventKind::kObserveStoreWithoutFence) {
        if (fence) return Fail("grd4", "a fence has been issued");
        if (!AcquireHolds(state, s)) return Fail("grd5", "earlier acquire pending");
        return std::nullopt;
      }
      if ((state.issued_fence & Bit(*ev.f)) == 0) {
        return Fail("grd4", config_.instr(*ev.f).id + " not an issued fence");
      }
      if (fence != ev.f) return Fail("grd5", "fence is not the governing fence");
      if (!FencePoHolds(state, st.issuer, s, m)) {
        return Fail("grd6", "accesses ahead of the fence not yet performed");
      }
      if (!AcquireHolds(state, s)) return Fail("grd7", "earlier acquire pending");
      return std::nullopt;
    }

    case EventKind::kObserveLoadHappensBeforeWithFence:
    case EventKind::kObserveLoadAfterStoreWithFence:
    case EventKind::kObserveLoadWithoutFence:
    case EventKind::kObserveLoadAfterStoreWithoutFence: {
      const InstrIndex l = *ev.l;
      const Instruction& ld = config_.instr(l);
      if ((state.issued & Bit(l)) == 0) return Fail("grd1", ld.id + " not issued");
      if (ld.kind != InstrKind::kLoad) return Fail("grd2", ld.id + " is not a LOAD");
      if ((state.observers[l] & Bit(m)) != 0) {
        return Fail("grd3", "already observed by " + config_.masters[m]);
      }
      if (m != ld.issuer) return Fail("grd4", "observer is not the issuer");
      const bool with_fence =
          ev.kind == EventKind::kObserveLoadHappensBeforeWithFence ||
          ev.kind == EventKind::kObserveLoadAfterStoreWithFence;
      const bool after_store =
          ev.kind == EventKind::kObserveLoadAfterStoreWithFence ||
          ev.kind == EventKind::kObserveLoadAfterStoreWithoutFence;
      if (with_fence) {
        if ((state.issued_fence & Bit(*ev.f)) == 0) {
          return Fail("grd5", config_.instr(*ev.f).id + " not an issued fence");
        }
        if (LatestFence(state, m) != ev.f) {
          return Fail("grd6", "fence is not the issuer's latest fence");
        }
        if (!FencePoHolds(state, m, l, m)) {
          return Fail("grd7", "accesses ahead of the fence not yet performed");
        }
      } else if (LatestFence(state, m)) {
        return Fail("grd5", "issuer has issued a fence");
      }
      const AddrIndex addr = *ld.address;
      if (after_store) {
        const InstrIndex s = *ev.s;
        if ((state.issued & Bit(s)) == 0) {
          return Fail("grd8", config_.instr(s).id + " not issued");
        }
        if (!IsStore(config_.instr(s).kind)) {
          return Fail("grd9", config_.instr(s).id + " is not a STORE");
        }
        if (config_.instr(s).address != addr) return Fail("grd10", "address differs");
        if ((state.observers[s] & Bit(m)) == 0) {
          return Fail("grd11", "store not yet observed by the issuer");
        }
      } else if (!ev.s) {
        if (stores_to_[addr] != 0) {
          return Fail("grd8", "a store to the address exists");
        }
      } else {
        const InstrIndex s = *ev.s;
        if (!IsStore(config_.instr(s).kind)) {
          return Fail("grd8", config_.instr(s).id + " is not a STORE");
        }
        if (config_.instr(s).address != addr) return Fail("grd9", "address differs");
        if ((state.observers[s] & Bit(m)) != 0) {
          return Fail("grd10", "store already observed by the issuer");
        }
        if (with_fence && state.after[s] != 0) {
          return Fail("grd11", "a load was already observed after the store");
        }
      }
      if (!AcquireHolds(state, l)) return Fail("grd12", "earlier acquire pending");
      return std::nullopt;
    }

    case EventKind::kObserveScRelStore: {
      const InstrIndex s = *ev.s;
      const Instruction& st = config_.instr(s);
      if ((state.issued & Bit(s)) == 0) return Fail("grd1", st.id + " not issued");
      if (st.kind != InstrKind::kScRelStore) {
        return Fail("grd2", st.id + " is not a SCST.REL");
      }
      if ((state.observers[s] & Bit(m)) != 0) {
        return Fail("grd3", "already observed by " + config_.masters[m]);
      }
      if (!PerformedAll(state, po_pred_[s], m)) {
        return Fail("grd4", "release: earlier accesses not yet performed");
      }
      auto pos = std::find(state.atomic_order.begin(), state.atomic_order.end(), s);
      for (auto it = state.atomic_order.begin(); it != pos; ++it) {
        if (IsStore(config_.instr(*it).kind) &&
            (state.observers[*it] & Bit(m)) == 0) {
          return Fail("grd5", "atomic store " + config_.instr(*it).id +
                                  " precedes in the atomic order");
        }
      }
      if (!AcquireHolds(state, s)) return Fail("grd6", "earlier acquire pending");
      return std::nullopt;
    }

    case EventKind::kObserveScAcqLoad: {
      const InstrIndex l = *ev.l;
      const Instruction& ld = config_.instr(l);
      if ((state.issued & Bit(l)) == 0) return Fail("grd1", ld.id + " not issued");
      if (ld.kind != InstrKind::kScAcqLoad) {
        return Fail("grd2", ld.id + " is not a SCLD.ACQ");
      }
      if ((state.observers[l] & Bit(m)) != 0) {
        return Fail("grd3", "already observed by " + config_.masters[m]);
      }
      if (m != ld.issuer) return Fail("grd4", "observer is not the issuer");
      if (!FencePoHolds(state, m, l, m)) {
        return Fail("grd5", "accesses ahead of the fence not yet performed");
      }
      if (!AcquireHolds(state, l)) return Fail("grd6", "earlier acquire pending");
      return std::nullopt;
    }

    default:
      break;
  }
  return Fail("params", "unknown event");
}

MachineState Kernel::ApplyUnchecked(const MachineState& state,
                                    const EventDescriptor& ev) const {
  MachineState next = state;
  auto note_atomic = [&](InstrIndex x) {
    if (std::find(next.atomic_order.begin(), next.atomic_order.end(), x) ==
        next.atomic_order.end()) {
      next.atomic_order.push_back(x);
    }
  };
  switch (ev.kind) {
    case EventKind::kIssueStore:
    case EventKind::kIssueLoad:
    case EventKind::kIssueScRelStore:
    case EventKind::kIssueScAcqLoad: {
      InstrIndex x = ev.l ? *ev.l : *ev.s;
      next.issued |= Bit(x);
      next.observers[x] = 0;
      next.cursor[config_.instr(x).issuer] += 1;
      break;
    }
    case EventKind::kIssueFence:
      next.issued_fence |= Bit(*ev.f);
      next.cursor[config_.instr(*ev.f).issuer] += 1;
      break;
    case EventKind::kObserveStoreWithFence:
    case EventKind::kObserveStoreWithoutFence:
    case EventKind::kObserveScRelStore: {
      const Instruction& st = config_.instr(*ev.s);
      next.observed |= Bit(*ev.s);
      next.Lov(*ev.m, *st.address) = *st.value;
      next.observers[*ev.s] |= Bit(*ev.m);
      if (ev.kind == EventKind::kObserveScRelStore) note_atomic(*ev.s);
      break;
    }
    case EventKind::kObserveLoadHappensBeforeWithFence:
    case EventKind::kObserveLoadAfterStoreWithFence:
    case EventKind::kObserveLoadWithoutFence:
    case EventKind::kObserveLoadAfterStoreWithoutFence:
    case EventKind::kObserveScAcqLoad: {
      const Instruction& ld = config_.instr(*ev.l);
      next.observed |= Bit(*ev.l);
      next.observers[*ev.l] |= Bit(*ev.m);
      next.Rf(*ev.m, *ld.reg) = next.Lov(*ev.m, *ld.address);
      if (ev.kind == EventKind::kObserveLoadAfterStoreWithFence ||
          ev.kind == EventKind::kObserveLoadAfterStoreWithoutFence) {
        next.after[*ev.s] |= Bit(*ev.l);
      }
      if (ev.kind == EventKind::kObserveScAcqLoad) note_atomic(*ev.l);
      break;
    }
  }
  return next;
}

MachineState Kernel::Fire(const MachineState& state,
                          const EventDescriptor& ev) const {
  if (auto failure = CheckGuards(state, ev)) {
    throw GuardFailed(std::string(EventName(ev.kind)), failure->guard,
                      failure->detail);
  }
  return ApplyUnchecked(state, ev);
}

void Kernel::AppendLoadEvents(const MachineState& state, InstrIndex l,
                              std::vector<EventDescriptor>& out) const {
  const Instruction& ld = config_.instr(l);
  const MasterIndex m = ld.issuer;
  const auto fence = LatestFence(state, m);
  const EventKind before = fence ? EventKind::kObserveLoadHappensBeforeWithFence
                                 : EventKind::kObserveLoadWithoutFence;
  const EventKind after_store = fence
                                    ? EventKind::kObserveLoadAfterStoreWithFence
                                    : EventKind::kObserveLoadAfterStoreWithoutFence;
  const std::uint64_t stores = stores_to_[*ld.address];
  if (stores == 0) {
    out.push_back({before, l, std::nullopt, fence, m});
    return;
  }
  ForEachBit(stores, [&](std::uint32_t s) {
    if ((state.observers[s] & Bit(m)) == 0) {
      out.push_back({before, l, s, fence, m});
    } else {
      out.push_back({after_store, l, s, fence, m});
    }
  });
}

std::vector<EventDescriptor> Kernel::Enabled(const MachineState& state) const {
  std::vector<EventDescriptor> candidates;
  for (MasterIndex m = 0; m < config_.num_masters(); ++m) {
    const auto& prog = config_.programs[m];
    std::uint32_t c = state.cursor[m];
    if (c < 1 || c > prog.size()) continue;
    InstrIndex x = prog[c - 1];
    EventDescriptor ev;
    ev.kind = IssueEventFor(config_.instr(x).kind);
    if (ev.kind == EventKind::kIssueFence) {
      ev.f = x;
    } else if (IsLoad(config_.instr(x).kind)) {
      ev.l = x;
    } else {
      ev.s = x;
    }
    candidates.push_back(ev);
  }
  ForEachBit(state.issued, [&](std::uint32_t x) {
    const Instruction& ins = config_.instr(x);
    switch (ins.kind) {
      case InstrKind::kStore:
        for (MasterIndex m = 0; m < config_.num_masters(); ++m) {
          if ((state.observers[x] & Bit(m)) != 0) continue;
          auto fence = StoreFence(state, x, m);
          candidates.push_back({fence ? EventKind::kObserveStoreWithFence
                                      : EventKind::kObserveStoreWithoutFence,
                                std::nullopt, x, fence, m});
        }
        break;
      case InstrKind::kScRelStore:
        for (MasterIndex m = 0; m < config_.num_masters(); ++m) {
          if ((state.observers[x] & Bit(m)) != 0) continue;
          candidates.push_back({EventKind::kObserveScRelStore, std::nullopt, x,
                                std::nullopt, m});
        }
        break;
      case InstrKind::kLoad:
        if (state.observers[x] == 0) AppendLoadEvents(state, x, candidates);
        break;
      case InstrKind::kScAcqLoad:
        if (state.observers[x] == 0) {
          candidates.push_back({EventKind::kObserveScAcqLoad, x, std::nullopt,
                                std::nullopt, ins.issuer});
        }
        break;
      case InstrKind::kFence:
        break;
    }
  });
  std::vector<EventDescriptor> out;
  out.reserve(candidates.size());
  for (const auto& ev : candidates) {
    if (!CheckGuards(state, ev)) out.push_back(ev);
  }
  return out;
}

Value Kernel::LoadReturnValue(const MachineState& state, MasterIndex m,
                              InstrIndex l) const {
  if (l >= config_.num_instructions() || !IsLoad(config_.instr(l).kind)) {
    throw UnknownLoad("not a load: #" + std::to_string(l));
  }
  const Instruction& ld = config_.instr(l);
  if (m >= config_.num_masters() || ld.issuer != m) {
    throw UnknownLoad(ld.id + " is not issued by the given master");
  }
  return state.Lov(m, *ld.address);
}

std::vector<InvariantViolation> Kernel::CheckInvariants(
    const MachineState& st) const {
  std::vector<InvariantViolation> out;
  const std::size_t n = config_.num_instructions();
  const std::size_t masters = config_.num_masters();
  auto ids = [&](std::uint64_t mask) {
    std::string s;
    ForEachBit(mask, [&](std::uint32_t i) {
      if (!s.empty()) s += ",";
      s += i < n ? config_.instr(i).id : "#" + std::to_string(i);
    });
    return "{" + s + "}";
  };
  if (st.observers.size() != n || st.after.size() != n ||
      st.cursor.size() != masters ||
      st.addr_count != config_.addresses.size() ||
      st.reg_count != config_.registers.size()) {
    out.push_back({"shape", "state dimensions do not match the configuration"});
    return out;
  }
  if (st.lov.size() != masters * st.addr_count) {
    out.push_back({"lov-total", "lov is not total on masters x addresses"});
  }
  if (st.rf.size() != masters * st.reg_count) {
    out.push_back({"rf-total", "rf is not total on masters x registers"});
  }
  if ((st.issued & ~access_mask()) != 0) {
    out.push_back({"inv1", "issued contains non-accesses " +
                               ids(st.issued & ~access_mask())});
  }
  if ((st.observed & ~st.issued) != 0) {
    out.push_back({"inv2", "observed not subset of issued: " +
                               ids(st.observed & ~st.issued)});
  }
  if ((st.issued_fence & ~fence_mask_) != 0) {
    out.push_back({"issuedfence", "issuedfence contains non-fences " +
                                      ids(st.issued_fence & ~fence_mask_)});
  }
  std::uint64_t seen_by_someone = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = static_cast<InstrIndex>(i);
    if (st.observers[i] != 0) seen_by_someone |= Bit(x);
    if (st.observers[i] != 0 && (st.issued & Bit(x)) == 0) {
      out.push_back({"observers-domain",
                     config_.instr(x).id + " has observers but is not issued"});
    }
    if ((st.observers[i] & ~all_masters_) != 0) {
      out.push_back({"observers-range",
                     config_.instr(x).id + " observed by unknown master"});
    }
    if (IsLoad(config_.instr(x).kind) &&
        (st.observers[i] & ~Bit(config_.instr(x).issuer)) != 0) {
      out.push_back({"grd4-load-observers",
                     config_.instr(x).id + " observed by a non-issuer"});
    }
    if (st.after[i] != 0) {
      if (!IsStore(config_.instr(x).kind) || (st.issued & Bit(x)) == 0) {
        out.push_back({"after-domain",
                       config_.instr(x).id + " is not an issued store"});
      }
      ForEachBit(st.after[i], [&](std::uint32_t l) {
        if (l >= n || !IsLoad(config_.instr(l).kind) ||
            (st.issued & Bit(l)) == 0 ||
            config_.instr(l).address != config_.instr(x).address) {
          out.push_back({"after-range", "after(" + config_.instr(x).id +
                                            ") contains unrelated " +
                                            ids(Bit(l))});
        }
      });
    }
  }
  if (seen_by_someone != st.observed) {
    out.push_back({"observed-observers",
                   "observed differs from accesses with observers"});
  }
  for (std::size_t m = 0; m < masters; ++m) {
    if (st.cursor[m] < 1 || st.cursor[m] > config_.programs[m].size() + 1) {
      out.push_back({"cursor-range", config_.masters[m] + " cursor out of range"});
    }
  }
  std::uint64_t in_order = 0;
  for (InstrIndex x : st.atomic_order) {
    if (x >= n || !IsAtomic(config_.instr(x).kind) ||
        (st.observed & Bit(x)) == 0 || (in_order & Bit(x)) != 0) {
      out.push_back({"atomic-order", "atomic order holds an invalid entry"});
      break;
    }
    in_order |= Bit(x);
  }
  return out;
}

MachineState InitState(const SystemConfig& config) {
  return Kernel(config).Init();
}

std::vector<EventDescriptor> EnabledEvents(const MachineState& state,
                                           const SystemConfig& config) {
  return Kernel(config).Enabled(state);
}

MachineState Fire(const MachineState& state, const SystemConfig& config,
                  const EventDescriptor& ev) {
  return Kernel(config).Fire(state, ev);
}

Value LoadReturnValue(const MachineState& state, const SystemConfig& config,
                      MasterIndex m, InstrIndex l) {
  return Kernel(config).LoadReturnValue(state, m, l);
}

std::vector<InvariantViolation> CheckStateInvariants(
    const MachineState& state, const SystemConfig& config) {
  return Kernel(config).CheckInvariants(state);
}

}  // namespace hsamm
