#ifndef HSAMM_KERNEL_HPP_
#define HSAMM_KERNEL_HPP_

#include <array>
#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hsamm/config.hpp"

namespace hsamm {

// Machine variables of the operational model. Sets over instructions and
// masters are bit masks indexed by InstrIndex / MasterIndex of the config the
// state belongs to.
struct MachineState {
  std::uint32_t addr_count = 0;
  std::uint32_t reg_count = 0;

  std::uint64_t issued = 0;        // issued memory accesses
  std::uint64_t observed = 0;      // accesses observed by at least one master
  std::uint64_t issued_fence = 0;  // issued fences
  std::vector<std::uint64_t> observers;  // per instruction: masters
  std::vector<std::uint64_t> after;      // per store: loads observed after it
  std::vector<Value> lov;                // last observed value, per master
  std::vector<Value> rf;                 // register file, per master
  std::vector<std::uint32_t> cursor;     // next 1-based program index
  std::vector<InstrIndex> atomic_order;  // atomics by first observation

  Value Lov(MasterIndex m, AddrIndex a) const { return lov[m * addr_count + a]; }
  Value& Lov(MasterIndex m, AddrIndex a) { return lov[m * addr_count + a]; }
  Value Rf(MasterIndex m, RegIndex r) const { return rf[m * reg_count + r]; }
  Value& Rf(MasterIndex m, RegIndex r) { return rf[m * reg_count + r]; }

  bool operator==(const MachineState&) const = default;
};

enum class EventKind : std::uint8_t {
  kIssueStore,
  kIssueLoad,
  kIssueFence,
  kIssueScRelStore,
  kIssueScAcqLoad,
  kObserveStoreWithFence,
  kObserveStoreWithoutFence,
  kObserveLoadHappensBeforeWithFence,
  kObserveLoadAfterStoreWithFence,
  kObserveLoadWithoutFence,
  kObserveLoadAfterStoreWithoutFence,
  kObserveScRelStore,
  kObserveScAcqLoad,
};

inline constexpr std::size_t kEventKindCount = 13;

inline constexpr std::array<EventKind, kEventKindCount> kAllEventKinds = {
    EventKind::kIssueStore,
    EventKind::kIssueLoad,
    EventKind::kIssueFence,
    EventKind::kIssueScRelStore,
    EventKind::kIssueScAcqLoad,
    EventKind::kObserveStoreWithFence,
    EventKind::kObserveStoreWithoutFence,
    EventKind::kObserveLoadHappensBeforeWithFence,
    EventKind::kObserveLoadAfterStoreWithFence,
    EventKind::kObserveLoadWithoutFence,
    EventKind::kObserveLoadAfterStoreWithoutFence,
    EventKind::kObserveScRelStore,
    EventKind::kObserveScAcqLoad,
};

std::string_view EventName(EventKind k);
std::optional<EventKind> EventKindFromName(std::string_view name);
bool IsIssueEvent(EventKind k);

// One event instance. Parameters follow the event's signature: l (load),
// s (store), f (fence), m (master).
struct EventDescriptor {
  EventKind kind = EventKind::kIssueStore;
  std::optional<InstrIndex> l;
  std::optional<InstrIndex> s;
  std::optional<InstrIndex> f;
  std::optional<MasterIndex> m;

  bool operator==(const EventDescriptor&) const = default;
  auto operator<=>(const EventDescriptor&) const = default;
};

using Trace = std::vector<EventDescriptor>;

// Human-readable rendering, e.g. "ObserveStoreWithoutFence(s=I11, m=M2)".
std::string Describe(const SystemConfig& config, const EventDescriptor& ev);

struct GuardFailure {
  std::string guard;
  std::string detail;
};

struct InvariantViolation {
  std::string invariant;
  std::string witness;
};

// Guarded-transition semantics over one SystemConfig. Construction validates
// the config and precomputes the static relations (ahead sets, program-order
// predecessors, stores per address); all operations are const and pure.
class Kernel {
 public:
  explicit Kernel(SystemConfig config);

  const SystemConfig& config() const { return config_; }

  MachineState Init() const;

  std::vector<EventDescriptor> Enabled(const MachineState& state) const;

  // nullopt when every guard of `ev` holds in `state`.
  std::optional<GuardFailure> CheckGuards(const MachineState& state,
                                          const EventDescriptor& ev) const;

  // Throws GuardFailed when a guard does not hold.
  MachineState Fire(const MachineState& state, const EventDescriptor& ev) const;

  // Applies the actions of `ev` without evaluating its guards. Parameters
  // must still be well-formed for the event.
  MachineState ApplyUnchecked(const MachineState& state,
                              const EventDescriptor& ev) const;

  Value LoadReturnValue(const MachineState& state, MasterIndex m,
                        InstrIndex l) const;

  std::vector<InvariantViolation> CheckInvariants(
      const MachineState& state) const;

  // Whether access `a` has taken effect for master `m`: stores once m observed
  // them, loads once their issuer observed them.
  bool Performed(const MachineState& state, InstrIndex a, MasterIndex m) const;

  // Most recently issued fence of master `m` (highest program index).
  std::optional<InstrIndex> LatestFence(const MachineState& state,
                                        MasterIndex m) const;

  std::uint64_t ahead_mask(InstrIndex fence) const { return ahead_[fence]; }
  std::uint64_t load_mask() const { return load_mask_; }
  std::uint64_t store_mask() const { return store_mask_; }
  std::uint64_t access_mask() const { return load_mask_ | store_mask_; }
  std::uint64_t fence_mask() const { return fence_mask_; }
  std::uint64_t stores_to(AddrIndex a) const { return stores_to_[a]; }
  std::uint64_t all_masters() const { return all_masters_; }

 private:
  bool PerformedAll(const MachineState& state, std::uint64_t accesses,
                    MasterIndex m) const;
  bool FencePoHolds(const MachineState& state, MasterIndex fence_owner,
                    InstrIndex x, MasterIndex m) const;
  bool AcquireHolds(const MachineState& state, InstrIndex x) const;
  std::optional<InstrIndex> StoreFence(const MachineState& state,
                                       InstrIndex s, MasterIndex m) const;
  void AppendLoadEvents(const MachineState& state, InstrIndex l,
                        std::vector<EventDescriptor>& out) const;

  SystemConfig config_;
  std::vector<std::uint64_t> ahead_;     // per fence
  std::vector<std::uint64_t> po_pred_;   // accesses earlier in issuer's program
  std::vector<std::uint64_t> acq_pred_;  // SCLD.ACQ earlier in issuer's program
  std::vector<std::vector<InstrIndex>> fences_of_;  // per master, po order
  std::vector<std::uint64_t> stores_to_;            // per address
  std::uint64_t load_mask_ = 0;
  std::uint64_t store_mask_ = 0;
  std::uint64_t fence_mask_ = 0;
  std::uint64_t all_masters_ = 0;
};

// Free-function forms of the kernel operations.
MachineState InitState(const SystemConfig& config);
std::vector<EventDescriptor> EnabledEvents(const MachineState& state,
                                           const SystemConfig& config);
MachineState Fire(const MachineState& state, const SystemConfig& config,
                  const EventDescriptor& ev);
Value LoadReturnValue(const MachineState& state, const SystemConfig& config,
                      MasterIndex m, InstrIndex l);
std::vector<InvariantViolation> CheckStateInvariants(
    const MachineState& state, const SystemConfig& config);

}  // namespace hsamm

#endif  // HSAMM_KERNEL_HPP_
