#ifndef HSAMM_EXPLORER_HPP_
#define HSAMM_EXPLORER_HPP_

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hsamm/kernel.hpp"
#include "hsamm/litmus.hpp"

namespace hsamm {

// Order-independent byte encoding of a state; equal states give equal keys.
std::string CanonicalKey(const MachineState& state);

struct ExploreOptions {
  std::uint64_t max_states = 10'000'000;
  bool check_invariants = false;
  unsigned workers = 1;
  // When set, register files of every state whose watched loads are all
  // observed are collected into ExplorationResult::trigger_register_maps.
  std::optional<std::uint64_t> watched_loads;
  // The first state (in BFS order) satisfying `goal` is reported with its
  // shortest trace as ExplorationResult::violation.
  std::function<bool(const MachineState&)> goal;
  bool stop_at_goal = false;
  // Return a truncated result instead of throwing StateLimitExceeded.
  bool allow_partial = false;
};

struct Witness {
  MachineState state;
  Trace trace;
};

struct InvariantFailure {
  std::vector<InvariantViolation> violations;
  Witness witness;
};

using RegisterMap = std::vector<Value>;  // MachineState::rf layout

struct ExplorationResult {
  std::uint64_t state_count = 0;
  std::uint64_t transition_count = 0;
  std::vector<MachineState> final_states;
  std::set<RegisterMap> final_register_maps;
  std::set<RegisterMap> trigger_register_maps;
  std::optional<Witness> violation;
  std::optional<InvariantFailure> invariant_failure;
  std::array<std::uint64_t, kEventKindCount> event_tally{};
  // Final states in which some instruction is unissued or some load is
  // unobserved.
  std::uint64_t stuck_states = 0;
  bool complete = true;
};

ExplorationResult Explore(const SystemConfig& config,
                          const ExploreOptions& opts = {});

struct Verdict {
  enum class Kind { kHolds, kViolated, kReachable, kUnreachable };
  Kind kind = Kind::kHolds;
  std::uint64_t state_count = 0;
  std::uint64_t transition_count = 0;
  std::optional<Witness> witness;
};

std::string_view VerdictName(Verdict::Kind kind);

// Whether every watched load of `test` is observed in `state`.
bool Triggered(const LitmusTest& test, const MachineState& state);

// Evaluates "watched loads observed implies outcome" at every reachable state.
// Forbidden/required tests give Holds or Violated (with a shortest
// counterexample); allowed tests give Reachable (with witness) or Unreachable.
Verdict CheckOutcome(const LitmusTest& test, ExploreOptions opts = {});

enum class ReplayMode { kStrict, kUnchecked };

MachineState Replay(const SystemConfig& config, const Trace& trace,
                    ReplayMode mode = ReplayMode::kStrict);

struct PropertyResult {
  enum class Status { kPass, kFail, kNotApplicable };
  Status status = Status::kPass;
  std::string witness;
};

std::string_view StatusName(PropertyResult::Status status);

struct OrderingReport {
  PropertyResult po;
  PropertyResult co;
  PropertyResult hb;
  bool ok() const {
    return po.status != PropertyResult::Status::kFail &&
           co.status != PropertyResult::Status::kFail &&
           hb.status != PropertyResult::Status::kFail;
  }
};

// Checks program order, coherence and happens-before on one concrete trace.
OrderingReport CheckTraceOrderings(const SystemConfig& config,
                                   const Trace& trace,
                                   ReplayMode mode = ReplayMode::kStrict);

}  // namespace hsamm

#endif  // HSAMM_EXPLORER_HPP_
