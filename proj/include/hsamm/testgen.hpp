#ifndef HSAMM_TESTGEN_HPP_
#define HSAMM_TESTGEN_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hsamm/coverage.hpp"
#include "hsamm/explorer.hpp"
#include "hsamm/litmus.hpp"

namespace hsamm {

using EventMask = std::uint32_t;  // bit per EventKind

inline EventMask EventBit(EventKind k) {
  return EventMask{1} << static_cast<unsigned>(k);
}

struct TestTarget {
  // Either a coverage point "M2:C0,M3:C0" (master, combo index) ...
  std::vector<std::pair<MasterIndex, std::size_t>> combos;
  // ... or an outcome predicate. Neither means "any triggered state".
  std::optional<OutcomePredicate> predicate;
  EventMask must_cover = 0;
  // Forbid observe events outside must_cover. Issue events stay allowed.
  bool only_these = false;

  bool Holds(const LitmusTest& test, const MachineState& state) const;
};

// Parses "M2:C0,M3:C0" or an outcome expression such as "M2:R1 = 1 /\ ...".
TestTarget ParseTarget(std::string_view text, const LitmusTest& test);
std::string FormatTarget(const TestTarget& target, const LitmusTest& test);

// Event names, comma separated. Throws std::invalid_argument.
EventMask ParseEventList(std::string_view text);

// master name -> register name -> value
using RegisterValues = std::map<std::string, std::map<std::string, Value>>;

RegisterValues NamedRegisters(const SystemConfig& config, const RegisterMap& rf);

struct TestCase {
  std::string name;
  std::string litmus;  // canonical source
  Trace trace;
  RegisterValues expected;  // registers of the final replayed state
  std::optional<std::string> goal;
  // Full allowed-outcome set, for tests meant to run on a weak platform.
  std::optional<std::vector<RegisterValues>> allowed;

  bool operator==(const TestCase&) const = default;
};

// Shortest trace to a triggered state satisfying `target` that fires every
// must_cover event. Throws Unreachable or StateLimitExceeded.
TestCase FindTrace(const LitmusTest& test, const TestTarget& target,
                   std::uint64_t max_states = 10'000'000);

struct VerifyResult {
  bool ok = true;
  std::string message;
  std::optional<std::size_t> step;  // failing replay step
};

VerifyResult VerifyTest(const TestCase& tc);

enum class SyncPolicy { kNone, kFenceAfterFirstLoad, kReleaseAcquire };

std::string_view PolicyName(SyncPolicy p);
std::optional<SyncPolicy> PolicyFromName(std::string_view name);

struct Bounds {
  std::size_t min_length = 0;
  std::size_t max_length = 0;
  // Empty means the kinds that occur in the seed.
  std::vector<InstrKind> kinds;
  SyncPolicy policy = SyncPolicy::kNone;
};

struct ProgramClass {
  std::string name;
  std::vector<std::string> masters;
  std::vector<std::string> registers;
  std::vector<std::string> addresses;
  std::vector<Value> initial_memory;  // per address
  std::vector<Value> store_values;    // values a sampled store may write
  std::size_t min_length = 0;
  std::size_t max_length = 0;
  std::vector<InstrKind> kinds;
  SyncPolicy policy = SyncPolicy::kNone;
};

// Throws InvalidBounds.
ProgramClass Generalize(const LitmusTest& seed, const Bounds& bounds);

// Why `test` is outside the class, or nullopt when it belongs to it.
std::optional<std::string> ClassRejects(const ProgramClass& cls,
                                        const LitmusTest& test);

// Whether the sync policy holds for the programs of `config`.
bool PolicyHolds(SyncPolicy policy, const SystemConfig& config);

// One pseudo-random member of the class, fully determined by `sample_seed`.
// nullopt when the sampled programs contain no load, since an outcome needs a
// register to talk about.
std::optional<LitmusTest> SampleProgram(const ProgramClass& cls,
                                        std::uint64_t sample_seed,
                                        const std::string& name);

struct SampleRecord {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  std::string name;
  bool skipped = false;
  std::string reason;
};

struct Suite {
  std::vector<TestCase> cases;
  std::vector<SampleRecord> samples;
};

// Per-sample seeds of a suite, derived from `seed` with splitmix64.
std::vector<std::uint64_t> SampleSeeds(std::uint64_t seed, std::size_t count);

Suite GenerateSuite(const ProgramClass& cls, std::size_t count,
                    std::uint64_t seed, std::uint64_t max_states = 1'000'000);

// Test case for one sampled program: a shortest trace to the first final
// state plus every allowed final register file.
TestCase PlatformTest(const LitmusTest& test, std::uint64_t max_states);

}  // namespace hsamm

#endif  // HSAMM_TESTGEN_HPP_
