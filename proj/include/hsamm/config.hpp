#ifndef HSAMM_CONFIG_HPP_
#define HSAMM_CONFIG_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hsamm {

using Value = std::int64_t;

// Dense indices into the tables of a SystemConfig. They are only meaningful
// together with the config that produced them.
using InstrIndex = std::uint32_t;
using MasterIndex = std::uint32_t;
using AddrIndex = std::uint32_t;
using RegIndex = std::uint32_t;

// Bit masks over instructions and masters limit a configuration to 64 of each.
inline constexpr std::size_t kMaxInstructions = 64;
inline constexpr std::size_t kMaxMasters = 64;

enum class InstrKind { kStore, kLoad, kScRelStore, kScAcqLoad, kFence };

inline bool IsMemAccess(InstrKind k) { return k != InstrKind::kFence; }
inline bool IsStore(InstrKind k) {
  return k == InstrKind::kStore || k == InstrKind::kScRelStore;
}
inline bool IsLoad(InstrKind k) {
  return k == InstrKind::kLoad || k == InstrKind::kScAcqLoad;
}
inline bool IsAtomic(InstrKind k) {
  return k == InstrKind::kScRelStore || k == InstrKind::kScAcqLoad;
}

// Litmus mnemonic: ST, LD, SCST.REL, SCLD.ACQ, FENCE.
std::string_view Mnemonic(InstrKind k);
std::optional<InstrKind> KindFromMnemonic(std::string_view s);

struct Instruction {
  std::string id;
  InstrKind kind = InstrKind::kFence;
  MasterIndex issuer = 0;
  std::uint32_t index = 0;  // 1-based program position
  std::optional<AddrIndex> address;  // memory accesses only
  std::optional<Value> value;        // stores only
  std::optional<RegIndex> reg;       // loads only

  bool operator==(const Instruction&) const = default;
};

// The finite universe a litmus test runs in: masters, their programs and the
// address/register/value domains.
struct SystemConfig {
  std::vector<std::string> masters;
  std::vector<std::string> addresses;
  std::vector<std::string> registers;
  std::vector<Value> values;          // sorted, contains 0
  std::vector<Value> initial_memory;  // indexed by AddrIndex
  std::vector<Instruction> instructions;
  std::vector<std::vector<InstrIndex>> programs;  // per master, in order

  bool operator==(const SystemConfig&) const = default;

  std::size_t num_masters() const { return masters.size(); }
  std::size_t num_instructions() const { return instructions.size(); }
  const Instruction& instr(InstrIndex i) const { return instructions[i]; }

  std::optional<InstrIndex> FindInstruction(std::string_view id) const;
  std::optional<MasterIndex> FindMaster(std::string_view name) const;
  std::optional<AddrIndex> FindAddress(std::string_view name) const;
  std::optional<RegIndex> FindRegister(std::string_view name) const;
};

// Problems with the config; empty when all config invariants hold.
std::vector<std::string> ConfigProblems(const SystemConfig& config);

// Throws InvalidConfig when ConfigProblems is nonempty.
void ValidateConfig(const SystemConfig& config);

// Memory accesses of issuer(fence) with a smaller program index. Throws
// NotAFence.
std::vector<InstrIndex> AheadOf(const SystemConfig& config, InstrIndex fence);

// Bit mask form of AheadOf.
std::uint64_t AheadMask(const SystemConfig& config, InstrIndex fence);

inline std::uint64_t Bit(std::uint32_t i) { return std::uint64_t{1} << i; }

}  // namespace hsamm

#endif  // HSAMM_CONFIG_HPP_
