#include "hsamm/config.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "hsamm/errors.hpp"

namespace hsamm {

namespace {

std::string JoinProblems(const std::vector<std::string>& problems) {
  std::ostringstream os;
  os << "invalid configuration";
  for (const auto& p : problems) os << "; " << p;
  return os.str();
}

template <class T>
std::optional<std::uint32_t> IndexOf(const std::vector<T>& v,
                                     std::string_view name) {
  auto it = std::find(v.begin(), v.end(), name);
  if (it == v.end()) return std::nullopt;
  return static_cast<std::uint32_t>(it - v.begin());
}

}  // namespace

InvalidConfig::InvalidConfig(std::vector<std::string> problems)
    : Error(JoinProblems(problems)), problems_(std::move(problems)) {}

std::string_view Mnemonic(InstrKind k) {
  switch (k) {
    case InstrKind::kStore:
      return "ST";
    case InstrKind::kLoad:
      return "LD";
    case InstrKind::kScRelStore:
      return "SCST.REL";
    case InstrKind::kScAcqLoad:
      return "SCLD.ACQ";
    case InstrKind::kFence:
      return "FENCE";
  }
  return "?";
}

std::optional<InstrKind> KindFromMnemonic(std::string_view s) {
  for (auto k : {InstrKind::kStore, InstrKind::kLoad, InstrKind::kScRelStore,
                 InstrKind::kScAcqLoad, InstrKind::kFence}) {
    if (Mnemonic(k) == s) return k;
  }
  return std::nullopt;
}

std::optional<InstrIndex> SystemConfig::FindInstruction(
    std::string_view id) const {
  for (std::size_t i = 0; i < instructions.size(); ++i) {
    if (instructions[i].id == id) return static_cast<InstrIndex>(i);
  }
  return std::nullopt;
}

std::optional<MasterIndex> SystemConfig::FindMaster(
    std::string_view name) const {
  return IndexOf(masters, name);
}

std::optional<AddrIndex> SystemConfig::FindAddress(
    std::string_view name) const {
  return IndexOf(addresses, name);
}

std::optional<RegIndex> SystemConfig::FindRegister(
    std::string_view name) const {
  return IndexOf(registers, name);
}

std::vector<std::string> ConfigProblems(const SystemConfig& c) {
  std::vector<std::string> out;
  if (c.masters.size() > kMaxMasters) {
    out.push_back("more than " + std::to_string(kMaxMasters) + " masters");
  }
  if (c.instructions.size() > kMaxInstructions) {
    out.push_back("more than " + std::to_string(kMaxInstructions) +
                  " instructions");
  }
  if (c.programs.size() != c.masters.size()) {
    out.push_back("program count does not match master count");
    return out;
  }
  if (c.initial_memory.size() != c.addresses.size()) {
    out.push_back("initial memory is not total on addresses");
  }
  if (!std::is_sorted(c.values.begin(), c.values.end()) ||
      std::adjacent_find(c.values.begin(), c.values.end()) != c.values.end()) {
    out.push_back("value domain is not sorted and unique");
  }
  if (!std::binary_search(c.values.begin(), c.values.end(), Value{0})) {
    out.push_back("value domain does not contain 0");
  }
  auto in_values = [&](Value v) {
    return std::binary_search(c.values.begin(), c.values.end(), v);
  };
  for (std::size_t a = 0; a < c.initial_memory.size(); ++a) {
    if (!in_values(c.initial_memory[a])) {
      out.push_back("initial value of " + c.addresses[a] +
                    " outside value domain");
    }
  }

  std::set<std::string> ids;
  std::vector<int> seen(c.instructions.size(), 0);
  for (std::size_t m = 0; m < c.programs.size(); ++m) {
    const auto& prog = c.programs[m];
    for (std::size_t pos = 0; pos < prog.size(); ++pos) {
      InstrIndex i = prog[pos];
      if (i >= c.instructions.size()) {
        out.push_back("program of " + c.masters[m] +
                      " references unknown instruction");
        continue;
      }
      ++seen[i];
      const Instruction& ins = c.instructions[i];
      if (ins.issuer != m) {
        out.push_back(ins.id + " is not issued by the master owning it");
      }
      if (ins.index != pos + 1) {
        out.push_back(ins.id + " index does not match program position");
      }
    }
  }
  for (std::size_t i = 0; i < c.instructions.size(); ++i) {
    const Instruction& ins = c.instructions[i];
    if (!ids.insert(ins.id).second) {
      out.push_back("duplicate instruction id " + ins.id);
    }
    if (seen[i] != 1) {
      out.push_back(ins.id + " must appear in exactly one program");
    }
    bool access = IsMemAccess(ins.kind);
    if (access != ins.address.has_value()) {
      out.push_back(ins.id + " address presence does not match kind");
    }
    if (IsStore(ins.kind) != ins.value.has_value()) {
      out.push_back(ins.id + " value presence does not match kind");
    }
    if (IsLoad(ins.kind) != ins.reg.has_value()) {
      out.push_back(ins.id + " register presence does not match kind");
    }
    if (ins.address && *ins.address >= c.addresses.size()) {
      out.push_back(ins.id + " references unknown address");
    }
    if (ins.reg && *ins.reg >= c.registers.size()) {
      out.push_back(ins.id + " references unknown register");
    }
    if (ins.value && !in_values(*ins.value)) {
      out.push_back(ins.id + " stores a value outside the value domain");
    }
  }
  return out;
}

void ValidateConfig(const SystemConfig& config) {
  auto problems = ConfigProblems(config);
  if (!problems.empty()) throw InvalidConfig(std::move(problems));
}

std::vector<InstrIndex> AheadOf(const SystemConfig& config, InstrIndex fence) {
  if (fence >= config.instructions.size() ||
      config.instr(fence).kind != InstrKind::kFence) {
    throw NotAFence(fence < config.instructions.size()
                        ? config.instr(fence).id
                        : "#" + std::to_string(fence));
  }
  const Instruction& f = config.instr(fence);
  std::vector<InstrIndex> out;
  for (InstrIndex i : config.programs[f.issuer]) {
    const Instruction& ins = config.instr(i);
    if (ins.index < f.index && IsMemAccess(ins.kind)) out.push_back(i);
  }
  return out;
}

std::uint64_t AheadMask(const SystemConfig& config, InstrIndex fence) {
  std::uint64_t mask = 0;
  for (InstrIndex i : AheadOf(config, fence)) mask |= Bit(i);
  return mask;
}

}  // namespace hsamm
