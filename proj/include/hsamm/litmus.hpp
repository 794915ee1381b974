#ifndef HSAMM_LITMUS_HPP_
#define HSAMM_LITMUS_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hsamm/config.hpp"

namespace hsamm {

struct OutcomeAtom {
  std::string master;
  std::string reg;
  Value value = 0;
  // Resolved against the owning test's config.
  MasterIndex m = 0;
  RegIndex r = 0;
  // Source position, for diagnostics only.
  std::size_t line = 0;
  std::size_t column = 0;

  bool operator==(const OutcomeAtom& o) const {
    return master == o.master && reg == o.reg && value == o.value;
  }
};

// Boolean expression over register atoms "M:R = v".
struct OutcomePredicate {
  enum class Op { kAtom, kNot, kAnd, kOr };

  Op op = Op::kAtom;
  OutcomeAtom atom;
  std::vector<OutcomePredicate> operands;

  static OutcomePredicate Atom(OutcomeAtom a);
  static OutcomePredicate Not(OutcomePredicate p);
  static OutcomePredicate And(OutcomePredicate a, OutcomePredicate b);
  static OutcomePredicate Or(OutcomePredicate a, OutcomePredicate b);

  // `rf` is laid out as MachineState::rf (master-major, reg_count per master).
  bool Evaluate(std::span<const Value> rf, std::size_t reg_count) const;

  bool operator==(const OutcomePredicate&) const = default;
};

enum class OutcomeMode { kForbidden, kRequired, kAllowed };

std::string_view ModeName(OutcomeMode mode);

struct LitmusTest {
  std::string name;
  SystemConfig config;
  OutcomePredicate outcome;
  OutcomeMode mode = OutcomeMode::kForbidden;
  std::uint64_t watched_loads = 0;  // bit mask over InstrIndex

  bool operator==(const LitmusTest&) const = default;
};

// Parses litmus source. Throws ParseError for syntax errors and
// ValidationError for well-formed sources that break a naming rule.
LitmusTest Parse(std::string_view text);

// Canonical source text; Parse(Format(t)) == t for every parsed t.
std::string Format(const LitmusTest& test);

// Canonical text of an outcome expression, without the surrounding parens.
std::string FormatOutcome(const OutcomePredicate& p);

// Parses an outcome expression against the masters/registers/values of
// `config`. Throws ParseError / ValidationError.
OutcomePredicate ParseOutcome(std::string_view text,
                              const SystemConfig& config);

inline const SystemConfig& ToConfig(const LitmusTest& test) {
  return test.config;
}

// All loads of the config as a mask.
std::uint64_t AllLoads(const SystemConfig& config);

}  // namespace hsamm

#endif  // HSAMM_LITMUS_HPP_
