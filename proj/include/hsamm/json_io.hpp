#ifndef HSAMM_JSON_IO_HPP_
#define HSAMM_JSON_IO_HPP_

#include <nlohmann/json.hpp>

#include "hsamm/coverage.hpp"
#include "hsamm/explorer.hpp"
#include "hsamm/testgen.hpp"

namespace hsamm {

using Json = nlohmann::ordered_json;

// {"event": "ObserveStoreWithoutFence", "s": "I11", "m": "M2"}
Json EventToJson(const SystemConfig& config, const EventDescriptor& ev);
// Throws std::invalid_argument for unknown names or ids.
EventDescriptor EventFromJson(const SystemConfig& config, const Json& j);

Json TraceToJson(const SystemConfig& config, const Trace& trace);
Trace TraceFromJson(const SystemConfig& config, const Json& j);

Json RegistersToJson(const RegisterValues& regs);
RegisterValues RegistersFromJson(const Json& j);

Json VerdictToJson(const LitmusTest& test, const Verdict& v);
Json ExplorationToJson(const SystemConfig& config, const ExplorationResult& r);
Json CoverageToJson(const LitmusTest& test, const CoverageReport& report);
Json EventCoverageToJson(const std::vector<std::string>& names,
                         const EventCoverageReport& report);

// {name, litmus, steps, expected, goal?, allowed?}
Json TestCaseToJson(const TestCase& tc);
TestCase TestCaseFromJson(const Json& j);

Json ClassToJson(const ProgramClass& cls);
Json ManifestToJson(const ProgramClass& cls, std::size_t count,
                    std::uint64_t seed, const Suite& suite);

}  // namespace hsamm

#endif  // HSAMM_JSON_IO_HPP_
