#ifndef HSAMM_TESTS_ORACLE_REFERENCE_MODEL_HPP_
#define HSAMM_TESTS_ORACLE_REFERENCE_MODEL_HPP_

#include <cstdint>
#include <map>
#include <set>
#include <string>

#include "hsamm/config.hpp"

namespace oracle {

// master -> register -> value
using Registers = std::map<std::string, std::map<std::string, std::int64_t>>;

struct Result {
  std::set<Registers> final_maps;
  std::set<Registers> trigger_maps;  // all loads observed
  std::uint64_t distinct_states = 0;
};

// Plain enumeration of every interleaving, written against names rather than
// indices and sharing no code with the library's kernel. Memoized on the
// printed state so that IRIW-sized tests finish.
Result Enumerate(const hsamm::SystemConfig& config);

}  // namespace oracle

#endif  // HSAMM_TESTS_ORACLE_REFERENCE_MODEL_HPP_
