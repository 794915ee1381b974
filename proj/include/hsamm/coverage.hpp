#ifndef HSAMM_COVERAGE_HPP_
#define HSAMM_COVERAGE_HPP_

#include <array>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "hsamm/explorer.hpp"
#include "hsamm/litmus.hpp"

namespace hsamm {

// Values of one master's registers, in config register order.
using RegCombo = std::vector<Value>;

// All |values|^|registers| combos in lexicographic order (C0, C1, ...), the
// first register varying slowest.
std::vector<RegCombo> RegCombos(std::size_t register_count,
                                const std::vector<Value>& values);

// Position of `combo` in RegCombos order.
std::size_t ComboIndex(const RegCombo& combo, const std::vector<Value>& values);

inline std::string ComboName(std::size_t index) {
  return "C" + std::to_string(index);
}

// Combo indices per watched master, in watched order.
using CoveragePoint = std::vector<std::size_t>;

struct CoverageReport {
  std::string test;
  std::vector<MasterIndex> watched;
  std::vector<RegCombo> combos;  // RegCombos of the test
  std::set<CoveragePoint> covered;
  std::uint64_t total = 0;  // combos.size() ^ watched.size()

  // Every point not covered, in lexicographic order. Throws std::length_error
  // for more than 2^20 points.
  std::vector<CoveragePoint> Uncovered() const;
};

// Masters that issue at least one load, in config order.
std::vector<MasterIndex> LoadingMasters(const SystemConfig& config);

// Coverage relation over the register files of every state of `result` in
// which all watched loads were observed. `result` must come from an
// exploration with ExploreOptions::watched_loads = test.watched_loads.
CoverageReport Cover(const LitmusTest& test, const ExplorationResult& result,
                     const std::vector<MasterIndex>& watched);

// Explores `test` and computes its coverage.
CoverageReport Cover(const LitmusTest& test,
                     const std::vector<MasterIndex>& watched,
                     ExploreOptions opts = {});

using EventSet = std::array<bool, kEventKindCount>;

struct EventCoverageReport {
  std::vector<EventSet> per_test;
  EventSet fired{};
  bool full = false;
  std::vector<EventKind> uncovered;
};

EventSet FiredEvents(const ExplorationResult& result);
EventCoverageReport EventCoverage(const std::vector<EventSet>& per_test);
EventCoverageReport EventCoverage(
    const std::vector<ExplorationResult>& results);

}  // namespace hsamm

#endif  // HSAMM_COVERAGE_HPP_
