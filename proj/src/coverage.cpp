#include "hsamm/coverage.hpp"

#include <algorithm>
#include <stdexcept>

namespace hsamm {

std::vector<RegCombo> RegCombos(std::size_t register_count,
                                const std::vector<Value>& values) {
  std::vector<RegCombo> out;
  if (values.empty()) return out;
  RegCombo c(register_count, values.front());
  std::vector<std::size_t> digit(register_count, 0);
  while (true) {
    for (std::size_t r = 0; r < register_count; ++r) c[r] = values[digit[r]];
    out.push_back(c);
    std::size_t r = register_count;
    while (r > 0) {
      --r;
      if (++digit[r] < values.size()) break;
      digit[r] = 0;
      if (r == 0) return out;
    }
    if (register_count == 0) return out;
  }
}

std::size_t ComboIndex(const RegCombo& combo, const std::vector<Value>& values) {
  std::size_t index = 0;
  for (Value v : combo) {
    auto it = std::lower_bound(values.begin(), values.end(), v);
    if (it == values.end() || *it != v) {
      throw std::out_of_range("value " + std::to_string(v) +
                              " outside the value domain");
    }
    index = index * values.size() + (it - values.begin());
  }
  return index;
}

std::vector<CoveragePoint> CoverageReport::Uncovered() const {
  if (total > (std::uint64_t{1} << 20)) {
    throw std::length_error("too many coverage points to enumerate");
  }
  std::vector<CoveragePoint> out;
  CoveragePoint p(watched.size(), 0);
  for (std::uint64_t i = 0; i < total; ++i) {
    std::uint64_t rest = i;
    for (std::size_t k = watched.size(); k > 0; --k) {
      p[k - 1] = rest % combos.size();
      rest /= combos.size();
    }
    if (!covered.count(p)) out.push_back(p);
  }
  return out;
}

std::vector<MasterIndex> LoadingMasters(const SystemConfig& config) {
  std::vector<MasterIndex> out;
  for (MasterIndex m = 0; m < config.num_masters(); ++m) {
    for (InstrIndex i : config.programs[m]) {
      if (IsLoad(config.instr(i).kind)) {
        out.push_back(m);
        break;
      }
    }
  }
  return out;
}

CoverageReport Cover(const LitmusTest& test, const ExplorationResult& result,
                     const std::vector<MasterIndex>& watched) {
  const SystemConfig& c = test.config;
  CoverageReport report;
  report.test = test.name;
  report.watched = watched;
  report.combos = RegCombos(c.registers.size(), c.values);
  report.total = 1;
  for (std::size_t k = 0; k < watched.size(); ++k) {
    if (report.combos.size() != 0 &&
        report.total > UINT64_MAX / report.combos.size()) {
      report.total = UINT64_MAX;
      break;
    }
    report.total *= report.combos.size();
  }
  const std::size_t regs = c.registers.size();
  for (const RegisterMap& rf : result.trigger_register_maps) {
    CoveragePoint p;
    for (MasterIndex m : watched) {
      RegCombo combo(rf.begin() + m * regs, rf.begin() + (m + 1) * regs);
      p.push_back(ComboIndex(combo, c.values));
    }
    report.covered.insert(std::move(p));
  }
  return report;
}

CoverageReport Cover(const LitmusTest& test,
                     const std::vector<MasterIndex>& watched,
                     ExploreOptions opts) {
  opts.watched_loads = test.watched_loads;
  return Cover(test, Explore(test.config, opts), watched);
}

EventSet FiredEvents(const ExplorationResult& result) {
  EventSet s{};
  for (std::size_t k = 0; k < kEventKindCount; ++k) {
    s[k] = result.event_tally[k] > 0;
  }
  return s;
}

EventCoverageReport EventCoverage(const std::vector<EventSet>& per_test) {
  EventCoverageReport r;
  r.per_test = per_test;
  for (const auto& s : per_test) {
    for (std::size_t k = 0; k < kEventKindCount; ++k) r.fired[k] |= s[k];
  }
  for (std::size_t k = 0; k < kEventKindCount; ++k) {
    if (!r.fired[k]) r.uncovered.push_back(kAllEventKinds[k]);
  }
  r.full = r.uncovered.empty();
  return r;
}

EventCoverageReport EventCoverage(
    const std::vector<ExplorationResult>& results) {
  std::vector<EventSet> sets;
  for (const auto& r : results) sets.push_back(FiredEvents(r));
  return EventCoverage(sets);
}

}  // namespace hsamm
