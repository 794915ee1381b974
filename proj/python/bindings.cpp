#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hsamm/coverage.hpp"
#include "hsamm/errors.hpp"
#include "hsamm/explorer.hpp"
#include "hsamm/json_io.hpp"
#include "hsamm/litmus.hpp"
#include "hsamm/testgen.hpp"

namespace py = pybind11;
using namespace hsamm;

namespace {

ExploreOptions Options(std::uint64_t max_states, unsigned workers) {
  ExploreOptions opts;
  opts.max_states = max_states;
  opts.workers = workers;
  return opts;
}

std::string Check(const std::string& source, std::uint64_t max_states,
                  unsigned workers) {
  LitmusTest t = Parse(source);
  Verdict v;
  {
    py::gil_scoped_release release;
    v = CheckOutcome(t, Options(max_states, workers));
  }
  return VerdictToJson(t, v).dump();
}

std::string ExploreJson(const std::string& source, std::uint64_t max_states,
                        unsigned workers) {
  LitmusTest t = Parse(source);
  ExplorationResult r;
  {
    py::gil_scoped_release release;
    r = Explore(t.config, Options(max_states, workers));
  }
  return ExplorationToJson(t.config, r).dump();
}

std::string CoverJson(const std::string& source,
                      const std::vector<std::string>& watch,
                      std::uint64_t max_states) {
  LitmusTest t = Parse(source);
  std::vector<MasterIndex> watched;
  if (watch.empty()) {
    watched = LoadingMasters(t.config);
  } else {
    for (const auto& name : watch) {
      auto m = t.config.FindMaster(name);
      if (!m) throw py::value_error("unknown master " + name);
      watched.push_back(*m);
    }
  }
  py::gil_scoped_release release;
  return CoverageToJson(t, Cover(t, watched, Options(max_states, 1))).dump();
}

std::string FindTraceJson(const std::string& source, const std::string& target,
                          std::uint64_t max_states) {
  LitmusTest t = Parse(source);
  TestTarget goal = ParseTarget(target, t);
  py::gil_scoped_release release;
  return TestCaseToJson(FindTrace(t, goal, max_states)).dump();
}

py::tuple Verify(const std::string& test_json) {
  VerifyResult r = VerifyTest(TestCaseFromJson(Json::parse(test_json)));
  return py::make_tuple(r.ok, r.message);
}

}  // namespace

PYBIND11_MODULE(_hsamm, m) {
  m.doc() = "HSA memory model checker";

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<StateLimitExceeded>(m, "StateLimitExceeded",
                                             PyExc_RuntimeError);
  py::register_exception<Unreachable>(m, "Unreachable", PyExc_RuntimeError);
  py::register_exception<ReplayError>(m, "ReplayError", PyExc_RuntimeError);

  m.def("format_source", [](const std::string& s) { return Format(Parse(s)); },
        py::arg("source"));
  m.def("check", &Check, py::arg("source"), py::arg("max_states") = 10'000'000,
        py::arg("workers") = 1);
  m.def("explore", &ExploreJson, py::arg("source"),
        py::arg("max_states") = 10'000'000, py::arg("workers") = 1);
  m.def("cover", &CoverJson, py::arg("source"),
        py::arg("watch") = std::vector<std::string>{},
        py::arg("max_states") = 10'000'000);
  m.def("find_trace", &FindTraceJson, py::arg("source"), py::arg("target"),
        py::arg("max_states") = 10'000'000);
  m.def("verify", &Verify, py::arg("test_json"));
}
