#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "revdft/circuit.hpp"
#include "revdft/dpe.hpp"
#include "revdft/faultsim.hpp"
#include "revdft/metrics.hpp"
#include "revdft/offline.hpp"
#include "revdft/online.hpp"
#include "revdft/report.hpp"
#include "revdft/tfc.hpp"

namespace py = pybind11;
using namespace revdft;

namespace {

py::object to_python(const nlohmann::json &j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

Circuit transform_circuit(const Circuit &c, const std::string &method) {
  if (method == "online-mct") return modify_mct_online(c).circuit;
  if (method == "online-mcf") return modify_mcf_online(c).circuit;
  if (method == "online-mctf") {
    return c.all_mct() ? convert_mct_to_mctf_online(c).circuit : make_online_mctf(c).circuit;
  }
  if (method == "offline-mct") return modify_mct_offline(c).circuit;
  if (method == "offline-mctf") return modify_mctf_offline(c).circuit;
  throw std::invalid_argument("unknown method '" + method + "'");
}

// Mirrors the CLI defaults: provenance picks the rule and the fault sites.
py::object grade_circuit(const Circuit &c, const std::string &faults, std::size_t multiplicity,
                         const std::optional<std::vector<std::string>> &vectors,
                         const std::optional<std::string> &rule, std::uint64_t seed,
                         std::size_t threads) {
  const FaultKind kind = parse_fault_kind(faults);
  const auto online = online_from_metadata(c);
  const auto offline = offline_from_metadata(c);

  EnumerationOptions options;
  options.seed = seed;
  options.adjacent_bridging_only = true;
  std::vector<LineId> lines;
  for (std::size_t i = 0; i < c.num_lines(); ++i) {
    const LineId id{i};
    if ((online && id == online->check_line) || (offline && id == offline->test_line)) continue;
    lines.push_back(id);
  }
  if (online || offline) options.lines = lines;
  if (online && kind == FaultKind::bit_flip) options.segments = online->observation_segments;
  const FaultUniverse universe = enumerate_faults(c, kind, multiplicity, options);

  TestSet tests;
  if (vectors) {
    for (const auto &v : *vectors) tests.vectors.push_back(State::from_string(v));
    tests.name = "vectors";
  } else if (offline) {
    tests = gts_stuck_at(*offline);
  } else {
    tests = TestSet{"exhaustive", exhaustive_inputs(c), ResponseRule::compare_to_fault_free, {}};
  }
  if (online) {
    tests.check_line = online->check_line;
    if (!vectors || !rule) tests.rule = ResponseRule::check_line_zero;
  }
  if (rule) tests.rule = parse_rule(*rule);

  const auto report = grade(c, tests, universe, GradeOptions{threads});
  return to_python(to_json(report, c));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Reversible MCT/MCF circuits: simulation, DFT transforms and fault grading";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<StructuralError>(m, "StructuralError", PyExc_ValueError);
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);

  py::class_<Circuit>(m, "Circuit")
      .def_static("from_tfc", [](const std::string &text) { return parse_tfc(text); }, py::arg("text"))
      .def_static("read", &read_tfc_file, py::arg("path"))
      .def("to_tfc", [](const Circuit &c) { return write_tfc(c); })
      .def_property_readonly("num_lines", &Circuit::num_lines)
      .def_property_readonly("num_gates", &Circuit::num_gates)
      .def_property_readonly("line_names",
                             [](const Circuit &c) {
                               std::vector<std::string> names;
                               for (const auto &l : c.lines()) names.push_back(l.name);
                               return names;
                             })
      .def_property_readonly("metadata", &Circuit::metadata)
      .def("run",
           [](const Circuit &c, const std::string &bits) { return run(c, State::from_string(bits)).to_string(); },
           py::arg("bits"), "Simulate one input; character i is line i.")
      .def("cost", [](const Circuit &c) { return to_python(to_json(cost_report(c))); })
      .def("inverse", [](const Circuit &c) { return inverse(c); })
      .def("__eq__", [](const Circuit &a, const Circuit &b) { return a == b; })
      .def("__repr__", [](const Circuit &c) {
        return "<Circuit lines=" + std::to_string(c.num_lines()) + " gates=" + std::to_string(c.num_gates()) + ">";
      });

  m.def("transform", &transform_circuit, py::arg("circuit"), py::arg("method"),
        "Apply online-mct, online-mcf, online-mctf, offline-mct or offline-mctf.");
  m.def("grade", &grade_circuit, py::arg("circuit"), py::arg("faults") = "stuck-at",
        py::arg("multiplicity") = 1, py::arg("vectors") = std::nullopt, py::arg("rule") = std::nullopt,
        py::arg("seed") = 0, py::arg("threads") = 0, "Coverage report as a dict.");
  m.def(
      "gts",
      [](std::size_t width, const std::string &family) {
        TestSet t;
        if (family == "stuck2") {
          t = gts_stuck_at(width);
        } else if (family == "weightn") {
          t = weight_n_family(width);
        } else if (family == "pairs") {
          t = adjacent_pairs_family(width);
        } else {
          throw std::invalid_argument("unknown family '" + family + "'");
        }
        std::vector<std::string> out;
        for (const auto &v : t.vectors) out.push_back(v.to_string());
        return out;
      },
      py::arg("width"), py::arg("family") = "stuck2");
  m.def("quantum_cost", [](const Circuit &c) { return cost_report(c).quantum_cost; }, py::arg("circuit"));

  auto spec_of = [](const std::string &element, std::size_t bits, const std::vector<std::string> &ops,
                    bool testable) {
    DpeSpec spec;
    spec.element = parse_element(element);
    spec.width = bits;
    spec.testable = testable;
    if (!ops.empty()) {
      spec.alu_ops.clear();
      for (const auto &op : ops) spec.alu_ops.push_back(parse_alu_op(op));
    }
    return spec;
  };
  m.def(
      "dpe",
      [spec_of](const std::string &element, std::size_t bits, const std::vector<std::string> &ops,
                bool testable) {
        const DpeSpec spec = spec_of(element, bits, ops, testable);
        return testable ? build_testable(spec).circuit : build(spec).circuit;
      },
      py::arg("element"), py::arg("bits") = 4, py::arg("ops") = std::vector<std::string>{},
      py::arg("testable") = false);
  m.def(
      "self_check",
      [spec_of](const std::string &element, std::size_t bits, const std::vector<std::string> &ops,
                bool testable, std::uint64_t seed) {
        const DpeSpec spec = spec_of(element, bits, ops, testable);
        const Datapath d = build(spec);
        std::optional<OnlineTestableCircuit> t;
        if (testable) t = make_testable(d);
        const auto r = self_check(spec, d, t ? t->circuit : d.circuit,
                                  t ? std::optional<LineId>(t->check_line) : std::nullopt, 10000, seed);
        return py::make_tuple(r.cases, r.failures);
      },
      py::arg("element"), py::arg("bits") = 4, py::arg("ops") = std::vector<std::string>{},
      py::arg("testable") = false, py::arg("seed") = 0, "Returns (cases, failures).");
}
