#include "revdft/offline.hpp"

#include <sstream>
#include <stdexcept>

#include "revdft/tfc.hpp"

namespace revdft {

namespace {

std::string trim_copy(const std::string &s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) {
    return "";
  }
  return s.substr(first, s.find_last_not_of(" \t") - first + 1);
}

OfflineTestableCircuit add_test_line(const Circuit &circuit, bool mcf_too,
                                     const std::string &method) {
  CircuitBuilder builder(circuit.with_gates({}));
  const std::string name = unique_line_name(circuit, "tau");
  const std::size_t tau = builder.add_constant(name, true, true);
  for (const auto &gate : circuit.gates()) {
    Gate blocked = gate;
    if (gate.is_mct() || mcf_too) {
      blocked.controls.push_back(pos(tau));
    }
    builder.add(std::move(blocked));
  }
  OfflineTestableCircuit out;
  out.circuit = with_provenance(builder.build(), {{"method", method},
                                                  {"test", name},
                                                  {"original", std::to_string(circuit.num_lines())}});
  out.test_line = LineId{tau};
  out.original_lines = circuit.num_lines();
  out.method = method;
  return out;
}

}  // namespace

OfflineTestableCircuit modify_mct_offline(const Circuit &circuit) {
  for (std::size_t k = 0; k < circuit.num_gates(); ++k) {
    if (!circuit.gate(k).is_mct()) {
      throw PreconditionError("modify_mct_offline: gate " + std::to_string(k + 1) +
                              " is MCF; expected an all-MCT circuit");
    }
  }
  return add_test_line(circuit, false, "offline-mct");
}

OfflineTestableCircuit modify_mctf_offline(const Circuit &circuit) {
  ensure_valid(circuit);
  return add_test_line(circuit, false, "offline-mctf");
}

std::optional<OfflineTestableCircuit> offline_from_metadata(const Circuit &circuit) {
  const auto fields = provenance(circuit);
  auto method = fields.find("method");
  auto test = fields.find("test");
  if (method == fields.end() || test == fields.end()) {
    return std::nullopt;
  }
  OfflineTestableCircuit out;
  out.circuit = circuit;
  out.method = method->second;
  out.test_line = circuit.line_id(test->second);
  out.original_lines = circuit.num_lines() - 1;
  if (auto original = fields.find("original"); original != fields.end()) {
    out.original_lines = std::stoul(original->second);
  }
  return out;
}

TestSet gts_stuck_at(std::size_t width) {
  if (width < 1) {
    throw std::invalid_argument("GTS needs width >= 1");
  }
  State zeros(width);
  State ones(width);
  for (std::size_t i = 0; i + 1 < width; ++i) {
    ones.set(LineId{i}, true);
  }
  return TestSet{"gts-stuck2", {zeros, ones}, ResponseRule::identity, std::nullopt};
}

TestSet gts_stuck_at(const OfflineTestableCircuit &offline) {
  const std::size_t width = offline.circuit.num_lines();
  State zeros(width);
  State ones(width);
  for (std::size_t i = 0; i < width; ++i) {
    ones.set(LineId{i}, LineId{i} != offline.test_line);
  }
  return TestSet{"gts-stuck2", {zeros, ones}, ResponseRule::identity, std::nullopt};
}

TestSet mcf_fixed_points(std::size_t width) {
  State zeros(width);
  State ones(width);
  for (std::size_t i = 0; i < width; ++i) {
    ones.set(LineId{i}, true);
  }
  return TestSet{"mcf-t2", {zeros, ones}, ResponseRule::identity, std::nullopt};
}

TestSet weight_n_family(std::size_t width) {
  if (width < 1) {
    throw std::invalid_argument("weight-n family needs width >= 1");
  }
  TestSet tests{"mcf-tn", {}, ResponseRule::compare_to_fault_free, std::nullopt};
  for (std::size_t zero = 0; zero < width; ++zero) {
    State v(width);
    for (std::size_t i = 0; i < width; ++i) {
      v.set(LineId{i}, i != zero);
    }
    tests.vectors.push_back(std::move(v));
  }
  return tests;
}

TestSet adjacent_pairs_family(std::size_t width) {
  if (width < 3) {
    throw std::invalid_argument("adjacent-pairs family needs width >= 3");
  }
  TestSet tests{"mcf-t2n2", {}, ResponseRule::compare_to_fault_free, std::nullopt};
  for (std::size_t i = 0; i + 2 < width; ++i) {
    State pair(width);
    pair.set(LineId{i}, true);
    pair.set(LineId{i + 1}, true);
    State complement(width);
    for (std::size_t b = 0; b < width; ++b) {
      complement.set(LineId{b}, !pair[b]);
    }
    tests.vectors.push_back(std::move(pair));
    tests.vectors.push_back(std::move(complement));
  }
  return tests;
}

McfTestSets mcf_offline_testsets(const Circuit &circuit) {
  for (std::size_t k = 0; k < circuit.num_gates(); ++k) {
    if (!circuit.gate(k).is_mcf()) {
      throw PreconditionError("mcf_offline_testsets: gate " + std::to_string(k + 1) +
                              " is MCT; expected an all-MCF circuit");
    }
  }
  const std::size_t n = circuit.num_lines();
  return McfTestSets{mcf_fixed_points(n), weight_n_family(n), adjacent_pairs_family(n)};
}

std::string write_vector_file(const TestSet &tests) {
  std::ostringstream out;
  out << "# name: " << tests.name << '\n';
  out << "# rule: " << rule_name(tests.rule) << '\n';
  for (const auto &v : tests.vectors) {
    out << v.to_string() << '\n';
  }
  return out.str();
}

TestSet parse_vector_file(std::string_view text) {
  TestSet tests{"vectors", {}, ResponseRule::compare_to_fault_free, std::nullopt};
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    line = trim_copy(line);
    if (line.empty()) {
      continue;
    }
    if (line.front() == '#') {
      const auto body = trim_copy(line.substr(1));
      if (body.rfind("rule:", 0) == 0) {
        try {
          tests.rule = parse_rule(trim_copy(body.substr(5)));
        } catch (const std::invalid_argument &e) {
          throw ParseError(line_no, e.what());
        }
      } else if (body.rfind("name:", 0) == 0) {
        tests.name = trim_copy(body.substr(5));
      }
      continue;
    }
    try {
      State v = State::from_string(line);
      if (!tests.vectors.empty() && tests.vectors.front().width() != v.width()) {
        throw ParseError(line_no, "vector width " + std::to_string(v.width()) +
                                      " differs from " +
                                      std::to_string(tests.vectors.front().width()));
      }
      tests.vectors.push_back(std::move(v));
    } catch (const StructuralError &e) {
      throw ParseError(line_no, e.what());
    }
  }
  return tests;
}

}  // namespace revdft
