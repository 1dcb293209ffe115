#include "revdft/circuit.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>
#include <unordered_set>

namespace revdft {

Gate Gate::mct(std::vector<Control> controls, std::size_t target) {
  return Gate{GateKind::mct, std::move(controls), {LineId{target}}};
}

Gate Gate::mcf(std::vector<Control> controls, std::size_t first, std::size_t second) {
  return Gate{GateKind::mcf, std::move(controls), {LineId{first}, LineId{second}}};
}

bool Gate::has_control(LineId line) const {
  return std::any_of(controls.begin(), controls.end(),
                     [line](const Control &c) { return c.line == line; });
}

bool Gate::uses_line(LineId line) const {
  return has_control(line) || std::find(targets.begin(), targets.end(), line) != targets.end();
}

State::State(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (auto &b : bits_) {
    b = b != 0 ? 1 : 0;
  }
}

State State::from_string(std::string_view bits) {
  State state(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != '0' && bits[i] != '1') {
      throw StructuralError("invalid bit character '" + std::string(1, bits[i]) + "' in \"" +
                            std::string(bits) + "\"");
    }
    state.bits_[i] = bits[i] == '1' ? 1 : 0;
  }
  return state;
}

State State::from_integer(std::uint64_t value, std::size_t width) {
  State state(width);
  for (std::size_t i = 0; i < width && i < 64; ++i) {
    state.bits_[i] = static_cast<std::uint8_t>((value >> i) & 1U);
  }
  return state;
}

std::size_t State::popcount() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::string State::to_string() const {
  std::string out(bits_.size(), '0');
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    out[i] = bits_[i] != 0 ? '1' : '0';
  }
  return out;
}

Circuit::Circuit(std::vector<LineInfo> lines, std::vector<Gate> gates,
                 std::vector<std::string> metadata)
    : lines_(std::move(lines)), gates_(std::move(gates)), metadata_(std::move(metadata)) {}

std::optional<LineId> Circuit::find_line(std::string_view name) const {
  for (std::size_t i = 0; i < lines_.size(); ++i) {
    if (lines_[i].name == name) {
      return LineId{i};
    }
  }
  return std::nullopt;
}

LineId Circuit::line_id(std::string_view name) const {
  if (auto id = find_line(name)) {
    return *id;
  }
  throw StructuralError("no line named '" + std::string(name) + "'");
}

std::vector<LineId> Circuit::primary_inputs() const {
  std::vector<LineId> out;
  for (std::size_t i = 0; i < lines_.size(); ++i) {
    if (!lines_[i].constant) {
      out.push_back(LineId{i});
    }
  }
  return out;
}

std::vector<LineId> Circuit::constant_lines() const {
  std::vector<LineId> out;
  for (std::size_t i = 0; i < lines_.size(); ++i) {
    if (lines_[i].constant) {
      out.push_back(LineId{i});
    }
  }
  return out;
}

std::vector<LineId> Circuit::primary_outputs() const {
  std::vector<LineId> out;
  for (std::size_t i = 0; i < lines_.size(); ++i) {
    if (lines_[i].is_output) {
      out.push_back(LineId{i});
    }
  }
  return out;
}

std::vector<LineId> Circuit::garbage() const {
  std::vector<LineId> out;
  for (std::size_t i = 0; i < lines_.size(); ++i) {
    if (!lines_[i].is_output) {
      out.push_back(LineId{i});
    }
  }
  return out;
}

bool Circuit::all_mct() const {
  return std::all_of(gates_.begin(), gates_.end(), [](const Gate &g) { return g.is_mct(); });
}

bool Circuit::all_mcf() const {
  return std::all_of(gates_.begin(), gates_.end(), [](const Gate &g) { return g.is_mcf(); });
}

Circuit Circuit::with_gates(std::vector<Gate> gates) const {
  return Circuit(lines_, std::move(gates), metadata_);
}

Circuit Circuit::with_metadata(std::vector<std::string> metadata) const {
  return Circuit(lines_, gates_, std::move(metadata));
}

CircuitBuilder::CircuitBuilder(const Circuit &base)
    : lines_(base.lines()), gates_(base.gates()), metadata_(base.metadata()) {}

std::size_t CircuitBuilder::add_input(std::string name, bool is_output) {
  lines_.push_back(LineInfo{std::move(name), std::nullopt, is_output});
  return lines_.size() - 1;
}

std::size_t CircuitBuilder::add_constant(std::string name, bool value, bool is_output) {
  lines_.push_back(LineInfo{std::move(name), value, is_output});
  return lines_.size() - 1;
}

CircuitBuilder &CircuitBuilder::add(Gate gate) {
  gates_.push_back(std::move(gate));
  return *this;
}

CircuitBuilder &CircuitBuilder::add_metadata(std::string comment) {
  metadata_.push_back(std::move(comment));
  return *this;
}

Circuit CircuitBuilder::build() const {
  Circuit circuit(lines_, gates_, metadata_);
  ensure_valid(circuit);
  return circuit;
}

std::string describe(const Violation &violation) {
  std::ostringstream out;
  if (violation.gate) {
    out << "gate " << (*violation.gate + 1) << ": ";
  }
  if (violation.line) {
    out << "line " << *violation.line << ": ";
  }
  out << violation.rule;
  return out.str();
}

namespace {

bool valid_name(const std::string &name) {
  if (name.empty()) {
    return false;
  }
  return std::none_of(name.begin(), name.end(), [](char c) {
    return c == ',' || c == '\'' || c == '#' || std::isspace(static_cast<unsigned char>(c));
  });
}

}  // namespace

std::vector<Violation> validate(const Circuit &circuit) {
  std::vector<Violation> out;
  const std::size_t n = circuit.num_lines();

  std::unordered_set<std::string> names;
  for (std::size_t i = 0; i < n; ++i) {
    const auto &name = circuit.lines()[i].name;
    if (!valid_name(name)) {
      out.push_back({std::nullopt, i, "invalid line name '" + name + "'"});
    } else if (!names.insert(name).second) {
      out.push_back({std::nullopt, i, "duplicate line name '" + name + "'"});
    }
  }

  for (std::size_t k = 0; k < circuit.num_gates(); ++k) {
    const Gate &gate = circuit.gate(k);
    const std::size_t expected_targets = gate.is_mct() ? 1 : 2;
    if (gate.targets.size() != expected_targets) {
      out.push_back({k, std::nullopt,
                     std::string(gate.is_mct() ? "MCT" : "MCF") + " gate needs exactly " +
                         std::to_string(expected_targets) + " target(s)"});
      continue;
    }
    bool in_range = true;
    for (const auto &t : gate.targets) {
      if (t.index >= n) {
        out.push_back({k, t.index, "target references a missing line"});
        in_range = false;
      }
    }
    for (const auto &c : gate.controls) {
      if (c.line.index >= n) {
        out.push_back({k, c.line.index, "control references a missing line"});
        in_range = false;
      }
    }
    if (!in_range) {
      continue;
    }
    if (gate.is_mcf() && gate.targets[0] == gate.targets[1]) {
      out.push_back({k, gate.targets[0].index, "MCF targets must be two distinct lines"});
    }
    for (std::size_t i = 0; i < gate.controls.size(); ++i) {
      const LineId line = gate.controls[i].line;
      for (std::size_t j = i + 1; j < gate.controls.size(); ++j) {
        if (gate.controls[j].line == line) {
          out.push_back({k, line.index, "control line listed twice"});
        }
      }
      if (std::find(gate.targets.begin(), gate.targets.end(), line) != gate.targets.end()) {
        out.push_back({k, line.index, "target line is also a control"});
      }
    }
  }
  return out;
}

void ensure_valid(const Circuit &circuit) {
  const auto violations = validate(circuit);
  if (violations.empty()) {
    return;
  }
  std::string message = "invalid circuit:";
  for (const auto &v : violations) {
    message += "\n  " + describe(v);
  }
  throw StructuralError(message);
}

bool controls_satisfied(const Gate &gate, const State &state) {
  return std::all_of(gate.controls.begin(), gate.controls.end(),
                     [&](const Control &c) { return c.satisfied_by(state.get(c.line)); });
}

void apply_gate_in_place(const Gate &gate, State &state) {
  if (!controls_satisfied(gate, state)) {
    return;
  }
  if (gate.is_mct()) {
    state.flip(gate.targets[0]);
  } else {
    state.swap_bits(gate.targets[0], gate.targets[1]);
  }
}

namespace {

void check_gate_width(const Gate &gate, std::size_t width) {
  auto out_of_range = [width](LineId l) { return l.index >= width; };
  if (std::any_of(gate.targets.begin(), gate.targets.end(), out_of_range) ||
      std::any_of(gate.controls.begin(), gate.controls.end(),
                  [&](const Control &c) { return out_of_range(c.line); })) {
    throw StructuralError("gate references a line beyond state width " + std::to_string(width));
  }
}

void check_input(const Circuit &circuit, const State &input, ConstantMode mode) {
  if (input.width() != circuit.num_lines()) {
    throw StructuralError("state width " + std::to_string(input.width()) +
                          " does not match circuit width " +
                          std::to_string(circuit.num_lines()));
  }
  if (mode == ConstantMode::enforce) {
    for (std::size_t i = 0; i < circuit.num_lines(); ++i) {
      const auto &c = circuit.lines()[i].constant;
      if (c && input[i] != *c) {
        throw StructuralError("constant line '" + circuit.lines()[i].name + "' must be " +
                              (*c ? "1" : "0"));
      }
    }
  }
}

}  // namespace

State apply_gate(const Gate &gate, const State &state) {
  check_gate_width(gate, state.width());
  State out = state;
  apply_gate_in_place(gate, out);
  return out;
}

State run(const Circuit &circuit, const State &input, ConstantMode mode) {
  check_input(circuit, input, mode);
  State state = input;
  for (const auto &gate : circuit.gates()) {
    apply_gate_in_place(gate, state);
  }
  return state;
}

std::vector<State> run_traced(const Circuit &circuit, const State &input, ConstantMode mode) {
  check_input(circuit, input, mode);
  std::vector<State> trace;
  trace.reserve(circuit.num_gates() + 1);
  trace.push_back(input);
  for (const auto &gate : circuit.gates()) {
    State next = trace.back();
    apply_gate_in_place(gate, next);
    trace.push_back(std::move(next));
  }
  return trace;
}

Circuit inverse(const Circuit &circuit) {
  std::vector<Gate> gates(circuit.gates().rbegin(), circuit.gates().rend());
  return circuit.with_gates(std::move(gates));
}

State input_from_assignment(const Circuit &circuit, std::uint64_t assignment) {
  State state(circuit.num_lines());
  std::size_t bit = 0;
  for (std::size_t i = 0; i < circuit.num_lines(); ++i) {
    const auto &c = circuit.lines()[i].constant;
    if (c) {
      state.set(LineId{i}, *c);
    } else {
      state.set(LineId{i}, ((assignment >> bit) & 1U) != 0);
      ++bit;
    }
  }
  return state;
}

}  // namespace revdft

namespace revdft {

State extend_state(const Circuit &wider, const State &narrow) {
  if (narrow.width() > wider.num_lines()) {
    throw StructuralError("state is wider than the circuit");
  }
  State out(wider.num_lines());
  for (std::size_t i = 0; i < wider.num_lines(); ++i) {
    if (i < narrow.width()) {
      out.set(LineId{i}, narrow[i]);
    } else {
      out.set(LineId{i}, wider.lines()[i].constant.value_or(false));
    }
  }
  return out;
}

std::string unique_line_name(const Circuit &circuit, const std::string &base) {
  if (!circuit.find_line(base)) {
    return base;
  }
  for (std::size_t i = 1;; ++i) {
    std::string candidate = base + "_" + std::to_string(i);
    if (!circuit.find_line(candidate)) {
      return candidate;
    }
  }
}

namespace {
constexpr std::string_view kProvenancePrefix = "revdft:";
}

std::map<std::string, std::string> provenance(const Circuit &circuit) {
  std::map<std::string, std::string> fields;
  for (const auto &comment : circuit.metadata()) {
    if (comment.rfind(kProvenancePrefix, 0) != 0) {
      continue;
    }
    std::istringstream in(comment.substr(kProvenancePrefix.size()));
    std::string token;
    while (in >> token) {
      if (auto eq = token.find('='); eq != std::string::npos) {
        fields[token.substr(0, eq)] = token.substr(eq + 1);
      }
    }
    break;
  }
  return fields;
}

Circuit with_provenance(const Circuit &circuit, const std::map<std::string, std::string> &fields) {
  std::vector<std::string> metadata;
  std::string line(kProvenancePrefix);
  // method first, remaining keys in map order
  if (auto it = fields.find("method"); it != fields.end()) {
    line += " method=" + it->second;
  }
  for (const auto &[key, value] : fields) {
    if (key != "method") {
      line += " " + key + "=" + value;
    }
  }
  metadata.push_back(line);
  for (const auto &comment : circuit.metadata()) {
    if (comment.rfind(kProvenancePrefix, 0) != 0) {
      metadata.push_back(comment);
    }
  }
  return circuit.with_metadata(std::move(metadata));
}

}  // namespace revdft
