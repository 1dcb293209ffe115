#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace revdft {

/// Raised when a circuit, gate, or state violates a structural rule.
class StructuralError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Raised when a transformation's input does not satisfy its precondition.
class PreconditionError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct LineId {
  std::size_t index = 0;

  friend auto operator<=>(LineId, LineId) = default;
};

enum class Polarity : std::uint8_t { positive, negative };

struct Control {
  LineId line;
  Polarity polarity = Polarity::positive;

  bool satisfied_by(bool value) const { return polarity == Polarity::positive ? value : !value; }

  friend bool operator==(const Control &, const Control &) = default;
};

inline Control pos(std::size_t line) { return {LineId{line}, Polarity::positive}; }
inline Control neg(std::size_t line) { return {LineId{line}, Polarity::negative}; }

enum class GateKind : std::uint8_t { mct, mcf };

/// A multiple-controlled Toffoli (one target) or Fredkin (two swap targets).
///
/// A zero-control MCT is NOT, a zero-control MCF is SWAP.
struct Gate {
  GateKind kind = GateKind::mct;
  std::vector<Control> controls;
  std::vector<LineId> targets;

  static Gate mct(std::vector<Control> controls, std::size_t target);
  static Gate mcf(std::vector<Control> controls, std::size_t first, std::size_t second);

  static Gate not_gate(std::size_t target) { return mct({}, target); }
  static Gate cnot(std::size_t control, std::size_t target) { return mct({pos(control)}, target); }
  static Gate toffoli(std::size_t c0, std::size_t c1, std::size_t target) {
    return mct({pos(c0), pos(c1)}, target);
  }
  static Gate fredkin(std::size_t control, std::size_t first, std::size_t second) {
    return mcf({pos(control)}, first, second);
  }

  bool is_mct() const { return kind == GateKind::mct; }
  bool is_mcf() const { return kind == GateKind::mcf; }
  bool uses_line(LineId line) const;
  bool has_control(LineId line) const;

  friend bool operator==(const Gate &, const Gate &) = default;
};

/// Per-line declaration. A line with a constant is a constant input; every
/// other line is a primary input. Lines not marked as outputs are garbage.
struct LineInfo {
  std::string name;
  std::optional<bool> constant;
  bool is_output = true;

  friend bool operator==(const LineInfo &, const LineInfo &) = default;
};

/// A plain bit vector indexed by line.
class State {
public:
  State() = default;
  explicit State(std::size_t width) : bits_(width, 0) {}
  explicit State(std::vector<std::uint8_t> bits);

  /// Parses "0101"; character 0 is line 0.
  static State from_string(std::string_view bits);
  /// Bit i of `value` becomes line i.
  static State from_integer(std::uint64_t value, std::size_t width);

  std::size_t width() const { return bits_.size(); }
  bool operator[](std::size_t i) const { return bits_[i] != 0; }
  bool get(LineId line) const { return bits_[line.index] != 0; }
  void set(LineId line, bool value) { bits_[line.index] = value ? 1 : 0; }
  void flip(LineId line) { bits_[line.index] ^= 1; }
  void swap_bits(LineId a, LineId b) { std::swap(bits_[a.index], bits_[b.index]); }

  std::size_t popcount() const;
  bool parity() const { return (popcount() & 1U) != 0; }
  std::string to_string() const;

  friend bool operator==(const State &, const State &) = default;
  friend auto operator<=>(const State &, const State &) = default;

private:
  std::vector<std::uint8_t> bits_;
};

/// Immutable reversible circuit: ordered lines plus an ordered gate cascade.
///
/// Gate position k (1-based) is "level" k. Segment k (0..g) is the wire region
/// after gate k and before gate k+1; segment 0 holds the inputs and segment g
/// the outputs.
class Circuit {
public:
  Circuit() = default;
  Circuit(std::vector<LineInfo> lines, std::vector<Gate> gates,
          std::vector<std::string> metadata = {});

  std::size_t num_lines() const { return lines_.size(); }
  std::size_t num_gates() const { return gates_.size(); }
  const std::vector<LineInfo> &lines() const { return lines_; }
  const LineInfo &line(LineId id) const { return lines_.at(id.index); }
  const std::vector<Gate> &gates() const { return gates_; }
  const Gate &gate(std::size_t position) const { return gates_.at(position); }
  const std::vector<std::string> &metadata() const { return metadata_; }

  std::optional<LineId> find_line(std::string_view name) const;
  LineId line_id(std::string_view name) const;

  std::vector<LineId> primary_inputs() const;
  std::vector<LineId> constant_lines() const;
  std::vector<LineId> primary_outputs() const;
  std::vector<LineId> garbage() const;

  bool all_mct() const;
  bool all_mcf() const;

  Circuit with_gates(std::vector<Gate> gates) const;
  Circuit with_metadata(std::vector<std::string> metadata) const;

  friend bool operator==(const Circuit &, const Circuit &) = default;

private:
  std::vector<LineInfo> lines_;
  std::vector<Gate> gates_;
  std::vector<std::string> metadata_;
};

/// Accumulates lines and gates, then validates on build().
class CircuitBuilder {
public:
  CircuitBuilder() = default;
  explicit CircuitBuilder(const Circuit &base);

  std::size_t add_input(std::string name, bool is_output = true);
  std::size_t add_constant(std::string name, bool value, bool is_output = false);
  std::size_t num_lines() const { return lines_.size(); }
  void set_output(std::size_t line, bool is_output) { lines_.at(line).is_output = is_output; }

  CircuitBuilder &add(Gate gate);
  CircuitBuilder &add_metadata(std::string comment);

  /// Throws StructuralError listing every violation.
  Circuit build() const;

private:
  std::vector<LineInfo> lines_;
  std::vector<Gate> gates_;
  std::vector<std::string> metadata_;
};

struct Violation {
  std::optional<std::size_t> gate;  // 0-based gate position
  std::optional<std::size_t> line;
  std::string rule;
};

std::string describe(const Violation &violation);

std::vector<Violation> validate(const Circuit &circuit);
void ensure_valid(const Circuit &circuit);

bool controls_satisfied(const Gate &gate, const State &state);
void apply_gate_in_place(const Gate &gate, State &state);
State apply_gate(const Gate &gate, const State &state);

enum class ConstantMode { ignore, enforce };

State run(const Circuit &circuit, const State &input, ConstantMode mode = ConstantMode::ignore);
std::vector<State> run_traced(const Circuit &circuit, const State &input,
                              ConstantMode mode = ConstantMode::ignore);
Circuit inverse(const Circuit &circuit);

/// Widens `narrow` to `wider`'s line count; extra lines take their declared
/// constant (or 0).
State extend_state(const Circuit &wider, const State &narrow);

/// `base`, or `base_1`, `base_2`, ... whichever is not yet a line name.
std::string unique_line_name(const Circuit &circuit, const std::string &base);

/// Key/value pairs of the "revdft: key=value ..." metadata comment.
std::map<std::string, std::string> provenance(const Circuit &circuit);
/// Replaces any existing provenance comment with `fields`.
Circuit with_provenance(const Circuit &circuit, const std::map<std::string, std::string> &fields);

/// Input state with primary inputs taken from `assignment` bits (in primary
/// input order) and constant lines at their declared values.
State input_from_assignment(const Circuit &circuit, std::uint64_t assignment);

}  // namespace revdft
