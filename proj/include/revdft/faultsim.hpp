#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "revdft/circuit.hpp"

namespace revdft {

// Fault sites use the segment/level convention of Circuit: segment k in 0..g
// lies after gate k, level k in 1..g is the k-th gate.

/// Transient inversion of one line at one segment.
struct BitFlip {
  LineId line;
  std::size_t segment = 0;
  friend bool operator==(const BitFlip &, const BitFlip &) = default;
};

/// Line forced to `value` from `segment` through the circuit outputs, unless a
/// later stuck-at on the same line takes over from its own segment.
struct StuckAt {
  LineId line;
  std::size_t segment = 0;
  bool value = false;
  friend bool operator==(const StuckAt &, const StuckAt &) = default;
};

struct MissingGate {
  std::size_t level = 1;
  friend bool operator==(const MissingGate &, const MissingGate &) = default;
};

/// A control on `line` (not otherwise used by the gate) appears at `level`.
struct CrossPointAppearance {
  std::size_t level = 1;
  LineId line;
  Polarity polarity = Polarity::positive;
  friend bool operator==(const CrossPointAppearance &, const CrossPointAppearance &) = default;
};

/// The control on `line` vanishes from the gate at `level`.
struct CrossPointDisappearance {
  std::size_t level = 1;
  LineId line;
  friend bool operator==(const CrossPointDisappearance &,
                         const CrossPointDisappearance &) = default;
};

enum class BridgeMode : std::uint8_t { wired_and, wired_or };

/// Both lines replaced by the AND (or OR) of the pair at `segment`.
struct Bridging {
  LineId first;
  LineId second;
  std::size_t segment = 0;
  BridgeMode mode = BridgeMode::wired_and;
  friend bool operator==(const Bridging &, const Bridging &) = default;
};

using Fault = std::variant<BitFlip, StuckAt, MissingGate, CrossPointAppearance,
                           CrossPointDisappearance, Bridging>;

enum class FaultKind : std::uint8_t {
  bit_flip,
  stuck_at,
  missing_gate,
  cross_point_appearance,
  cross_point_disappearance,
  bridging,
};

FaultKind kind_of(const Fault &fault);
std::string_view kind_name(FaultKind kind);
/// Accepts the names produced by kind_name ("bit-flip", "stuck-at", ...).
FaultKind parse_fault_kind(std::string_view name);

/// True when two faults claim the same site and cannot coexist in one set.
bool conflicts(const Fault &a, const Fault &b);

/// Throws StructuralError when a site is out of range for the circuit or two
/// faults in the set conflict.
void check_fault_set(const Circuit &circuit, std::span<const Fault> faults);

struct EnumerationOptions {
  /// Restrict line-based sites (bit-flip, stuck-at, bridging, cross-point
  /// appearance) to these lines.
  std::optional<std::vector<LineId>> lines;
  /// Restrict segment-based sites (bit-flip, stuck-at, bridging).
  std::optional<std::vector<std::size_t>> segments;
  bool adjacent_bridging_only = false;
  /// Multiplicities above this are sampled instead of enumerated.
  std::size_t exhaustive_cap = 3;
  std::size_t sample_size = 10000;
  std::uint64_t seed = 0;
};

/// A list of fault sets. Single-fault universes hold sets of size one;
/// multiple(k) universes hold every conflict-free set of 1..k singles.
class FaultUniverse {
public:
  FaultUniverse() = default;
  FaultUniverse(FaultKind kind, std::size_t multiplicity) : kind_(kind), multiplicity_(multiplicity) {}

  FaultKind kind() const { return kind_; }
  std::size_t multiplicity() const { return multiplicity_; }
  bool sampled() const { return sampled_; }
  void mark_sampled() { sampled_ = true; }

  std::size_t size() const { return offsets_.size() - 1; }
  bool empty() const { return size() == 0; }
  std::span<const Fault> operator[](std::size_t i) const {
    return {storage_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }

  void add(std::span<const Fault> set);
  void add(const Fault &fault) { add(std::span<const Fault>(&fault, 1)); }

private:
  FaultKind kind_ = FaultKind::stuck_at;
  std::size_t multiplicity_ = 1;
  bool sampled_ = false;
  std::vector<Fault> storage_;
  std::vector<std::size_t> offsets_{0};
};

/// Every single fault of one kind, in a fixed order.
std::vector<Fault> enumerate_single_faults(const Circuit &circuit, FaultKind kind,
                                           const EnumerationOptions &options = {});
FaultUniverse enumerate_faults(const Circuit &circuit, FaultKind kind,
                               std::size_t multiplicity = 1,
                               const EnumerationOptions &options = {});

State run_faulty(const Circuit &circuit, const State &input, std::span<const Fault> faults);

enum class ResponseRule : std::uint8_t { compare_to_fault_free, check_line_zero, identity };

std::string_view rule_name(ResponseRule rule);
ResponseRule parse_rule(std::string_view name);

struct TestSet {
  std::string name;
  std::vector<State> vectors;
  ResponseRule rule = ResponseRule::compare_to_fault_free;
  /// Required by the check-line rule.
  std::optional<LineId> check_line;
};

struct CoverageReport {
  std::size_t total = 0;
  std::size_t detected = 0;
  /// detected / total, or 1.0 for an empty universe.
  double coverage = 1.0;
  bool empty_universe = false;
  std::vector<std::vector<Fault>> undetected;
};

struct GradeOptions {
  /// 0 picks std::thread::hardware_concurrency().
  std::size_t threads = 0;
};

/// Fault-free inputs: every primary-input assignment, constants at their
/// declared values (primary input j takes bit j of the assignment index).
std::vector<State> exhaustive_inputs(const Circuit &circuit);
/// All 2^n states of the circuit's lines; n <= 20.
std::vector<State> all_states(std::size_t width);

/// True when `output` observed for `input` breaks the test's response rule.
bool violates(const TestSet &tests, const State &input, const State &output,
              const State &fault_free);

CoverageReport grade(const Circuit &circuit, const TestSet &tests, const FaultUniverse &universe,
                     const GradeOptions &options = {});

/// rows[f][v] is true when vector v detects fault set f.
std::vector<std::vector<bool>> detection_matrix(const Circuit &circuit, const TestSet &tests,
                                                const FaultUniverse &universe,
                                                const GradeOptions &options = {});

struct GreedyOptions {
  ResponseRule rule = ResponseRule::compare_to_fault_free;
  std::optional<LineId> check_line;
  /// Candidate pool; empty means all 2^n states (n <= 16).
  std::vector<State> candidates;
  GradeOptions grading;
};

/// Greedy set cover over the detection matrix: repeatedly takes the candidate
/// detecting the most still-undetected faults (lowest index on ties) until no
/// candidate adds coverage.
TestSet greedy_minimal_testset(const Circuit &circuit, const FaultUniverse &universe,
                               const GreedyOptions &options = {});

}  // namespace revdft
