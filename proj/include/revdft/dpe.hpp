#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "revdft/circuit.hpp"
#include "revdft/online.hpp"

namespace revdft {

/// A generated datapath element: the circuit plus named operand/result ports.
/// Port bit i is the line holding bit i (LSB first) of that word.
struct Datapath {
  Circuit circuit;
  std::map<std::string, std::vector<LineId>> inputs;
  std::map<std::string, std::vector<LineId>> outputs;

  /// Fault-free input with the given operand words; constants at their
  /// declared values. Missing operands default to 0.
  State encode(const std::map<std::string, std::uint64_t> &operands) const;
  /// Reads a port (input or output) from a state of this circuit or of any
  /// wider circuit built from it.
  std::uint64_t decode(const State &state, const std::string &port) const;
};

enum class AluOp : std::uint8_t { add, bit_and, bit_or, bit_xor };

std::string_view alu_op_name(AluOp op);
AluOp parse_alu_op(std::string_view name);

enum class Element : std::uint8_t { fa, rca, mul4, alu };

Element parse_element(std::string_view name);

struct DpeSpec {
  Element element = Element::fa;
  std::size_t width = 1;
  bool testable = false;
  std::vector<AluOp> alu_ops{AluOp::add, AluOp::bit_and, AluOp::bit_xor, AluOp::bit_or};
};

/// Lines a, b, cin, anc(0); sum lands on cin, carry on anc.
Datapath build_full_adder();
/// 3N+1 lines: a0.., b0.., c0, k1..kN (constants 0); N chained full adders.
Datapath build_rca(std::size_t width);
/// 4x4 array multiplier: 16 partial-product Toffolis, then three 4-bit
/// ripple-carry rows. Only the 8 product bits are primary outputs.
Datapath build_mul4();
/// N-bit ALU; the 2-bit select (s1 s0) is the index into `ops`.
Datapath build_alu(std::size_t width, const std::vector<AluOp> &ops);

Datapath build(const DpeSpec &spec);

struct SelfCheckResult {
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string first_failure;

  bool passed() const { return failures == 0; }
};

/// Runs `circuit` (the element itself or a wider testable version of it) on
/// operand cases and compares every output port against integer arithmetic.
/// Small operand spaces are covered exhaustively, larger ones with
/// `random_cases` seeded samples. With `check_line`, that line must stay 0.
SelfCheckResult self_check(const DpeSpec &spec, const Datapath &datapath, const Circuit &circuit,
                           std::optional<LineId> check_line = std::nullopt,
                           std::size_t random_cases = 10000, std::uint64_t seed = 0);

OnlineTestableCircuit build_testable(const DpeSpec &spec);
OnlineTestableCircuit make_testable(const Datapath &datapath);

}  // namespace revdft
