#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "revdft/circuit.hpp"
#include "revdft/faultsim.hpp"

namespace revdft {

/// A circuit wrapped with a CNOT parity checker. Original lines keep their
/// indices; the parity line (when present) and the check line are appended.
struct OnlineTestableCircuit {
  Circuit circuit;
  /// Target of the companion gates; absent when no MCT gate needed one.
  std::optional<LineId> parity_line;
  LineId check_line;
  std::size_t original_lines = 0;
  /// online-mct, online-mcf, online-mctf or checker.
  std::string method;
  /// Segments inside the checker region that lie between whole units (a
  /// gate plus its companion, or a lone gate).
  std::vector<std::size_t> observation_segments;
};

/// Returns an input state whose parity the circuit changes, if any. Exhaustive
/// for n <= 12, otherwise `samples` seeded random states.
std::optional<State> parity_violation(const Circuit &circuit, std::size_t samples = 4096,
                                      std::uint64_t seed = 0);
/// Returns an input state whose Hamming weight the circuit changes, if any.
std::optional<State> conservativity_violation(const Circuit &circuit, std::size_t samples = 4096,
                                              std::uint64_t seed = 0);

/// Appends a constant-0 parity line and follows every MCT gate with a
/// companion MCT (same controls) targeting it. Requires an all-MCT circuit.
Circuit make_parity_preserving_mct(const Circuit &circuit);

/// Checks that an all-MCF circuit is conservative and returns it unchanged.
Circuit make_parity_preserving_mcf(const Circuit &circuit);

/// Appends a constant-0 check line (primary output) and wraps the circuit
/// in CNOT taps from every other line, before and after. The input must be
/// parity preserving; otherwise a PreconditionError names a witness input.
OnlineTestableCircuit add_parity_checker(const Circuit &circuit);

OnlineTestableCircuit modify_mct_online(const Circuit &circuit);
OnlineTestableCircuit modify_mcf_online(const Circuit &circuit);

/// MCT -> MCTF conversion: controlled-swap rewrite, companions for the
/// remaining MCT gates, then the checker. Requires an all-MCT circuit.
OnlineTestableCircuit convert_mct_to_mctf_online(const Circuit &circuit);

/// Same pipeline for circuits that already mix MCT and MCF gates.
OnlineTestableCircuit make_online_mctf(const Circuit &circuit);

/// Position of the first gate of a controlled-swap triple starting at
/// `start`, i.e. [MCT(D+y -> x), MCT(C+x -> y), MCT(D+y -> x)] with D a subset
/// of C, x and y positive. Returns the equivalent MCF(C; x, y).
std::optional<Gate> match_controlled_swap(const std::vector<Gate> &gates, std::size_t start);

/// Stage 1 of the MCTF conversion: rewrites controlled-swap triples to MCF
/// gates until none remain.
Circuit rewrite_controlled_swaps(const Circuit &circuit);

/// Builds a parity-preserving MCT/MCF circuit gate by gate: each MCT gate is
/// placed together with its companion as it is added.
class ParityPreservingBuilder {
public:
  std::size_t add_input(std::string name, bool is_output = true);
  std::size_t add_constant(std::string name, bool value, bool is_output = false);
  ParityPreservingBuilder &add(Gate gate);
  OnlineTestableCircuit build() const;

private:
  CircuitBuilder base_;
  std::vector<Gate> gates_;
};

/// Single bit-flip universe over the non-check lines at the observation
/// segments.
FaultUniverse online_bit_flip_universe(const OnlineTestableCircuit &online);

/// The check-line test set over every fault-free input.
TestSet online_test_set(const OnlineTestableCircuit &online);

/// Rebuilds the wrapper description from `revdft:` metadata written by the
/// transforms; empty when the circuit carries none.
std::optional<OnlineTestableCircuit> online_from_metadata(const Circuit &circuit);

}  // namespace revdft
