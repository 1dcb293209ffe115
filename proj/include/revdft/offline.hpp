#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "revdft/circuit.hpp"
#include "revdft/faultsim.hpp"

namespace revdft {

/// A circuit with an appended test line that controls every blocked gate.
/// Test line 1 runs the original function, 0 turns the circuit into identity.
struct OfflineTestableCircuit {
  Circuit circuit;
  LineId test_line;
  bool normal_mode_value = true;
  std::size_t original_lines = 0;
  std::string method;
};

/// Adds the test line as a positive control to every gate. All-MCT only.
OfflineTestableCircuit modify_mct_offline(const Circuit &circuit);

/// Adds the test line as a positive control to the MCT gates only; MCF gates
/// keep both general test vectors as fixed points.
OfflineTestableCircuit modify_mctf_offline(const Circuit &circuit);

std::optional<OfflineTestableCircuit> offline_from_metadata(const Circuit &circuit);

/// The two-vector general test set for a width-W circuit whose last line is
/// the test line: all zeros, and all ones except the test line.
TestSet gts_stuck_at(std::size_t width);
TestSet gts_stuck_at(const OfflineTestableCircuit &offline);

/// Test-set families for unmodified MCF circuits. Tn and T2(n-2) are
/// reconstructions; only their sizes are fixed.
struct McfTestSets {
  TestSet fixed_points;   // {0...0, 1...1}, identity rule
  TestSet weight_n;       // the n vectors with a single 0
  TestSet adjacent_pairs; // ones at (i, i+1) for i in 0..n-3, plus complements
};

TestSet mcf_fixed_points(std::size_t width);
/// Throws std::invalid_argument when width < 1.
TestSet weight_n_family(std::size_t width);
/// Throws std::invalid_argument when width < 3.
TestSet adjacent_pairs_family(std::size_t width);

McfTestSets mcf_offline_testsets(const Circuit &circuit);

// Vector files: one bit string per line (character 0 = line 0), with
// "# name: ..." and "# rule: ..." comments.
std::string write_vector_file(const TestSet &tests);
TestSet parse_vector_file(std::string_view text);

}  // namespace revdft
