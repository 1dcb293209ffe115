#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "revdft/circuit.hpp"

namespace revdft {

struct CostReport {
  std::size_t wires = 0;
  std::size_t gate_cost = 0;
  std::size_t quantum_cost = 0;
  std::size_t constant_inputs = 0;
  std::size_t garbage_outputs = 0;

  friend bool operator==(const CostReport &, const CostReport &) = default;
};

struct MetricDelta {
  std::size_t baseline = 0;
  std::size_t transformed = 0;
  long long absolute = 0;
  /// 100 * (new - old) / old; empty when old == 0 ("n/a").
  std::optional<double> percentage;
};

struct CostDelta {
  MetricDelta wires;
  MetricDelta gate_cost;
  MetricDelta quantum_cost;
  MetricDelta constant_inputs;
  MetricDelta garbage_outputs;
};

// Quantum cost table (no-ancilla convention):
//   MCT: 0 or 1 controls -> 1, c >= 2 controls -> 2^(c+1) - 3
//   MCF: 0 controls -> 3, 1 control -> 5, c >= 2 -> 2 + MCT cost with c+1 controls
// Negative controls cost the same as positive ones.
std::size_t mct_quantum_cost(std::size_t controls);
std::size_t mcf_quantum_cost(std::size_t controls);
std::size_t quantum_cost_of_gate(const Gate &gate);

CostReport cost_report(const Circuit &circuit);
MetricDelta metric_delta(std::size_t baseline, std::size_t transformed);
CostDelta cost_delta(const Circuit &baseline, const Circuit &transformed);
CostDelta cost_delta(const CostReport &baseline, const CostReport &transformed);

}  // namespace revdft
