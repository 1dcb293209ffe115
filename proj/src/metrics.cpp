#include "revdft/metrics.hpp"

#include <stdexcept>

namespace revdft {

std::size_t mct_quantum_cost(std::size_t controls) {
  if (controls <= 1) {
    return 1;
  }
  if (controls >= 62) {
    throw std::overflow_error("quantum cost overflows for " + std::to_string(controls) +
                              " controls");
  }
  return (std::size_t{1} << (controls + 1)) - 3;
}

std::size_t mcf_quantum_cost(std::size_t controls) {
  switch (controls) {
    case 0:
      return 3;
    case 1:
      return 5;
    default:
      return 2 + mct_quantum_cost(controls + 1);
  }
}

std::size_t quantum_cost_of_gate(const Gate &gate) {
  return gate.is_mct() ? mct_quantum_cost(gate.controls.size())
                       : mcf_quantum_cost(gate.controls.size());
}

CostReport cost_report(const Circuit &circuit) {
  CostReport report;
  report.wires = circuit.num_lines();
  report.gate_cost = circuit.num_gates();
  for (const auto &gate : circuit.gates()) {
    report.quantum_cost += quantum_cost_of_gate(gate);
  }
  report.constant_inputs = circuit.constant_lines().size();
  report.garbage_outputs = circuit.garbage().size();
  return report;
}

MetricDelta metric_delta(std::size_t baseline, std::size_t transformed) {
  MetricDelta d;
  d.baseline = baseline;
  d.transformed = transformed;
  d.absolute = static_cast<long long>(transformed) - static_cast<long long>(baseline);
  if (baseline > 0) {
    d.percentage = 100.0 * static_cast<double>(d.absolute) / static_cast<double>(baseline);
  }
  return d;
}

CostDelta cost_delta(const CostReport &baseline, const CostReport &transformed) {
  return CostDelta{
      metric_delta(baseline.wires, transformed.wires),
      metric_delta(baseline.gate_cost, transformed.gate_cost),
      metric_delta(baseline.quantum_cost, transformed.quantum_cost),
      metric_delta(baseline.constant_inputs, transformed.constant_inputs),
      metric_delta(baseline.garbage_outputs, transformed.garbage_outputs),
  };
}

CostDelta cost_delta(const Circuit &baseline, const Circuit &transformed) {
  return cost_delta(cost_report(baseline), cost_report(transformed));
}

}  // namespace revdft
