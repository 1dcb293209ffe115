#include <gtest/gtest.h>

#include <random>

#include "revdft/metrics.hpp"
#include "support.hpp"

using namespace revdft;
using namespace revdft::testing;

TEST(QuantumCost, TableExamples) {
  EXPECT_EQ(quantum_cost_of_gate(Gate::toffoli(0, 1, 2)), 5U);
  EXPECT_EQ(quantum_cost_of_gate(Gate::mct({pos(0), pos(1), pos(2)}, 3)), 13U);
  EXPECT_EQ(quantum_cost_of_gate(Gate::fredkin(0, 1, 2)), 5U);
  EXPECT_EQ(quantum_cost_of_gate(Gate::not_gate(0)), 1U);
  EXPECT_EQ(quantum_cost_of_gate(Gate::cnot(0, 1)), 1U);
  EXPECT_EQ(quantum_cost_of_gate(Gate::mcf({}, 0, 1)), 3U);
  // 2 + MCT with 3 controls
  EXPECT_EQ(quantum_cost_of_gate(Gate::mcf({pos(0), neg(1)}, 2, 3)), 15U);
}

TEST(QuantumCost, NegativeControlsCostTheSame) {
  EXPECT_EQ(quantum_cost_of_gate(Gate::mct({neg(0), neg(1)}, 2)), 5U);
}

TEST(QuantumCost, MonotoneInControls) {
  for (std::size_t c = 0; c < 20; ++c) {
    EXPECT_LE(mct_quantum_cost(c), mct_quantum_cost(c + 1));
    EXPECT_LE(mcf_quantum_cost(c), mcf_quantum_cost(c + 1));
  }
}

TEST(CostReport, EmptyThreeLine) {
  CircuitBuilder b;
  for (auto n : {"a", "b", "c"}) b.add_input(n);
  EXPECT_EQ(cost_report(b.build()), (CostReport{3, 0, 0, 0, 0}));
}

TEST(CostReport, Fixtures) {
  for (const auto &f : load_fixtures()) {
    const CostReport r = cost_report(f.circuit);
    EXPECT_EQ(r.wires, f.circuit.num_lines());
    EXPECT_EQ(r.gate_cost, f.circuit.num_gates());
    EXPECT_EQ(r.garbage_outputs, r.wires - f.circuit.primary_outputs().size());
    EXPECT_EQ(r.constant_inputs, r.wires - f.circuit.primary_inputs().size());
    if (f.name == "toffoli") {
      EXPECT_EQ(r.garbage_outputs, 2U);
      EXPECT_EQ(r.quantum_cost, 5U);
    }
    if (f.name == "full_adder") {
      EXPECT_EQ(r.gate_cost, 4U);
      EXPECT_EQ(r.quantum_cost, 12U);
      EXPECT_EQ(r.wires, 4U);
    }
  }
}

TEST(CostReport, AdditiveAndInverseInvariant) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const Circuit a = random_circuit(rng, {5, 6, 0.4, 0.3, 4});
    const Circuit b = random_circuit(rng, {5, 4, 0.4, 0.3, 4});
    std::vector<Gate> both = a.gates();
    both.insert(both.end(), b.gates().begin(), b.gates().end());
    EXPECT_EQ(cost_report(a.with_gates(both)).quantum_cost,
              cost_report(a).quantum_cost + cost_report(b).quantum_cost);
    EXPECT_EQ(cost_report(inverse(a)), cost_report(a));
  }
}

TEST(CostDelta, SelfIsZero) {
  const auto fixtures = load_fixtures();
  const CostDelta d = cost_delta(fixtures.front().circuit, fixtures.front().circuit);
  for (const auto *m : {&d.wires, &d.gate_cost, &d.quantum_cost, &d.constant_inputs, &d.garbage_outputs}) {
    EXPECT_EQ(m->absolute, 0);
    if (m->percentage) EXPECT_DOUBLE_EQ(*m->percentage, 0.0);
  }
}

TEST(CostDelta, PercentageFromAbsolutes) {
  const MetricDelta d = metric_delta(4, 10);
  EXPECT_EQ(d.absolute, 6);
  ASSERT_TRUE(d.percentage.has_value());
  EXPECT_DOUBLE_EQ(*d.percentage, 150.0);
  EXPECT_FALSE(metric_delta(0, 3).percentage.has_value());
  const MetricDelta down = metric_delta(10, 4);
  EXPECT_EQ(down.absolute, -6);
  EXPECT_DOUBLE_EQ(*down.percentage, -60.0);
}
