#include <gtest/gtest.h>

#include <random>
#include <set>

#include "revdft/circuit.hpp"
#include "revdft/faultsim.hpp"
#include "support.hpp"

using namespace revdft;
using namespace revdft::testing;

namespace {

Circuit lines_only(std::size_t n) {
  CircuitBuilder b;
  for (std::size_t i = 0; i < n; ++i) b.add_input(std::string(1, static_cast<char>('a' + i)));
  return b.build();
}

Circuit with(std::size_t n, std::vector<Gate> gates) { return lines_only(n).with_gates(std::move(gates)); }

}  // namespace

TEST(ApplyGate, ToffoliFlipsWhenBothControlsSet) {
  EXPECT_EQ(apply_gate(Gate::toffoli(0, 1, 2), State::from_string("110")).to_string(), "111");
  EXPECT_EQ(apply_gate(Gate::toffoli(0, 1, 2), State::from_string("100")).to_string(), "100");
}

TEST(ApplyGate, FredkinSwapsTargets) {
  EXPECT_EQ(apply_gate(Gate::fredkin(0, 1, 2), State::from_string("101")).to_string(), "110");
  EXPECT_EQ(apply_gate(Gate::fredkin(0, 1, 2), State::from_string("001")).to_string(), "001");
}

TEST(ApplyGate, NegativeControlFiresOnZero) {
  EXPECT_EQ(apply_gate(Gate::mct({neg(0)}, 1), State::from_string("01")).to_string(), "00");
  EXPECT_EQ(apply_gate(Gate::mct({neg(0)}, 1), State::from_string("11")).to_string(), "11");
}

TEST(ApplyGate, ZeroControlGatesAreNotAndSwap) {
  EXPECT_EQ(apply_gate(Gate::not_gate(0), State::from_string("01")).to_string(), "11");
  EXPECT_EQ(apply_gate(Gate::mcf({}, 0, 1), State::from_string("10")).to_string(), "01");
}

TEST(ApplyGate, WidthMismatchIsStructuralError) {
  EXPECT_THROW(apply_gate(Gate::toffoli(0, 1, 2), State::from_string("11")), StructuralError);
}

TEST(ApplyGate, SelfInverseExhaustive) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const Circuit c = random_circuit(rng, {6, 1, 0.5, 0.3, 4});
    const Gate &g = c.gate(0);
    for (const auto &s : all_states(6)) {
      EXPECT_EQ(apply_gate(g, apply_gate(g, s)), s);
    }
  }
}

TEST(Run, EmptyCircuitIsIdentity) {
  const Circuit c = lines_only(3);
  EXPECT_EQ(run(c, State::from_string("101")).to_string(), "101");
}

TEST(Run, NotOnFirstLine) {
  EXPECT_EQ(run(with(2, {Gate::not_gate(0)}), State::from_string("01")).to_string(), "11");
}

TEST(Run, ThreeCnotSwap) {
  const Circuit c = with(2, {Gate::cnot(0, 1), Gate::cnot(1, 0), Gate::cnot(0, 1)});
  for (unsigned x = 0; x < 4; ++x) {
    const State in = State::from_integer(x, 2);
    const State out = run(c, in);
    EXPECT_EQ(out[0], in[1]);
    EXPECT_EQ(out[1], in[0]);
  }
}

TEST(Run, MatchesMaskOracleOnRandomCircuits) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const Circuit c = random_circuit(rng, {5, 8, 0.4, 0.3, 3});
    const auto masks = to_masks(c);
    for (std::uint64_t x = 0; x < 32; ++x) {
      EXPECT_EQ(to_mask(run(c, State::from_integer(x, 5))), oracle_run(masks, x));
    }
  }
}

TEST(Run, EnforceModeRejectsWrongConstant) {
  CircuitBuilder b;
  b.add_input("a");
  b.add_constant("z", true);
  const Circuit c = b.build();
  EXPECT_THROW(run(c, State::from_string("10"), ConstantMode::enforce), StructuralError);
  EXPECT_NO_THROW(run(c, State::from_string("11"), ConstantMode::enforce));
  EXPECT_NO_THROW(run(c, State::from_string("10"), ConstantMode::ignore));
}

TEST(RunTraced, LengthAndConsistency) {
  std::mt19937_64 rng(3);
  const Circuit c = random_circuit(rng, {4, 7, 0.3, 0.2, 3});
  for (std::uint64_t x = 0; x < 16; ++x) {
    const State in = State::from_integer(x, 4);
    const auto trace = run_traced(c, in);
    ASSERT_EQ(trace.size(), c.num_gates() + 1);
    EXPECT_EQ(trace.front(), in);
    for (std::size_t k = 0; k < c.num_gates(); ++k) {
      EXPECT_EQ(trace[k + 1], apply_gate(c.gate(k), trace[k]));
    }
    EXPECT_EQ(trace.back(), run(c, in));
  }
  EXPECT_EQ(run_traced(lines_only(1), State::from_string("0")).size(), 1U);
  const auto t = run_traced(with(1, {Gate::not_gate(0)}), State::from_string("0"));
  ASSERT_EQ(t.size(), 2U);
  EXPECT_EQ(t[1].to_string(), "1");
}

TEST(Inverse, ComposesToIdentity) {
  const Circuit c = with(3, {Gate::cnot(2, 0), Gate::toffoli(0, 1, 2), Gate::mct({pos(0), neg(2)}, 1),
                             Gate::not_gate(1)});
  const Circuit inv = inverse(c);
  EXPECT_EQ(inv.num_gates(), c.num_gates());
  for (std::uint64_t x = 0; x < 8; ++x) {
    const State s = State::from_integer(x, 3);
    EXPECT_EQ(run(inv, run(c, s)), s);
  }
  const Circuit single = with(3, {Gate::toffoli(0, 1, 2)});
  EXPECT_EQ(inverse(single), single);
  EXPECT_EQ(inverse(lines_only(2)), lines_only(2));
}

TEST(Validate, WellFormedHasNoViolations) {
  EXPECT_TRUE(validate(with(3, {Gate::toffoli(0, 1, 2)})).empty());
}

TEST(Validate, TargetAlsoControl) {
  const Circuit bad({LineInfo{"a"}, LineInfo{"b"}}, {Gate{GateKind::mct, {pos(0)}, {LineId{0}}}});
  const auto v = validate(bad);
  ASSERT_EQ(v.size(), 1U);
  EXPECT_EQ(v[0].gate, std::optional<std::size_t>(0));
}

TEST(Validate, FredkinIdenticalTargets) {
  const Circuit bad({LineInfo{"a"}, LineInfo{"b"}},
                    {Gate{GateKind::mcf, {}, {LineId{1}, LineId{1}}}});
  EXPECT_EQ(validate(bad).size(), 1U);
}

TEST(Validate, BuilderRejectsBadGate) {
  CircuitBuilder b;
  b.add_input("a");
  b.add(Gate::not_gate(3));
  EXPECT_THROW(b.build(), StructuralError);
}

TEST(Properties, BijectiveOnRandomCircuits) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + trial % 9;
    const Circuit c = random_circuit(rng, {n, 10, 0.3, 0.3, 4});
    std::set<std::uint64_t> seen;
    for (std::uint64_t x = 0; x < (1ULL << n); ++x) {
      seen.insert(to_mask(run(c, State::from_integer(x, n))));
    }
    EXPECT_EQ(seen.size(), 1ULL << n);
  }
}

TEST(Properties, McfConservativeWithFixedPoints) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 3 + trial % 6;
    const Circuit c = random_circuit(rng, {n, 8, 1.0, 0.5, 3});
    ASSERT_TRUE(c.all_mcf());
    for (std::uint64_t x = 0; x < (1ULL << n); ++x) {
      const State s = State::from_integer(x, n);
      EXPECT_EQ(run(c, s).popcount(), s.popcount());
    }
    const State zeros(n);
    State ones(n);
    for (std::size_t i = 0; i < n; ++i) ones.set(LineId{i}, true);
    EXPECT_EQ(run(c, zeros), zeros);
    EXPECT_EQ(run(c, ones), ones);
  }
}

TEST(Circuit, LineSetsAndProvenance) {
  CircuitBuilder b;
  b.add_input("a");
  b.add_input("b", false);
  b.add_constant("z", false, true);
  const Circuit c = b.build();
  EXPECT_EQ(c.primary_inputs().size(), 2U);
  EXPECT_EQ(c.constant_lines().size(), 1U);
  EXPECT_EQ(c.garbage(), std::vector<LineId>{LineId{1}});
  EXPECT_EQ(unique_line_name(c, "a"), "a_1");
  EXPECT_EQ(unique_line_name(c, "p"), "p");
  const Circuit tagged = with_provenance(c, {{"method", "x"}, {"check", "z"}});
  EXPECT_EQ(provenance(tagged).at("method"), "x");
  EXPECT_EQ(provenance(tagged).at("check"), "z");
  EXPECT_TRUE(provenance(c).empty());
}
