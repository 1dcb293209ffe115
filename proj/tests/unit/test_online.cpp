#include <gtest/gtest.h>

#include <random>

#include "revdft/online.hpp"
#include "revdft/tfc.hpp"
#include "support.hpp"

using namespace revdft;
using namespace revdft::testing;

namespace {

Circuit make(std::size_t n, std::vector<Gate> gates) {
  CircuitBuilder b;
  for (std::size_t i = 0; i < n; ++i) b.add_input(std::string(1, static_cast<char>('a' + i)));
  for (auto &g : gates) b.add(std::move(g));
  return b.build();
}

// XOR of every line except `skip`.
bool parity_without(const State &s, std::optional<LineId> skip) {
  bool p = false;
  for (std::size_t i = 0; i < s.width(); ++i) {
    if (!skip || skip->index != i) p ^= s[i];
  }
  return p;
}

void expect_online_invariants(const Circuit &original, const OnlineTestableCircuit &t) {
  const std::size_t n = original.num_lines();
  ASSERT_EQ(t.original_lines, n);
  for (std::uint64_t x = 0; x < (1ULL << n); ++x) {
    const State in = State::from_integer(x, n);
    const State out = run(t.circuit, extend_state(t.circuit, in));
    const State ref = run(original, in);
    for (std::size_t i = 0; i < n; ++i) {
      ASSERT_EQ(out[i], ref[i]) << "line " << i << " input " << in.to_string();
    }
    ASSERT_FALSE(out.get(t.check_line)) << in.to_string();
    EXPECT_EQ(parity_without(out, t.check_line), parity_without(extend_state(t.circuit, in), t.check_line));
  }
}

double original_line_coverage(const OnlineTestableCircuit &t) {
  EnumerationOptions o;
  std::vector<LineId> lines;
  for (std::size_t i = 0; i < t.original_lines; ++i) lines.push_back(LineId{i});
  o.lines = lines;
  o.segments = t.observation_segments;
  const auto u = enumerate_faults(t.circuit, FaultKind::bit_flip, 1, o);
  return grade(t.circuit, online_test_set(t), u).coverage;
}

}  // namespace

TEST(ParityPreservingMct, CompanionAfterEachGate) {
  const Circuit c = make_parity_preserving_mct(make(2, {Gate::cnot(0, 1)}));
  ASSERT_EQ(c.num_lines(), 3U);
  EXPECT_EQ(c.gates(), (std::vector<Gate>{Gate::cnot(0, 1), Gate::cnot(0, 2)}));
  EXPECT_FALSE(parity_violation(c).has_value());
  const Circuit n = make_parity_preserving_mct(make(1, {Gate::not_gate(0)}));
  EXPECT_EQ(n.gates(), (std::vector<Gate>{Gate::not_gate(0), Gate::not_gate(1)}));
  const Circuit e = make_parity_preserving_mct(make(2, {}));
  EXPECT_EQ(e.num_lines(), 3U);
  EXPECT_EQ(e.num_gates(), 0U);
  EXPECT_THROW(make_parity_preserving_mct(make(3, {Gate::fredkin(0, 1, 2)})), PreconditionError);
}

TEST(ParityPreservingMcf, UnchangedAndVerified) {
  const Circuit f = make(3, {Gate::fredkin(0, 1, 2)});
  EXPECT_EQ(make_parity_preserving_mcf(f), f);
  EXPECT_EQ(make_parity_preserving_mcf(make(2, {})), make(2, {}));
  std::mt19937_64 rng(2);
  const Circuit r = random_circuit(rng, {6, 5, 1.0, 0.3, 3});
  EXPECT_EQ(make_parity_preserving_mcf(r), r);
  EXPECT_FALSE(conservativity_violation(r).has_value());
  EXPECT_THROW(make_parity_preserving_mcf(make(2, {Gate::cnot(0, 1)})), PreconditionError);
}

TEST(ParityChecker, RejectsNonPreservingWithWitness) {
  try {
    add_parity_checker(make(1, {Gate::not_gate(0)}));
    FAIL() << "expected PreconditionError";
  } catch (const PreconditionError &e) {
    EXPECT_NE(std::string(e.what()).find("not parity preserving"), std::string::npos);
  }
}

TEST(ParityChecker, TwoLineCircuit) {
  const Circuit base = make(2, {Gate::mcf({}, 0, 1)});
  const auto t = add_parity_checker(base);
  EXPECT_EQ(t.circuit.num_gates(), 1U + 2U * 2U);
  expect_online_invariants(base, t);
  for (const auto &s : exhaustive_inputs(t.circuit)) {
    const std::vector<Fault> f{BitFlip{LineId{0}, 2}};
    EXPECT_TRUE(run_faulty(t.circuit, s, f).get(t.check_line));
  }
}

TEST(ModifyMctOnline, GateCountAndWires) {
  const Circuit c = make(3, {Gate::toffoli(0, 1, 2), Gate::cnot(2, 0), Gate::mct({neg(0)}, 1)});
  const auto t = modify_mct_online(c);
  EXPECT_EQ(t.circuit.num_gates(), 14U);
  EXPECT_EQ(t.circuit.num_lines(), 5U);
  EXPECT_EQ(t.circuit.garbage().size(), c.garbage().size());
  EXPECT_TRUE(t.parity_line.has_value());
  EXPECT_TRUE(t.circuit.line(t.check_line).is_output);
  expect_online_invariants(c, t);
  EXPECT_DOUBLE_EQ(original_line_coverage(t), 1.0);
  EXPECT_THROW(modify_mct_online(make(3, {Gate::fredkin(0, 1, 2)})), PreconditionError);
}

TEST(ModifyMctOnline, RandomCircuitsKeepInvariants) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 15; ++trial) {
    const std::size_t n = 1 + trial % 6;
    const Circuit c = random_circuit(rng, {n, 1 + static_cast<std::size_t>(trial % 7), 0.0, 0.3, 3});
    const auto t = modify_mct_online(c);
    EXPECT_EQ(t.circuit.num_gates(), 2 * c.num_gates() + 2 * (n + 1));
    expect_online_invariants(c, t);
    EXPECT_DOUBLE_EQ(original_line_coverage(t), 1.0);
  }
}

TEST(ModifyMcfOnline, FredkinWrap) {
  const Circuit f = make(3, {Gate::fredkin(0, 1, 2)});
  const auto t = modify_mcf_online(f);
  EXPECT_EQ(t.circuit.num_lines(), 4U);
  EXPECT_FALSE(t.parity_line.has_value());
  EXPECT_EQ(t.circuit.num_gates(), 1U + 2U * 3U);
  expect_online_invariants(f, t);
  // Flip on a target right after the Fredkin.
  for (const auto &s : exhaustive_inputs(t.circuit)) {
    const std::vector<Fault> flip{BitFlip{LineId{2}, 4}};
    EXPECT_TRUE(run_faulty(t.circuit, s, flip).get(t.check_line));
  }
  EXPECT_DOUBLE_EQ(original_line_coverage(t), 1.0);
  EXPECT_THROW(modify_mcf_online(make(2, {Gate::cnot(0, 1)})), PreconditionError);
}

TEST(ControlledSwap, RewriteRuleEquivalence) {
  // [MCT({c} -> b), MCT({a,b} -> c), MCT({c} -> b)] == MCF({a}; b, c)
  const std::vector<Gate> triple{Gate::cnot(2, 1), Gate::toffoli(0, 1, 2), Gate::cnot(2, 1)};
  const auto m = match_controlled_swap(triple, 0);
  ASSERT_TRUE(m.has_value());
  EXPECT_TRUE(m->is_mcf());
  const Circuit lhs = make(3, triple);
  const Circuit rhs = make(3, {*m});
  for (const auto &s : all_states(3)) {
    EXPECT_EQ(run(lhs, s), run(rhs, s));
  }
  const auto swap = match_controlled_swap({Gate::cnot(0, 1), Gate::cnot(1, 0), Gate::cnot(0, 1)}, 0);
  ASSERT_TRUE(swap.has_value());
  EXPECT_TRUE(swap->controls.empty());
}

TEST(ControlledSwap, EveryRewriteIsSound) {
  std::mt19937_64 rng(61);
  int matched = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    const Circuit c = random_circuit(rng, {4, 3, 0.0, 0.3, 2});
    const auto m = match_controlled_swap(c.gates(), 0);
    if (!m) continue;
    ++matched;
    const Circuit rhs = c.with_gates({*m});
    for (const auto &s : all_states(4)) {
      ASSERT_EQ(run(c, s), run(rhs, s)) << write_tfc(c);
    }
  }
  // Also plant patterns so the positive path is exercised.
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Control> ctl{pos(2)};
    if (trial % 2) ctl.push_back(neg(3));
    std::vector<Control> outer = trial % 3 ? std::vector<Control>{} : ctl;
    std::vector<Control> o1 = outer;
    o1.push_back(pos(1));
    std::vector<Control> mid = ctl;
    mid.push_back(pos(0));
    const std::vector<Gate> g{Gate::mct(o1, 0), Gate::mct(mid, 1), Gate::mct(o1, 0)};
    const Circuit c = make(4, g);
    const auto m = match_controlled_swap(g, 0);
    ASSERT_TRUE(m.has_value());
    ++matched;
    for (const auto &s : all_states(4)) {
      ASSERT_EQ(run(c, s), run(c.with_gates({*m}), s));
    }
  }
  EXPECT_GE(matched, 50);
}

TEST(ConvertMctf, NoPatternMatchesMctOnline) {
  const Circuit c = make(3, {Gate::toffoli(0, 1, 2), Gate::not_gate(0)});
  EXPECT_EQ(convert_mct_to_mctf_online(c).circuit.gates(), modify_mct_online(c).circuit.gates());
}

TEST(ConvertMctf, FullPatternIsCheaper) {
  const Circuit c = make(3, {Gate::cnot(2, 1), Gate::toffoli(0, 1, 2), Gate::cnot(2, 1)});
  const auto mctf = convert_mct_to_mctf_online(c);
  const auto mct = modify_mct_online(c);
  EXPECT_LT(mctf.circuit.num_gates(), mct.circuit.num_gates());
  expect_online_invariants(c, mctf);
  EXPECT_DOUBLE_EQ(original_line_coverage(mctf), 1.0);
}

TEST(ConvertMctf, FixpointHasNoPattern) {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 40; ++trial) {
    // Nested swaps collapse in more than one pass.
    std::vector<Gate> g{Gate::cnot(0, 1), Gate::cnot(2, 3), Gate::cnot(3, 2), Gate::cnot(2, 3),
                        Gate::cnot(1, 0), Gate::cnot(0, 1)};
    const Circuit extra = random_circuit(rng, {4, 4, 0.0, 0.3, 2});
    g.insert(g.end(), extra.gates().begin(), extra.gates().end());
    const Circuit c = make(4, g);
    const Circuit rewritten = rewrite_controlled_swaps(c);
    for (std::size_t k = 0; k + 2 < rewritten.num_gates(); ++k) {
      EXPECT_FALSE(match_controlled_swap(rewritten.gates(), k).has_value());
    }
    for (const auto &s : all_states(4)) {
      ASSERT_EQ(run(c, s), run(rewritten, s));
    }
    const auto t = convert_mct_to_mctf_online(c);
    expect_online_invariants(c, t);
  }
}

TEST(ConvertMctf, RejectsMcfInput) {
  EXPECT_THROW(convert_mct_to_mctf_online(make(3, {Gate::fredkin(0, 1, 2)})), PreconditionError);
}

TEST(Builder, SameAsTransformer) {
  const Circuit c = make(3, {Gate::toffoli(0, 1, 2), Gate::fredkin(2, 0, 1), Gate::cnot(0, 1)});
  ParityPreservingBuilder b;
  for (auto n : {"a", "b", "c"}) b.add_input(n);
  for (const auto &g : c.gates()) b.add(g);
  const auto built = b.build();
  const auto transformed = make_online_mctf(c);
  EXPECT_EQ(built.circuit.gates(), transformed.circuit.gates());
  expect_online_invariants(c, built);
}

TEST(Metadata, RecoversWrapper) {
  const Circuit c = make(3, {Gate::toffoli(0, 1, 2)});
  const auto t = modify_mct_online(c);
  const auto back = online_from_metadata(parse_tfc(write_tfc(t.circuit)));
  ASSERT_TRUE(back.has_value());
  EXPECT_EQ(back->check_line, t.check_line);
  EXPECT_EQ(back->parity_line, t.parity_line);
  EXPECT_EQ(back->observation_segments, t.observation_segments);
  EXPECT_EQ(back->method, "online-mct");
  EXPECT_FALSE(online_from_metadata(c).has_value());
}

TEST(Fixtures, AllApplicableMethodsReachFullCoverage) {
  for (const auto &f : load_fixtures()) {
    SCOPED_TRACE(f.name);
    if (is_all_mct(f.circuit)) {
      const auto a = modify_mct_online(f.circuit);
      expect_online_invariants(f.circuit, a);
      EXPECT_DOUBLE_EQ(original_line_coverage(a), 1.0);
      const auto b = convert_mct_to_mctf_online(f.circuit);
      expect_online_invariants(f.circuit, b);
      EXPECT_DOUBLE_EQ(original_line_coverage(b), 1.0);
    }
    if (is_all_mcf(f.circuit)) {
      const auto m = modify_mcf_online(f.circuit);
      expect_online_invariants(f.circuit, m);
      EXPECT_DOUBLE_EQ(original_line_coverage(m), 1.0);
    }
  }
}
