#include "revdft/online.hpp"

#include <algorithm>
#include <random>

namespace revdft {

namespace {

template <class Pred>
std::optional<State> find_state(std::size_t width, std::size_t samples, std::uint64_t seed,
                                Pred &&bad) {
  if (width <= 12) {
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << width); ++x) {
      State s = State::from_integer(x, width);
      if (bad(s)) {
        return s;
      }
    }
    return std::nullopt;
  }
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  for (std::size_t i = 0; i < samples; ++i) {
    State s(width);
    for (std::size_t b = 0; b < width; ++b) {
      s.set(LineId{b}, coin(rng));
    }
    if (bad(s)) {
      return s;
    }
  }
  return std::nullopt;
}

void require_family(const Circuit &circuit, GateKind kind, const char *operation) {
  for (std::size_t k = 0; k < circuit.num_gates(); ++k) {
    if (circuit.gate(k).kind != kind) {
      throw PreconditionError(std::string(operation) + ": gate " + std::to_string(k + 1) +
                              " is " + (kind == GateKind::mct ? "MCF" : "MCT") +
                              "; expected an all-" + (kind == GateKind::mct ? "MCT" : "MCF") +
                              " circuit");
    }
  }
}

bool same_control_set(const std::vector<Control> &a, const std::vector<Control> &b) {
  return a.size() == b.size() && std::all_of(a.begin(), a.end(), [&](const Control &c) {
           return std::find(b.begin(), b.end(), c) != b.end();
         });
}

/// Appends the parity line and a companion after every MCT gate.
Circuit add_companions(const Circuit &circuit, LineId &parity) {
  CircuitBuilder builder(circuit.with_gates({}));
  parity = LineId{builder.add_constant(unique_line_name(circuit, "p"), false, true)};
  for (const auto &gate : circuit.gates()) {
    builder.add(gate);
    if (gate.is_mct()) {
      builder.add(Gate{GateKind::mct, gate.controls, {parity}});
    }
  }
  return builder.build();
}

std::vector<std::size_t> observation_segments(const Circuit &circuit,
                                              std::optional<LineId> parity) {
  const std::size_t taps = circuit.num_lines() - 1;
  const std::size_t g = circuit.num_gates();
  std::vector<std::size_t> out;
  if (g < 2 * taps) {
    return out;
  }
  for (std::size_t seg = taps; seg <= g - taps; ++seg) {
    const bool before_companion = seg < g - taps && parity && circuit.gate(seg).is_mct() &&
                                  circuit.gate(seg).targets[0] == *parity;
    if (!before_companion) {
      out.push_back(seg);
    }
  }
  return out;
}

OnlineTestableCircuit wrap(const Circuit &circuit, std::optional<LineId> parity,
                           const std::string &method, std::size_t original_lines) {
  CircuitBuilder builder(circuit.with_gates({}));
  const std::string check_name = unique_line_name(circuit, "chk");
  const LineId check{builder.add_constant(check_name, false, true)};
  for (std::size_t l = 0; l < circuit.num_lines(); ++l) {
    builder.add(Gate::cnot(l, check.index));
  }
  for (const auto &gate : circuit.gates()) {
    builder.add(gate);
  }
  for (std::size_t l = 0; l < circuit.num_lines(); ++l) {
    builder.add(Gate::cnot(l, check.index));
  }

  std::map<std::string, std::string> fields{
      {"method", method},
      {"check", check_name},
      {"original", std::to_string(original_lines)},
  };
  if (parity) {
    fields["parity"] = circuit.line(*parity).name;
  }
  OnlineTestableCircuit out;
  out.circuit = with_provenance(builder.build(), fields);
  out.parity_line = parity;
  out.check_line = check;
  out.original_lines = original_lines;
  out.method = method;
  out.observation_segments = observation_segments(out.circuit, parity);
  return out;
}

void require_parity_preserving(const Circuit &circuit) {
  if (auto witness = parity_violation(circuit)) {
    throw PreconditionError("not parity preserving: input " + witness->to_string() +
                            " gives output " + run(circuit, *witness).to_string());
  }
}

OnlineTestableCircuit mctf_pipeline(const Circuit &circuit) {
  const Circuit rewritten = rewrite_controlled_swaps(circuit);
  const bool has_mct = std::any_of(rewritten.gates().begin(), rewritten.gates().end(),
                                   [](const Gate &g) { return g.is_mct(); });
  if (!has_mct) {
    return wrap(rewritten, std::nullopt, "online-mctf", circuit.num_lines());
  }
  LineId parity;
  const Circuit pp = add_companions(rewritten, parity);
  return wrap(pp, parity, "online-mctf", circuit.num_lines());
}

}  // namespace

std::optional<State> parity_violation(const Circuit &circuit, std::size_t samples,
                                      std::uint64_t seed) {
  return find_state(circuit.num_lines(), samples, seed,
                    [&](const State &s) { return run(circuit, s).parity() != s.parity(); });
}

std::optional<State> conservativity_violation(const Circuit &circuit, std::size_t samples,
                                              std::uint64_t seed) {
  return find_state(circuit.num_lines(), samples, seed,
                    [&](const State &s) { return run(circuit, s).popcount() != s.popcount(); });
}

Circuit make_parity_preserving_mct(const Circuit &circuit) {
  require_family(circuit, GateKind::mct, "make_parity_preserving_mct");
  LineId parity;
  return add_companions(circuit, parity);
}

Circuit make_parity_preserving_mcf(const Circuit &circuit) {
  require_family(circuit, GateKind::mcf, "make_parity_preserving_mcf");
  if (auto witness = conservativity_violation(circuit)) {
    throw PreconditionError("MCF circuit is not conservative on input " + witness->to_string());
  }
  return circuit;
}

OnlineTestableCircuit add_parity_checker(const Circuit &circuit) {
  require_parity_preserving(circuit);
  return wrap(circuit, std::nullopt, "checker", circuit.num_lines());
}

OnlineTestableCircuit modify_mct_online(const Circuit &circuit) {
  require_family(circuit, GateKind::mct, "modify_mct_online");
  LineId parity;
  const Circuit pp = add_companions(circuit, parity);
  require_parity_preserving(pp);
  return wrap(pp, parity, "online-mct", circuit.num_lines());
}

OnlineTestableCircuit modify_mcf_online(const Circuit &circuit) {
  const Circuit pp = make_parity_preserving_mcf(circuit);
  return wrap(pp, std::nullopt, "online-mcf", circuit.num_lines());
}

OnlineTestableCircuit convert_mct_to_mctf_online(const Circuit &circuit) {
  require_family(circuit, GateKind::mct, "convert_mct_to_mctf_online");
  return mctf_pipeline(circuit);
}

OnlineTestableCircuit make_online_mctf(const Circuit &circuit) {
  ensure_valid(circuit);
  return mctf_pipeline(circuit);
}

std::optional<Gate> match_controlled_swap(const std::vector<Gate> &gates, std::size_t start) {
  if (start + 2 >= gates.size()) {
    return std::nullopt;
  }
  const Gate &outer = gates[start];
  const Gate &middle = gates[start + 1];
  const Gate &last = gates[start + 2];
  if (!outer.is_mct() || !middle.is_mct() || !last.is_mct()) {
    return std::nullopt;
  }
  if (last.targets != outer.targets || !same_control_set(outer.controls, last.controls)) {
    return std::nullopt;
  }
  const LineId x = outer.targets[0];
  const LineId y = middle.targets[0];
  if (x == y) {
    return std::nullopt;
  }
  const Control y_pos{y, Polarity::positive};
  const Control x_pos{x, Polarity::positive};
  if (std::find(outer.controls.begin(), outer.controls.end(), y_pos) == outer.controls.end() ||
      std::find(middle.controls.begin(), middle.controls.end(), x_pos) == middle.controls.end()) {
    return std::nullopt;
  }
  std::vector<Control> swap_controls;
  for (const auto &c : middle.controls) {
    if (c.line != x) {
      swap_controls.push_back(c);
    }
  }
  // Outer controls (minus y) must be a subset of the middle gate's controls.
  for (const auto &c : outer.controls) {
    if (c.line != y &&
        std::find(swap_controls.begin(), swap_controls.end(), c) == swap_controls.end()) {
      return std::nullopt;
    }
  }
  return Gate{GateKind::mcf, std::move(swap_controls), {x, y}};
}

Circuit rewrite_controlled_swaps(const Circuit &circuit) {
  std::vector<Gate> gates = circuit.gates();
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<Gate> next;
    next.reserve(gates.size());
    for (std::size_t i = 0; i < gates.size();) {
      if (auto mcf = match_controlled_swap(gates, i)) {
        next.push_back(std::move(*mcf));
        i += 3;
        changed = true;
      } else {
        next.push_back(gates[i]);
        ++i;
      }
    }
    gates = std::move(next);
  }
  return circuit.with_gates(std::move(gates));
}

std::size_t ParityPreservingBuilder::add_input(std::string name, bool is_output) {
  return base_.add_input(std::move(name), is_output);
}

std::size_t ParityPreservingBuilder::add_constant(std::string name, bool value, bool is_output) {
  return base_.add_constant(std::move(name), value, is_output);
}

ParityPreservingBuilder &ParityPreservingBuilder::add(Gate gate) {
  gates_.push_back(std::move(gate));
  return *this;
}

OnlineTestableCircuit ParityPreservingBuilder::build() const {
  const Circuit lines_only = base_.build();
  const bool has_mct =
      std::any_of(gates_.begin(), gates_.end(), [](const Gate &g) { return g.is_mct(); });
  const bool has_mcf =
      std::any_of(gates_.begin(), gates_.end(), [](const Gate &g) { return g.is_mcf(); });
  const std::string method = has_mct && has_mcf ? "online-mctf"
                             : has_mcf          ? "online-mcf"
                                                : "online-mct";
  const Circuit circuit = lines_only.with_gates(gates_);
  ensure_valid(circuit);
  if (!has_mct) {
    return wrap(make_parity_preserving_mcf(circuit), std::nullopt, method, circuit.num_lines());
  }
  LineId parity;
  const Circuit pp = add_companions(circuit, parity);
  return wrap(pp, parity, method, circuit.num_lines());
}

FaultUniverse online_bit_flip_universe(const OnlineTestableCircuit &online) {
  EnumerationOptions options;
  std::vector<LineId> lines;
  for (std::size_t i = 0; i < online.circuit.num_lines(); ++i) {
    if (LineId{i} != online.check_line) {
      lines.push_back(LineId{i});
    }
  }
  options.lines = std::move(lines);
  options.segments = online.observation_segments;
  return enumerate_faults(online.circuit, FaultKind::bit_flip, 1, options);
}

TestSet online_test_set(const OnlineTestableCircuit &online) {
  return TestSet{"exhaustive", exhaustive_inputs(online.circuit), ResponseRule::check_line_zero,
                 online.check_line};
}

std::optional<OnlineTestableCircuit> online_from_metadata(const Circuit &circuit) {
  const auto fields = provenance(circuit);
  auto method = fields.find("method");
  auto check = fields.find("check");
  if (method == fields.end() || check == fields.end()) {
    return std::nullopt;
  }
  OnlineTestableCircuit out;
  out.circuit = circuit;
  out.method = method->second;
  out.check_line = circuit.line_id(check->second);
  if (auto parity = fields.find("parity"); parity != fields.end()) {
    out.parity_line = circuit.line_id(parity->second);
  }
  if (auto original = fields.find("original"); original != fields.end()) {
    out.original_lines = std::stoul(original->second);
  } else {
    out.original_lines = circuit.num_lines() - 1 - (out.parity_line ? 1 : 0);
  }
  out.observation_segments = observation_segments(circuit, out.parity_line);
  return out;
}

}  // namespace revdft
