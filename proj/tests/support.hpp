#pragma once

// Shared helpers for the test binaries: fixture loading, random circuits and
// an integer-mask simulator that does not go through State or apply_gate.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "revdft/circuit.hpp"
#include "revdft/tfc.hpp"

namespace revdft::testing {

inline std::filesystem::path fixture_dir() { return REVDFT_FIXTURE_DIR; }

struct Fixture {
  std::string name;
  Circuit circuit;
};

inline std::vector<Fixture> load_fixtures() {
  std::vector<Fixture> out;
  std::vector<std::filesystem::path> paths;
  for (const auto &entry : std::filesystem::directory_iterator(fixture_dir())) {
    if (entry.is_regular_file() && entry.path().extension() == ".tfc") {
      paths.push_back(entry.path());
    }
  }
  std::sort(paths.begin(), paths.end());
  for (const auto &p : paths) {
    out.push_back({p.stem().string(), read_tfc_file(p.string())});
  }
  return out;
}

inline bool is_all_mct(const Circuit &c) { return c.num_gates() > 0 && c.all_mct(); }
inline bool is_all_mcf(const Circuit &c) { return c.num_gates() > 0 && c.all_mcf(); }

// Bit i of a mask is line i.
struct MaskGate {
  bool fredkin = false;
  std::uint64_t positive = 0;
  std::uint64_t negative = 0;
  unsigned t1 = 0;
  unsigned t2 = 0;
};

inline std::vector<MaskGate> to_masks(const Circuit &c) {
  std::vector<MaskGate> out;
  for (const auto &g : c.gates()) {
    MaskGate m;
    m.fredkin = g.is_mcf();
    for (const auto &ctl : g.controls) {
      (ctl.polarity == Polarity::positive ? m.positive : m.negative) |= 1ULL << ctl.line.index;
    }
    m.t1 = static_cast<unsigned>(g.targets.at(0).index);
    if (m.fredkin) {
      m.t2 = static_cast<unsigned>(g.targets.at(1).index);
    }
    out.push_back(m);
  }
  return out;
}

inline std::uint64_t oracle_step(const MaskGate &g, std::uint64_t s) {
  if ((s & g.positive) != g.positive || (s & g.negative) != 0) {
    return s;
  }
  if (!g.fredkin) {
    return s ^ (1ULL << g.t1);
  }
  const std::uint64_t a = (s >> g.t1) & 1U;
  const std::uint64_t b = (s >> g.t2) & 1U;
  if (a != b) {
    s ^= (1ULL << g.t1) | (1ULL << g.t2);
  }
  return s;
}

inline std::uint64_t oracle_run(const std::vector<MaskGate> &gates, std::uint64_t s) {
  for (const auto &g : gates) {
    s = oracle_step(g, s);
  }
  return s;
}

inline std::uint64_t to_mask(const State &s) {
  std::uint64_t m = 0;
  for (std::size_t i = 0; i < s.width(); ++i) {
    if (s[i]) m |= 1ULL << i;
  }
  return m;
}

struct RandomCircuitOptions {
  std::size_t lines = 4;
  std::size_t gates = 6;
  double mcf_share = 0.0;
  double negative_share = 0.0;
  std::size_t max_controls = 3;
};

inline Circuit random_circuit(std::mt19937_64 &rng, const RandomCircuitOptions &o) {
  CircuitBuilder b;
  for (std::size_t i = 0; i < o.lines; ++i) {
    b.add_input("l" + std::to_string(i));
  }
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (std::size_t k = 0; k < o.gates; ++k) {
    std::vector<std::size_t> order(o.lines);
    for (std::size_t i = 0; i < o.lines; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    const bool fredkin = o.lines >= 2 && coin(rng) < o.mcf_share;
    const std::size_t targets = fredkin ? 2 : 1;
    const std::size_t room = std::min(o.max_controls, o.lines - targets);
    const std::size_t controls = std::uniform_int_distribution<std::size_t>(0, room)(rng);
    std::vector<Control> ctl;
    for (std::size_t c = 0; c < controls; ++c) {
      ctl.push_back(coin(rng) < o.negative_share ? neg(order[targets + c]) : pos(order[targets + c]));
    }
    b.add(fredkin ? Gate::mcf(ctl, order[0], order[1]) : Gate::mct(ctl, order[0]));
  }
  return b.build();
}

}  // namespace revdft::testing
