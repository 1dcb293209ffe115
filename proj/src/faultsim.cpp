#include "revdft/faultsim.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>
#include <thread>

namespace revdft {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr std::string_view kKindNames[] = {
    "bit-flip", "stuck-at", "missing-gate", "cross-point-appearance", "cross-point-disappearance",
    "bridging",
};

constexpr std::string_view kRuleNames[] = {"compare-to-fault-free", "check-line-equals-zero",
                                           "identity-output"};

std::size_t level_of(const Fault &f) {
  return std::visit(overloaded{
                        [](const MissingGate &m) { return m.level; },
                        [](const CrossPointAppearance &c) { return c.level; },
                        [](const CrossPointDisappearance &c) { return c.level; },
                        [](const auto &) { return std::size_t{0}; },
                    },
                    f);
}

}  // namespace

FaultKind kind_of(const Fault &fault) { return static_cast<FaultKind>(fault.index()); }

std::string_view kind_name(FaultKind kind) { return kKindNames[static_cast<std::size_t>(kind)]; }

FaultKind parse_fault_kind(std::string_view name) {
  for (std::size_t i = 0; i < std::size(kKindNames); ++i) {
    if (kKindNames[i] == name) {
      return static_cast<FaultKind>(i);
    }
  }
  throw std::invalid_argument("unsupported fault kind '" + std::string(name) + "'");
}

std::string_view rule_name(ResponseRule rule) { return kRuleNames[static_cast<std::size_t>(rule)]; }

ResponseRule parse_rule(std::string_view name) {
  for (std::size_t i = 0; i < std::size(kRuleNames); ++i) {
    if (kRuleNames[i] == name) {
      return static_cast<ResponseRule>(i);
    }
  }
  throw std::invalid_argument("unknown response rule '" + std::string(name) + "'");
}

bool conflicts(const Fault &a, const Fault &b) {
  const FaultKind ka = kind_of(a);
  const FaultKind kb = kind_of(b);
  const bool a_gate = ka == FaultKind::missing_gate || ka == FaultKind::cross_point_appearance ||
                      ka == FaultKind::cross_point_disappearance;
  const bool b_gate = kb == FaultKind::missing_gate || kb == FaultKind::cross_point_appearance ||
                      kb == FaultKind::cross_point_disappearance;
  if (a_gate && b_gate) {
    if (level_of(a) != level_of(b)) {
      return false;
    }
    // Two cross-point faults on different lines of one gate can coexist.
    if (ka != FaultKind::missing_gate && kb != FaultKind::missing_gate) {
      const LineId la = ka == FaultKind::cross_point_appearance
                            ? std::get<CrossPointAppearance>(a).line
                            : std::get<CrossPointDisappearance>(a).line;
      const LineId lb = kb == FaultKind::cross_point_appearance
                            ? std::get<CrossPointAppearance>(b).line
                            : std::get<CrossPointDisappearance>(b).line;
      return la == lb;
    }
    return true;
  }
  if (ka != kb) {
    return false;
  }
  switch (ka) {
    case FaultKind::bit_flip: {
      const auto &x = std::get<BitFlip>(a);
      const auto &y = std::get<BitFlip>(b);
      return x.line == y.line && x.segment == y.segment;
    }
    case FaultKind::stuck_at: {
      const auto &x = std::get<StuckAt>(a);
      const auto &y = std::get<StuckAt>(b);
      return x.line == y.line && x.segment == y.segment;
    }
    case FaultKind::bridging: {
      const auto &x = std::get<Bridging>(a);
      const auto &y = std::get<Bridging>(b);
      const bool same_pair = (x.first == y.first && x.second == y.second) ||
                             (x.first == y.second && x.second == y.first);
      return same_pair && x.segment == y.segment;
    }
    default:
      return false;
  }
}

void check_fault_set(const Circuit &circuit, std::span<const Fault> faults) {
  const std::size_t n = circuit.num_lines();
  const std::size_t g = circuit.num_gates();
  auto need = [](bool ok, const std::string &what) {
    if (!ok) {
      throw StructuralError("invalid fault site: " + what);
    }
  };
  for (const auto &fault : faults) {
    std::visit(
        overloaded{
            [&](const BitFlip &f) {
              need(f.line.index < n && f.segment <= g, "bit-flip line/segment out of range");
            },
            [&](const StuckAt &f) {
              need(f.line.index < n && f.segment <= g, "stuck-at line/segment out of range");
            },
            [&](const MissingGate &f) {
              need(f.level >= 1 && f.level <= g, "missing-gate level out of range");
            },
            [&](const CrossPointAppearance &f) {
              need(f.level >= 1 && f.level <= g && f.line.index < n,
                   "cross-point level/line out of range");
              need(!circuit.gate(f.level - 1).uses_line(f.line),
                   "cross-point appearance on a line the gate already uses");
            },
            [&](const CrossPointDisappearance &f) {
              need(f.level >= 1 && f.level <= g, "cross-point level out of range");
              need(circuit.gate(f.level - 1).has_control(f.line),
                   "cross-point disappearance on a line that is not a control");
            },
            [&](const Bridging &f) {
              need(f.first.index < n && f.second.index < n && f.segment <= g,
                   "bridging line/segment out of range");
              need(f.first != f.second, "bridging needs two distinct lines");
            },
        },
        fault);
  }
  for (std::size_t i = 0; i < faults.size(); ++i) {
    for (std::size_t j = i + 1; j < faults.size(); ++j) {
      if (conflicts(faults[i], faults[j])) {
        throw StructuralError("conflicting faults at the same site in one fault set");
      }
    }
  }
}

void FaultUniverse::add(std::span<const Fault> set) {
  storage_.insert(storage_.end(), set.begin(), set.end());
  offsets_.push_back(storage_.size());
}

std::vector<Fault> enumerate_single_faults(const Circuit &circuit, FaultKind kind,
                                           const EnumerationOptions &options) {
  const std::size_t n = circuit.num_lines();
  const std::size_t g = circuit.num_gates();

  std::vector<LineId> lines;
  if (options.lines) {
    lines = *options.lines;
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      lines.push_back(LineId{i});
    }
  }
  std::vector<std::size_t> segments;
  if (options.segments) {
    segments = *options.segments;
  } else {
    for (std::size_t k = 0; k <= g; ++k) {
      segments.push_back(k);
    }
  }
  auto in_lines = [&](LineId l) { return std::find(lines.begin(), lines.end(), l) != lines.end(); };

  std::vector<Fault> out;
  switch (kind) {
    case FaultKind::bit_flip:
      for (auto line : lines) {
        for (auto seg : segments) {
          out.push_back(BitFlip{line, seg});
        }
      }
      break;
    case FaultKind::stuck_at:
      for (auto line : lines) {
        for (auto seg : segments) {
          out.push_back(StuckAt{line, seg, false});
          out.push_back(StuckAt{line, seg, true});
        }
      }
      break;
    case FaultKind::missing_gate:
      for (std::size_t level = 1; level <= g; ++level) {
        out.push_back(MissingGate{level});
      }
      break;
    case FaultKind::cross_point_appearance:
      for (std::size_t level = 1; level <= g; ++level) {
        for (auto line : lines) {
          if (!circuit.gate(level - 1).uses_line(line)) {
            out.push_back(CrossPointAppearance{level, line, Polarity::positive});
            out.push_back(CrossPointAppearance{level, line, Polarity::negative});
          }
        }
      }
      break;
    case FaultKind::cross_point_disappearance:
      for (std::size_t level = 1; level <= g; ++level) {
        for (const auto &c : circuit.gate(level - 1).controls) {
          out.push_back(CrossPointDisappearance{level, c.line});
        }
      }
      break;
    case FaultKind::bridging:
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          if (options.adjacent_bridging_only && j != i + 1) {
            continue;
          }
          if (!in_lines(LineId{i}) || !in_lines(LineId{j})) {
            continue;
          }
          for (auto seg : segments) {
            out.push_back(Bridging{LineId{i}, LineId{j}, seg, BridgeMode::wired_and});
            out.push_back(Bridging{LineId{i}, LineId{j}, seg, BridgeMode::wired_or});
          }
        }
      }
      break;
  }
  return out;
}

namespace {

void enumerate_combinations(const std::vector<Fault> &singles, std::size_t k,
                            FaultUniverse &universe) {
  std::vector<std::size_t> chosen;
  std::vector<Fault> set;
  // Depth-first over increasing index tuples; sets are emitted by size so the
  // universe lists all singles first, then pairs, and so on.
  for (std::size_t size = 1; size <= k; ++size) {
    auto recurse = [&](auto &&self, std::size_t start) -> void {
      if (set.size() == size) {
        universe.add(set);
        return;
      }
      for (std::size_t i = start; i < singles.size(); ++i) {
        if (singles.size() - i < size - set.size()) {
          break;
        }
        bool ok = true;
        for (const auto &f : set) {
          if (conflicts(f, singles[i])) {
            ok = false;
            break;
          }
        }
        if (!ok) {
          continue;
        }
        set.push_back(singles[i]);
        self(self, i + 1);
        set.pop_back();
      }
    };
    recurse(recurse, 0);
  }
}

void sample_combinations(const std::vector<Fault> &singles, std::size_t k,
                         const EnumerationOptions &options, FaultUniverse &universe) {
  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<std::size_t> size_dist(1, k);
  std::uniform_int_distribution<std::size_t> pick(0, singles.size() - 1);
  std::set<std::vector<std::size_t>> seen;
  const std::size_t max_attempts = options.sample_size * 20 + 100;
  for (std::size_t attempt = 0; attempt < max_attempts && seen.size() < options.sample_size;
       ++attempt) {
    const std::size_t size = std::min(size_dist(rng), singles.size());
    std::vector<std::size_t> idx;
    while (idx.size() < size) {
      const std::size_t i = pick(rng);
      if (std::find(idx.begin(), idx.end(), i) == idx.end()) {
        idx.push_back(i);
      }
    }
    std::sort(idx.begin(), idx.end());
    bool ok = true;
    for (std::size_t a = 0; a < idx.size() && ok; ++a) {
      for (std::size_t b = a + 1; b < idx.size() && ok; ++b) {
        ok = !conflicts(singles[idx[a]], singles[idx[b]]);
      }
    }
    if (!ok || !seen.insert(idx).second) {
      continue;
    }
    std::vector<Fault> set;
    for (auto i : idx) {
      set.push_back(singles[i]);
    }
    universe.add(set);
  }
}

}  // namespace

FaultUniverse enumerate_faults(const Circuit &circuit, FaultKind kind, std::size_t multiplicity,
                               const EnumerationOptions &options) {
  if (multiplicity == 0) {
    throw std::invalid_argument("fault multiplicity must be at least 1");
  }
  FaultUniverse universe(kind, multiplicity);
  const auto singles = enumerate_single_faults(circuit, kind, options);
  if (singles.empty()) {
    return universe;
  }
  if (multiplicity <= options.exhaustive_cap) {
    enumerate_combinations(singles, multiplicity, universe);
  } else {
    sample_combinations(singles, multiplicity, options, universe);
    universe.mark_sampled();
  }
  return universe;
}

namespace {

/// Simulates one fault set; assumes check_fault_set() already passed.
State simulate(const Circuit &circuit, const State &input, std::span<const Fault> faults) {
  State state = input;
  std::vector<std::pair<LineId, bool>> forced;
  const std::size_t g = circuit.num_gates();

  auto enforce = [&] {
    for (const auto &[line, value] : forced) {
      state.set(line, value);
    }
  };

  for (std::size_t seg = 0; seg <= g; ++seg) {
    enforce();
    for (const auto &fault : faults) {
      if (const auto *b = std::get_if<Bridging>(&fault); b && b->segment == seg) {
        const bool x = state.get(b->first);
        const bool y = state.get(b->second);
        const bool v = b->mode == BridgeMode::wired_and ? (x && y) : (x || y);
        state.set(b->first, v);
        state.set(b->second, v);
      }
    }
    for (const auto &fault : faults) {
      if (const auto *f = std::get_if<BitFlip>(&fault); f && f->segment == seg) {
        state.flip(f->line);
      }
    }
    for (const auto &fault : faults) {
      if (const auto *s = std::get_if<StuckAt>(&fault); s && s->segment == seg) {
        auto it = std::find_if(forced.begin(), forced.end(),
                               [&](const auto &p) { return p.first == s->line; });
        if (it != forced.end()) {
          it->second = s->value;
        } else {
          forced.emplace_back(s->line, s->value);
        }
      }
    }
    enforce();
    if (seg == g) {
      break;
    }

    const std::size_t level = seg + 1;
    const Gate &gate = circuit.gate(seg);
    bool missing = false;
    bool modified = false;
    for (const auto &fault : faults) {
      if (level_of(fault) == level) {
        if (std::holds_alternative<MissingGate>(fault)) {
          missing = true;
        } else {
          modified = true;
        }
      }
    }
    if (missing) {
      continue;
    }
    if (!modified) {
      apply_gate_in_place(gate, state);
      continue;
    }
    Gate faulty = gate;
    for (const auto &fault : faults) {
      if (const auto *a = std::get_if<CrossPointAppearance>(&fault); a && a->level == level) {
        faulty.controls.push_back({a->line, a->polarity});
      } else if (const auto *d = std::get_if<CrossPointDisappearance>(&fault);
                 d && d->level == level) {
        std::erase_if(faulty.controls, [&](const Control &c) { return c.line == d->line; });
      }
    }
    apply_gate_in_place(faulty, state);
  }
  return state;
}

void check_width(const Circuit &circuit, const State &state) {
  if (state.width() != circuit.num_lines()) {
    throw StructuralError("state width " + std::to_string(state.width()) +
                          " does not match circuit width " + std::to_string(circuit.num_lines()));
  }
}

template <class Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn &&fn) {
  if (threads == 0) {
    threads = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  }
  threads = std::min(threads, std::max<std::size_t>(1, count / 64));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      fn(i);
    }
    return;
  }
  std::vector<std::jthread> workers;
  const std::size_t chunk = (count + threads - 1) / threads;
  for (std::size_t t = 0; t < threads; ++t) {
    const std::size_t begin = t * chunk;
    const std::size_t end = std::min(count, begin + chunk);
    workers.emplace_back([&fn, begin, end] {
      for (std::size_t i = begin; i < end; ++i) {
        fn(i);
      }
    });
  }
}

void check_tests(const Circuit &circuit, const TestSet &tests) {
  for (const auto &v : tests.vectors) {
    check_width(circuit, v);
  }
  if (tests.rule == ResponseRule::check_line_zero) {
    if (!tests.check_line || tests.check_line->index >= circuit.num_lines()) {
      throw StructuralError("check-line rule needs a check line that exists in the circuit");
    }
  }
}

}  // namespace

State run_faulty(const Circuit &circuit, const State &input, std::span<const Fault> faults) {
  check_width(circuit, input);
  check_fault_set(circuit, faults);
  return simulate(circuit, input, faults);
}

std::vector<State> exhaustive_inputs(const Circuit &circuit) {
  const std::size_t free_bits = circuit.primary_inputs().size();
  if (free_bits > 20) {
    throw std::invalid_argument("too many primary inputs for exhaustive simulation (" +
                                std::to_string(free_bits) + " > 20)");
  }
  std::vector<State> out;
  out.reserve(std::size_t{1} << free_bits);
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << free_bits); ++a) {
    out.push_back(input_from_assignment(circuit, a));
  }
  return out;
}

std::vector<State> all_states(std::size_t width) {
  if (width > 20) {
    throw std::invalid_argument("too many lines for exhaustive enumeration (" +
                                std::to_string(width) + " > 20)");
  }
  std::vector<State> out;
  out.reserve(std::size_t{1} << width);
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << width); ++a) {
    out.push_back(State::from_integer(a, width));
  }
  return out;
}

bool violates(const TestSet &tests, const State &input, const State &output,
              const State &fault_free) {
  switch (tests.rule) {
    case ResponseRule::compare_to_fault_free:
      return output != fault_free;
    case ResponseRule::check_line_zero:
      return output.get(*tests.check_line);
    case ResponseRule::identity:
      return output != input;
  }
  return false;
}

std::vector<std::vector<bool>> detection_matrix(const Circuit &circuit, const TestSet &tests,
                                                const FaultUniverse &universe,
                                                const GradeOptions &options) {
  check_tests(circuit, tests);
  for (std::size_t f = 0; f < universe.size(); ++f) {
    check_fault_set(circuit, universe[f]);
  }
  std::vector<State> fault_free;
  fault_free.reserve(tests.vectors.size());
  for (const auto &v : tests.vectors) {
    fault_free.push_back(run(circuit, v));
  }
  std::vector<std::vector<bool>> rows(universe.size(),
                                      std::vector<bool>(tests.vectors.size(), false));
  parallel_for(universe.size(), options.threads, [&](std::size_t f) {
    auto &row = rows[f];
    for (std::size_t v = 0; v < tests.vectors.size(); ++v) {
      const State out = simulate(circuit, tests.vectors[v], universe[f]);
      row[v] = violates(tests, tests.vectors[v], out, fault_free[v]);
    }
  });
  return rows;
}

CoverageReport grade(const Circuit &circuit, const TestSet &tests, const FaultUniverse &universe,
                     const GradeOptions &options) {
  check_tests(circuit, tests);
  for (std::size_t f = 0; f < universe.size(); ++f) {
    check_fault_set(circuit, universe[f]);
  }
  std::vector<State> fault_free;
  for (const auto &v : tests.vectors) {
    fault_free.push_back(run(circuit, v));
  }
  std::vector<std::uint8_t> detected(universe.size(), 0);
  parallel_for(universe.size(), options.threads, [&](std::size_t f) {
    for (std::size_t v = 0; v < tests.vectors.size(); ++v) {
      const State out = simulate(circuit, tests.vectors[v], universe[f]);
      if (violates(tests, tests.vectors[v], out, fault_free[v])) {
        detected[f] = 1;
        return;
      }
    }
  });

  CoverageReport report;
  report.total = universe.size();
  for (std::size_t f = 0; f < universe.size(); ++f) {
    if (detected[f] != 0) {
      ++report.detected;
    } else {
      const auto set = universe[f];
      report.undetected.emplace_back(set.begin(), set.end());
    }
  }
  report.empty_universe = report.total == 0;
  report.coverage = report.total == 0 ? 1.0
                                      : static_cast<double>(report.detected) /
                                            static_cast<double>(report.total);
  return report;
}

TestSet greedy_minimal_testset(const Circuit &circuit, const FaultUniverse &universe,
                               const GreedyOptions &options) {
  TestSet pool{"candidates", options.candidates, options.rule, options.check_line};
  if (pool.vectors.empty()) {
    if (circuit.num_lines() > 16) {
      throw std::invalid_argument("circuit has " + std::to_string(circuit.num_lines()) +
                                  " lines; exhaustive candidates need n <= 16 or an explicit pool");
    }
    pool.vectors = all_states(circuit.num_lines());
  }
  const auto matrix = detection_matrix(circuit, pool, universe, options.grading);

  std::vector<bool> covered(universe.size(), false);
  std::vector<bool> used(pool.vectors.size(), false);
  TestSet result{"greedy", {}, options.rule, options.check_line};
  while (true) {
    std::size_t best = pool.vectors.size();
    std::size_t best_gain = 0;
    for (std::size_t v = 0; v < pool.vectors.size(); ++v) {
      if (used[v]) {
        continue;
      }
      std::size_t gain = 0;
      for (std::size_t f = 0; f < universe.size(); ++f) {
        if (!covered[f] && matrix[f][v]) {
          ++gain;
        }
      }
      if (gain > best_gain) {
        best_gain = gain;
        best = v;
      }
    }
    if (best_gain == 0) {
      break;
    }
    used[best] = true;
    result.vectors.push_back(pool.vectors[best]);
    for (std::size_t f = 0; f < universe.size(); ++f) {
      if (matrix[f][best]) {
        covered[f] = true;
      }
    }
  }
  return result;
}

}  // namespace revdft
