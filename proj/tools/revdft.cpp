// revdft: command-line front end for the reversible-circuit DFT toolkit.
//
// Exit codes: 0 success, 1 assertion or threshold failure, 2 input error.
// Reports go to stdout as JSON, diagnostics to stderr.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "revdft/circuit.hpp"
#include "revdft/dpe.hpp"
#include "revdft/faultsim.hpp"
#include "revdft/metrics.hpp"
#include "revdft/offline.hpp"
#include "revdft/online.hpp"
#include "revdft/report.hpp"
#include "revdft/tfc.hpp"

namespace {

using nlohmann::json;
using namespace revdft;

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kInputError = 2;

/// Thrown for user-facing input problems that are not parse errors.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void print_json(const json &j) { std::cout << j.dump(2) << '\n'; }

std::string read_text(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InputError("cannot open '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw InputError("cannot write '" + path + "'");
  }
  out << text;
}

Circuit load(const std::string &path) {
  try {
    return read_tfc_file(path);
  } catch (const ParseError &e) {
    throw InputError(path + ":" + std::to_string(e.line()) + ": " + e.rule());
  }
}

std::string side_file_path(const std::string &tfc_path) {
  const auto dot = tfc_path.rfind('.');
  const auto slash = tfc_path.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
    return tfc_path + ".cost.json";
  }
  return tfc_path.substr(0, dot) + ".cost.json";
}

// ---------------------------------------------------------------------------

struct StatsArgs {
  std::string input;
};

int cmd_stats(const StatsArgs &args) {
  print_json(to_json(cost_report(load(args.input))));
  return kOk;
}

struct TransformArgs {
  std::string method;
  std::string input;
  std::string output;
};

int cmd_transform(const TransformArgs &args) {
  const Circuit in = load(args.input);
  Circuit out;
  if (args.method == "online-mct") {
    out = modify_mct_online(in).circuit;
  } else if (args.method == "online-mcf") {
    out = modify_mcf_online(in).circuit;
  } else if (args.method == "online-mctf") {
    out = in.all_mct() ? convert_mct_to_mctf_online(in).circuit : make_online_mctf(in).circuit;
  } else if (args.method == "offline-mct") {
    out = modify_mct_offline(in).circuit;
  } else if (args.method == "offline-mctf") {
    out = modify_mctf_offline(in).circuit;
  } else {
    throw InputError("unknown method '" + args.method + "'");
  }
  write_tfc_file(out, args.output);
  json report{{"manifest",
               {{"command", "transform"},
                {"method", args.method},
                {"input", args.input},
                {"output", args.output}}},
              {"delta", to_json(cost_delta(in, out))}};
  print_json(report);
  return kOk;
}

struct GradeArgs {
  std::string input;
  std::string faults = "stuck-at:single";
  std::string tests = "exhaustive";
  std::uint64_t seed = 0;
  std::optional<double> require;
  std::optional<std::string> rule;
  std::optional<std::string> check_line;
  std::optional<std::string> test_line;
  bool all_bridging = false;
  bool all_sites = false;
  std::size_t samples = 10000;
  std::size_t threads = 0;
};

int cmd_grade(const GradeArgs &args) {
  const Circuit circuit = load(args.input);
  const auto online = online_from_metadata(circuit);
  const auto offline = offline_from_metadata(circuit);

  // --faults kind[:single|:k]
  std::string kind_text = args.faults;
  std::size_t multiplicity = 1;
  if (auto colon = kind_text.find(':'); colon != std::string::npos) {
    const std::string mult = kind_text.substr(colon + 1);
    kind_text = kind_text.substr(0, colon);
    if (mult != "single") {
      try {
        multiplicity = std::stoul(mult);
      } catch (const std::exception &) {
        throw InputError("bad fault multiplicity '" + mult + "'");
      }
    }
  }
  FaultKind kind;
  try {
    kind = parse_fault_kind(kind_text);
  } catch (const std::invalid_argument &e) {
    throw InputError(e.what());
  }

  std::optional<LineId> check;
  if (args.check_line) {
    check = circuit.line_id(*args.check_line);
  } else if (online) {
    check = online->check_line;
  }

  EnumerationOptions options;
  options.seed = args.seed;
  options.sample_size = args.samples;
  options.adjacent_bridging_only = !args.all_bridging;
  if (!args.all_sites) {
    if (online && kind == FaultKind::bit_flip) {
      std::vector<LineId> lines;
      for (std::size_t i = 0; i < circuit.num_lines(); ++i) {
        if (LineId{i} != online->check_line) {
          lines.push_back(LineId{i});
        }
      }
      options.lines = lines;
      options.segments = online->observation_segments;
    } else if (offline) {
      std::vector<LineId> lines;
      for (std::size_t i = 0; i < circuit.num_lines(); ++i) {
        if (LineId{i} != offline->test_line) {
          lines.push_back(LineId{i});
        }
      }
      options.lines = lines;
    }
  }
  const FaultUniverse universe = enumerate_faults(circuit, kind, multiplicity, options);

  TestSet tests;
  if (args.tests == "gts") {
    if (offline) {
      tests = gts_stuck_at(*offline);
    } else if (args.test_line) {
      OfflineTestableCircuit view{circuit, circuit.line_id(*args.test_line), true,
                                  circuit.num_lines() - 1, "explicit"};
      tests = gts_stuck_at(view);
    } else if (circuit.all_mcf() && circuit.num_gates() > 0) {
      tests = mcf_fixed_points(circuit.num_lines());
    } else if (args.rule && parse_rule(*args.rule) == ResponseRule::identity) {
      throw InputError("missing test line for the identity rule: use an offline-modified "
                       "circuit or pass --test-line");
    } else {
      // No test mode to rely on: apply the same two vectors in normal mode.
      tests = gts_stuck_at(circuit.num_lines());
      tests.rule = ResponseRule::compare_to_fault_free;
    }
  } else if (args.tests == "exhaustive" || args.tests == "exhaustive-greedy") {
    const ResponseRule rule = args.rule  ? parse_rule(*args.rule)
                              : check    ? ResponseRule::check_line_zero
                                         : ResponseRule::compare_to_fault_free;
    if (args.tests == "exhaustive") {
      tests = TestSet{"exhaustive", exhaustive_inputs(circuit), rule, check};
    } else {
      GreedyOptions greedy;
      greedy.rule = rule;
      greedy.check_line = check;
      greedy.grading.threads = args.threads;
      if (rule == ResponseRule::check_line_zero) {
        if (circuit.primary_inputs().size() > 16) {
          throw InputError("exhaustive-greedy needs at most 16 primary inputs");
        }
        greedy.candidates = exhaustive_inputs(circuit);
      } else if (circuit.num_lines() > 16) {
        throw InputError("exhaustive-greedy needs at most 16 lines, circuit has " +
                         std::to_string(circuit.num_lines()));
      }
      tests = greedy_minimal_testset(circuit, universe, greedy);
    }
  } else {
    try {
      tests = parse_vector_file(read_text(args.tests));
    } catch (const ParseError &e) {
      throw InputError(args.tests + ":" + std::to_string(e.line()) + ": " + e.rule());
    }
    tests.check_line = check;
  }
  if (args.rule && args.tests != "exhaustive" && args.tests != "exhaustive-greedy") {
    tests.rule = parse_rule(*args.rule);
  }
  if (tests.rule == ResponseRule::check_line_zero && !tests.check_line) {
    throw InputError("check-line rule needs --check-line or an online-modified circuit");
  }

  const CoverageReport report = grade(circuit, tests, universe, GradeOptions{args.threads});
  json out = to_json(report, circuit);
  json vectors = json::array();
  for (const auto &v : tests.vectors) {
    vectors.push_back(v.to_string());
  }
  out["tests"] = {{"name", tests.name}, {"rule", rule_name(tests.rule)}, {"vectors", vectors}};
  out["manifest"] = {{"command", "grade"},
                     {"input", args.input},
                     {"method", online    ? online->method
                                : offline ? offline->method
                                          : std::string("none")},
                     {"faults", args.faults},
                     {"tests", args.tests},
                     {"seed", args.seed},
                     {"sampled", universe.sampled()}};
  print_json(out);
  if (args.require && report.coverage < *args.require) {
    std::cerr << "coverage " << report.coverage << " below required " << *args.require << '\n';
    return kFailed;
  }
  return kOk;
}

struct DpeArgs {
  std::string element;
  std::size_t bits = 4;
  std::string ops = "ADD,AND,XOR,OR";
  bool testable = false;
  bool verify = false;
  std::uint64_t seed = 0;
  std::string output;
};

int cmd_dpe(const DpeArgs &args) {
  DpeSpec spec;
  spec.element = parse_element(args.element);
  spec.width = args.bits;
  spec.testable = args.testable;
  spec.alu_ops.clear();
  std::stringstream list(args.ops);
  for (std::string op; std::getline(list, op, ',');) {
    spec.alu_ops.push_back(parse_alu_op(op));
  }

  const Datapath datapath = build(spec);
  Circuit circuit = datapath.circuit;
  std::optional<LineId> check;
  if (spec.testable) {
    const auto online = make_testable(datapath);
    circuit = online.circuit;
    check = online.check_line;
  }
  write_tfc_file(circuit, args.output);
  const json cost = to_json(cost_report(circuit));
  write_text(side_file_path(args.output), cost.dump(2) + "\n");
  print_json(cost);

  if (args.verify) {
    const auto result = self_check(spec, datapath, circuit, check, 10000, args.seed);
    std::cerr << "self-check: " << result.cases << " cases, " << result.failures
              << " failure(s)\n";
    if (!result.passed()) {
      std::cerr << "first failure: " << result.first_failure << '\n';
      return kFailed;
    }
  }
  return kOk;
}

struct GtsArgs {
  std::size_t width = 0;
  std::string family = "stuck2";
  std::string output;
};

int cmd_gts(const GtsArgs &args) {
  TestSet tests;
  if (args.family == "stuck2") {
    tests = gts_stuck_at(args.width);
  } else if (args.family == "weightn") {
    tests = weight_n_family(args.width);
  } else if (args.family == "pairs") {
    tests = adjacent_pairs_family(args.width);
  } else {
    throw InputError("unknown family '" + args.family + "'");
  }
  const std::string text = write_vector_file(tests);
  if (args.output.empty()) {
    std::cout << text;
  } else {
    write_text(args.output, text);
  }
  return kOk;
}

struct SimulateArgs {
  std::string input;
  std::vector<std::string> vectors;
  bool enforce = false;
};

int cmd_simulate(const SimulateArgs &args) {
  const Circuit circuit = load(args.input);
  json rows = json::array();
  for (const auto &bits : args.vectors) {
    const State in = State::from_string(bits);
    const State out =
        run(circuit, in, args.enforce ? ConstantMode::enforce : ConstantMode::ignore);
    rows.push_back({{"input", in.to_string()}, {"output", out.to_string()}});
  }
  print_json(rows);
  return kOk;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Design-for-testability toolkit for reversible MCT/MCF circuits"};
  app.require_subcommand(1);

  StatsArgs stats;
  auto *stats_cmd = app.add_subcommand("stats", "Print the cost report of a TFC circuit");
  stats_cmd->add_option("input", stats.input, "TFC file")->required();

  TransformArgs transform;
  auto *transform_cmd = app.add_subcommand("transform", "Apply a testability transform");
  transform_cmd->add_option("method", transform.method)
      ->required()
      ->check(CLI::IsMember({"online-mct", "online-mcf", "online-mctf", "offline-mct",
                             "offline-mctf"}));
  transform_cmd->add_option("input", transform.input, "TFC file")->required();
  transform_cmd->add_option("output", transform.output, "TFC file to write")->required();

  GradeArgs grade_args;
  std::string require_text;
  auto *grade_cmd = app.add_subcommand("grade", "Fault-simulate a test set and report coverage");
  grade_cmd->add_option("input", grade_args.input, "TFC file")->required();
  grade_cmd->add_option("--faults", grade_args.faults, "kind[:single|:k]");
  grade_cmd->add_option("--tests", grade_args.tests,
                        "gts | exhaustive | exhaustive-greedy | <vector file>");
  grade_cmd->add_option("--seed", grade_args.seed);
  grade_cmd->add_option("--require", grade_args.require, "minimum coverage for exit code 0");
  grade_cmd->add_option("--rule", grade_args.rule,
                        "compare-to-fault-free | check-line-equals-zero | identity-output");
  grade_cmd->add_option("--check-line", grade_args.check_line);
  grade_cmd->add_option("--test-line", grade_args.test_line);
  grade_cmd->add_flag("--all-bridging", grade_args.all_bridging,
                      "bridge every line pair, not only adjacent ones");
  grade_cmd->add_flag("--all-sites", grade_args.all_sites,
                      "do not restrict sites to the wrapped region / original lines");
  grade_cmd->add_option("--samples", grade_args.samples, "sample size for multiplicity > 3");
  grade_cmd->add_option("--threads", grade_args.threads);

  DpeArgs dpe;
  auto *dpe_cmd = app.add_subcommand("dpe", "Generate a datapath element");
  dpe_cmd->add_option("element", dpe.element)
      ->required()
      ->check(CLI::IsMember({"fa", "rca", "mul4", "alu"}));
  dpe_cmd->add_option("output", dpe.output, "TFC file to write")->required();
  dpe_cmd->add_option("--bits", dpe.bits, "operand width for rca/alu");
  dpe_cmd->add_option("--ops", dpe.ops, "ALU operations, select order");
  dpe_cmd->add_flag("--testable", dpe.testable);
  dpe_cmd->add_flag("--verify", dpe.verify, "check outputs against integer arithmetic");
  dpe_cmd->add_option("--seed", dpe.seed);

  GtsArgs gts;
  auto *gts_cmd = app.add_subcommand("gts", "Emit a general test-set vector file");
  gts_cmd->add_option("--width", gts.width)->required();
  gts_cmd->add_option("--family", gts.family)->check(CLI::IsMember({"stuck2", "weightn", "pairs"}));
  gts_cmd->add_option("-o,--output", gts.output);

  SimulateArgs simulate;
  auto *simulate_cmd = app.add_subcommand("simulate", "Run input vectors through a circuit");
  simulate_cmd->add_option("input", simulate.input, "TFC file")->required();
  simulate_cmd->add_option("--input-vector,-x", simulate.vectors, "bit string, line 0 first")
      ->required();
  simulate_cmd->add_flag("--enforce-constants", simulate.enforce);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*stats_cmd) return cmd_stats(stats);
    if (*transform_cmd) return cmd_transform(transform);
    if (*grade_cmd) return cmd_grade(grade_args);
    if (*dpe_cmd) return cmd_dpe(dpe);
    if (*gts_cmd) return cmd_gts(gts);
    if (*simulate_cmd) return cmd_simulate(simulate);
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}
