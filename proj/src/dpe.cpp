#include "revdft/dpe.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <random>
#include <stdexcept>

namespace revdft {

namespace {

constexpr std::string_view kOpNames[] = {"ADD", "AND", "OR", "XOR"};

std::vector<LineId> ids(const std::vector<std::size_t> &lines) {
  std::vector<LineId> out;
  for (auto l : lines) {
    out.push_back(LineId{l});
  }
  return out;
}

std::vector<std::size_t> add_constants(CircuitBuilder &b, const std::string &prefix,
                                       std::size_t count, std::size_t first_index = 0) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(b.add_constant(prefix + std::to_string(first_index + i), false));
  }
  return out;
}

/// anc ^= a.b; b ^= a; anc ^= b.cin; cin ^= b  =>  cin = a^b^cin, anc = maj.
void append_full_adder(CircuitBuilder &b, std::size_t a, std::size_t bb, std::size_t cin,
                       std::size_t anc) {
  b.add(Gate::toffoli(a, bb, anc));
  b.add(Gate::cnot(a, bb));
  b.add(Gate::toffoli(bb, cin, anc));
  b.add(Gate::cnot(bb, cin));
}

/// Adds a + b + carry_in. Returns sum bits (on carry_in, k1..k(N-1)) followed
/// by the carry out (kN).
std::vector<std::size_t> append_rca(CircuitBuilder &b, const std::vector<std::size_t> &a,
                                    const std::vector<std::size_t> &bb, std::size_t carry_in,
                                    const std::vector<std::size_t> &carries) {
  std::vector<std::size_t> sum;
  std::size_t carry = carry_in;
  for (std::size_t i = 0; i < a.size(); ++i) {
    append_full_adder(b, a[i], bb[i], carry, carries[i]);
    sum.push_back(carry);
    carry = carries[i];
  }
  sum.push_back(carry);
  return sum;
}

void mark_outputs_only(CircuitBuilder &b, const std::vector<std::size_t> &outputs) {
  for (std::size_t l = 0; l < b.num_lines(); ++l) {
    b.set_output(l, std::find(outputs.begin(), outputs.end(), l) != outputs.end());
  }
}

}  // namespace

State Datapath::encode(const std::map<std::string, std::uint64_t> &operands) const {
  State state(circuit.num_lines());
  for (std::size_t i = 0; i < circuit.num_lines(); ++i) {
    state.set(LineId{i}, circuit.lines()[i].constant.value_or(false));
  }
  for (const auto &[port, value] : operands) {
    auto it = inputs.find(port);
    if (it == inputs.end()) {
      throw std::invalid_argument("unknown input port '" + port + "'");
    }
    for (std::size_t bit = 0; bit < it->second.size(); ++bit) {
      state.set(it->second[bit], ((value >> bit) & 1U) != 0);
    }
  }
  return state;
}

std::uint64_t Datapath::decode(const State &state, const std::string &port) const {
  auto it = outputs.find(port);
  if (it == outputs.end()) {
    it = inputs.find(port);
    if (it == inputs.end()) {
      throw std::invalid_argument("unknown port '" + port + "'");
    }
  }
  std::uint64_t value = 0;
  for (std::size_t bit = 0; bit < it->second.size(); ++bit) {
    if (state.get(it->second[bit])) {
      value |= std::uint64_t{1} << bit;
    }
  }
  return value;
}

std::string_view alu_op_name(AluOp op) { return kOpNames[static_cast<std::size_t>(op)]; }

AluOp parse_alu_op(std::string_view name) {
  for (std::size_t i = 0; i < std::size(kOpNames); ++i) {
    if (kOpNames[i] == name) {
      return static_cast<AluOp>(i);
    }
  }
  throw std::invalid_argument("unsupported ALU operation '" + std::string(name) + "'");
}

Element parse_element(std::string_view name) {
  if (name == "fa") return Element::fa;
  if (name == "rca") return Element::rca;
  if (name == "mul4") return Element::mul4;
  if (name == "alu") return Element::alu;
  throw std::invalid_argument("unknown datapath element '" + std::string(name) + "'");
}

Datapath build_full_adder() {
  CircuitBuilder b;
  const auto a = b.add_input("a", false);
  const auto bb = b.add_input("b", false);
  const auto cin = b.add_input("cin");
  const auto anc = b.add_constant("anc", false, true);
  append_full_adder(b, a, bb, cin, anc);
  b.add_metadata("full adder: sum on cin, carry on anc");
  return Datapath{b.build(),
                  {{"a", {LineId{a}}}, {"b", {LineId{bb}}}, {"cin", {LineId{cin}}}},
                  {{"sum", {LineId{cin}}}, {"carry", {LineId{anc}}}}};
}

Datapath build_rca(std::size_t width) {
  if (width < 1) {
    throw std::invalid_argument("RCA width must be at least 1");
  }
  CircuitBuilder b;
  std::vector<std::size_t> a;
  std::vector<std::size_t> bb;
  for (std::size_t i = 0; i < width; ++i) {
    a.push_back(b.add_input("a" + std::to_string(i), false));
  }
  for (std::size_t i = 0; i < width; ++i) {
    bb.push_back(b.add_input("b" + std::to_string(i), false));
  }
  const auto c0 = b.add_input("c0");
  const auto carries = add_constants(b, "k", width, 1);
  auto sum = append_rca(b, a, bb, c0, carries);
  const std::size_t carry_out = sum.back();
  sum.pop_back();
  mark_outputs_only(b, [&] {
    auto out = sum;
    out.push_back(carry_out);
    return out;
  }());
  b.add_metadata("ripple-carry adder, " + std::to_string(width) + " bit");
  return Datapath{b.build(),
                  {{"a", ids(a)}, {"b", ids(bb)}, {"cin", {LineId{c0}}}},
                  {{"sum", ids(sum)}, {"carry", {LineId{carry_out}}}}};
}

Datapath build_mul4() {
  constexpr std::size_t kBits = 4;
  CircuitBuilder b;
  std::vector<std::size_t> a;
  std::vector<std::size_t> bb;
  for (std::size_t i = 0; i < kBits; ++i) {
    a.push_back(b.add_input("a" + std::to_string(i)));
  }
  for (std::size_t i = 0; i < kBits; ++i) {
    bb.push_back(b.add_input("b" + std::to_string(i)));
  }
  // pp[j][i] = a_i & b_j, weight i + j
  std::vector<std::vector<std::size_t>> pp(kBits);
  for (std::size_t j = 0; j < kBits; ++j) {
    for (std::size_t i = 0; i < kBits; ++i) {
      pp[j].push_back(b.add_constant("p" + std::to_string(i) + std::to_string(j), false));
    }
  }
  for (std::size_t j = 0; j < kBits; ++j) {
    for (std::size_t i = 0; i < kBits; ++i) {
      b.add(Gate::toffoli(a[i], bb[j], pp[j][i]));
    }
  }

  std::vector<std::size_t> product{pp[0][0]};
  // Accumulator bits of weight j..j+3 before row j is added.
  std::vector<std::size_t> acc{pp[0][1], pp[0][2], pp[0][3], b.add_constant("z", false)};
  for (std::size_t j = 1; j < kBits; ++j) {
    const std::string stage = "r" + std::to_string(j) + "_";
    const auto carry_in = b.add_constant(stage + "c0", false);
    const auto carries = add_constants(b, stage + "k", kBits, 1);
    const auto sum = append_rca(b, acc, pp[j], carry_in, carries);
    product.push_back(sum.front());
    acc.assign(sum.begin() + 1, sum.end());
  }
  product.insert(product.end(), acc.begin(), acc.end());
  mark_outputs_only(b, product);
  b.add_metadata("4x4 array multiplier");
  return Datapath{b.build(), {{"a", ids(a)}, {"b", ids(bb)}}, {{"product", ids(product)}}};
}

Datapath build_alu(std::size_t width, const std::vector<AluOp> &ops) {
  if (width < 1) {
    throw std::invalid_argument("ALU width must be at least 1");
  }
  if (ops.empty() || ops.size() > 4) {
    throw std::invalid_argument("ALU needs 1 to 4 operations (2 select lines), got " +
                                std::to_string(ops.size()));
  }
  for (std::size_t i = 0; i < ops.size(); ++i) {
    if (std::find(ops.begin() + static_cast<std::ptrdiff_t>(i) + 1, ops.end(), ops[i]) !=
        ops.end()) {
      throw std::invalid_argument("duplicate ALU operation " + std::string(alu_op_name(ops[i])));
    }
  }

  CircuitBuilder b;
  const auto s1 = b.add_input("s1", false);
  const auto s0 = b.add_input("s0", false);
  std::vector<std::size_t> a;
  std::vector<std::size_t> bb;
  for (std::size_t i = 0; i < width; ++i) {
    a.push_back(b.add_input("a" + std::to_string(i), false));
  }
  for (std::size_t i = 0; i < width; ++i) {
    bb.push_back(b.add_input("b" + std::to_string(i), false));
  }

  struct Block {
    std::vector<std::size_t> rail_a, rail_b, result;
  };
  std::vector<Block> blocks;
  std::optional<std::size_t> carry_out;
  std::vector<Gate> compute;
  for (AluOp op : ops) {
    std::string prefix(alu_op_name(op));
    std::transform(prefix.begin(), prefix.end(), prefix.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    Block block;
    block.rail_a = add_constants(b, prefix + "_a", width);
    block.rail_b = add_constants(b, prefix + "_b", width);
    switch (op) {
      case AluOp::add: {
        const auto c0 = b.add_constant(prefix + "_c0", false);
        const auto carries = add_constants(b, prefix + "_k", width, 1);
        std::vector<std::size_t> sum{c0};
        sum.insert(sum.end(), carries.begin(), carries.end() - 1);
        block.result = sum;
        carry_out = carries.back();
        break;
      }
      case AluOp::bit_and:
      case AluOp::bit_or:
        block.result = add_constants(b, prefix + "_r", width);
        break;
      case AluOp::bit_xor:
        block.result = block.rail_b;
        break;
    }
    blocks.push_back(std::move(block));
  }
  std::vector<std::size_t> y;
  for (std::size_t i = 0; i < width; ++i) {
    y.push_back(b.add_constant("y" + std::to_string(i), false, true));
  }

  // Control unit: route A and B onto the selected block's rails.
  for (std::size_t k = 0; k < ops.size(); ++k) {
    const std::vector<Control> select{
        {LineId{s1}, (k & 2U) != 0 ? Polarity::positive : Polarity::negative},
        {LineId{s0}, (k & 1U) != 0 ? Polarity::positive : Polarity::negative},
    };
    for (std::size_t i = 0; i < width; ++i) {
      b.add(Gate::mcf(select, a[i], blocks[k].rail_a[i]));
      b.add(Gate::mcf(select, bb[i], blocks[k].rail_b[i]));
    }
  }

  for (std::size_t k = 0; k < ops.size(); ++k) {
    const Block &blk = blocks[k];
    switch (ops[k]) {
      case AluOp::add: {
        std::vector<std::size_t> carries(blk.result.begin() + 1, blk.result.end());
        carries.push_back(*carry_out);
        append_rca(b, blk.rail_a, blk.rail_b, blk.result.front(), carries);
        break;
      }
      case AluOp::bit_and:
        for (std::size_t i = 0; i < width; ++i) {
          b.add(Gate::toffoli(blk.rail_a[i], blk.rail_b[i], blk.result[i]));
        }
        break;
      case AluOp::bit_xor:
        for (std::size_t i = 0; i < width; ++i) {
          b.add(Gate::cnot(blk.rail_a[i], blk.rail_b[i]));
        }
        break;
      case AluOp::bit_or:
        for (std::size_t i = 0; i < width; ++i) {
          b.add(Gate::cnot(blk.rail_a[i], blk.result[i]));
          b.add(Gate::cnot(blk.rail_b[i], blk.result[i]));
          b.add(Gate::toffoli(blk.rail_a[i], blk.rail_b[i], blk.result[i]));
        }
        break;
    }
  }

  // Idle blocks hold all-zero rails and produce 0, so XOR-collecting every
  // block's result leaves exactly the selected one on y.
  for (const auto &blk : blocks) {
    for (std::size_t i = 0; i < width; ++i) {
      b.add(Gate::cnot(blk.result[i], y[i]));
    }
  }

  std::vector<std::size_t> outputs = y;
  std::map<std::string, std::vector<LineId>> out_ports{{"result", ids(y)}};
  if (carry_out) {
    outputs.push_back(*carry_out);
    out_ports["carry"] = {LineId{*carry_out}};
  }
  mark_outputs_only(b, outputs);
  std::string names;
  for (AluOp op : ops) {
    names += (names.empty() ? "" : ",") + std::string(alu_op_name(op));
  }
  b.add_metadata("ALU " + std::to_string(width) + " bit, ops " + names);
  return Datapath{b.build(),
                  {{"select", {LineId{s0}, LineId{s1}}}, {"a", ids(a)}, {"b", ids(bb)}},
                  std::move(out_ports)};
}

Datapath build(const DpeSpec &spec) {
  switch (spec.element) {
    case Element::fa:
      return build_full_adder();
    case Element::rca:
      return build_rca(spec.width);
    case Element::mul4:
      return build_mul4();
    case Element::alu:
      return build_alu(spec.width, spec.alu_ops);
  }
  throw std::invalid_argument("unknown datapath element");
}

OnlineTestableCircuit make_testable(const Datapath &datapath) {
  if (datapath.circuit.all_mcf()) {
    return modify_mcf_online(datapath.circuit);
  }
  return make_online_mctf(datapath.circuit);
}

OnlineTestableCircuit build_testable(const DpeSpec &spec) { return make_testable(build(spec)); }

}  // namespace revdft

namespace revdft {

namespace {

struct Expected {
  std::map<std::string, std::uint64_t> ports;
};

Expected expected_outputs(const DpeSpec &spec, const std::map<std::string, std::uint64_t> &in) {
  const std::uint64_t a = in.count("a") ? in.at("a") : 0;
  const std::uint64_t b = in.count("b") ? in.at("b") : 0;
  Expected e;
  switch (spec.element) {
    case Element::fa: {
      const std::uint64_t c = in.at("cin");
      const std::uint64_t total = a + b + c;
      e.ports = {{"sum", total & 1U}, {"carry", total >> 1U}};
      break;
    }
    case Element::rca: {
      const std::uint64_t total = a + b + in.at("cin");
      const std::uint64_t mask = (std::uint64_t{1} << spec.width) - 1;
      e.ports = {{"sum", total & mask}, {"carry", total >> spec.width}};
      break;
    }
    case Element::mul4:
      e.ports = {{"product", a * b}};
      break;
    case Element::alu: {
      const std::uint64_t mask = (std::uint64_t{1} << spec.width) - 1;
      const std::uint64_t select = in.at("select");
      std::uint64_t result = 0;
      std::uint64_t carry = 0;
      if (select < spec.alu_ops.size()) {
        switch (spec.alu_ops[select]) {
          case AluOp::add:
            result = (a + b) & mask;
            carry = (a + b) >> spec.width;
            break;
          case AluOp::bit_and:
            result = a & b;
            break;
          case AluOp::bit_or:
            result = a | b;
            break;
          case AluOp::bit_xor:
            result = a ^ b;
            break;
        }
      }
      e.ports = {{"result", result}};
      if (std::find(spec.alu_ops.begin(), spec.alu_ops.end(), AluOp::add) != spec.alu_ops.end()) {
        e.ports["carry"] = carry;
      }
      break;
    }
  }
  return e;
}

}  // namespace

SelfCheckResult self_check(const DpeSpec &spec, const Datapath &datapath, const Circuit &circuit,
                           std::optional<LineId> check_line, std::size_t random_cases,
                           std::uint64_t seed) {
  std::vector<std::pair<std::string, std::size_t>> ports;
  std::size_t total_bits = 0;
  for (const auto &[name, lines] : datapath.inputs) {
    ports.emplace_back(name, lines.size());
    total_bits += lines.size();
  }

  SelfCheckResult result;
  auto check_case = [&](std::uint64_t packed) {
    std::map<std::string, std::uint64_t> operands;
    std::size_t shift = 0;
    for (const auto &[name, bits] : ports) {
      operands[name] = (packed >> shift) & ((std::uint64_t{1} << bits) - 1);
      shift += bits;
    }
    const State out = run(circuit, extend_state(circuit, datapath.encode(operands)));
    const auto expected = expected_outputs(spec, operands);
    ++result.cases;
    std::string failure;
    for (const auto &[port, value] : expected.ports) {
      const auto got = datapath.decode(out, port);
      if (got != value) {
        failure = port + " = " + std::to_string(got) + ", expected " + std::to_string(value);
        break;
      }
    }
    if (failure.empty() && check_line && out.get(*check_line)) {
      failure = "check line raised on a fault-free run";
    }
    if (!failure.empty()) {
      if (result.failures == 0) {
        std::string desc;
        for (const auto &[name, value] : operands) {
          desc += name + "=" + std::to_string(value) + " ";
        }
        result.first_failure = desc + ": " + failure;
      }
      ++result.failures;
    }
  };

  if (total_bits <= 16) {
    for (std::uint64_t packed = 0; packed < (std::uint64_t{1} << total_bits); ++packed) {
      check_case(packed);
    }
  } else {
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < random_cases; ++i) {
      check_case(rng() & ((std::uint64_t{1} << total_bits) - 1));
    }
  }
  return result;
}

}  // namespace revdft
