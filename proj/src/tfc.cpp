#include "revdft/tfc.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <vector>

namespace revdft {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string> split_names(std::string_view list, std::size_t line_no) {
  std::vector<std::string> out;
  list = trim(list);
  if (list.empty()) {
    return out;
  }
  std::size_t start = 0;
  while (true) {
    const auto comma = list.find(',', start);
    const auto token =
        trim(list.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                : comma - start));
    if (token.empty()) {
      throw ParseError(line_no, "empty name in list");
    }
    if (std::any_of(token.begin(), token.end(),
                    [](char c) { return std::isspace(static_cast<unsigned char>(c)); })) {
      throw ParseError(line_no, "names must be comma separated: '" + std::string(token) + "'");
    }
    out.emplace_back(token);
    if (comma == std::string_view::npos) {
      break;
    }
    start = comma + 1;
  }
  return out;
}

bool is_pla_directive(std::string_view d) {
  return d == ".type" || d == ".p" || d == ".e" || d == ".ilb" || d == ".ob" || d == ".mv";
}

struct Header {
  std::optional<std::vector<std::string>> variables;
  std::optional<std::vector<std::string>> inputs;
  std::optional<std::vector<std::string>> outputs;
  std::optional<std::vector<std::string>> constants;
  std::size_t inputs_line = 0;
  std::size_t outputs_line = 0;
  std::size_t constants_line = 0;
};

std::vector<LineInfo> build_lines(const Header &h, std::size_t line_no) {
  if (!h.variables) {
    throw ParseError(line_no, "missing .v directive before BEGIN");
  }
  const auto &vars = *h.variables;
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (vars[i].find('\'') != std::string::npos || vars[i].find('#') != std::string::npos) {
      throw ParseError(line_no, "invalid variable name '" + vars[i] + "'");
    }
    if (!index.emplace(vars[i], i).second) {
      throw ParseError(line_no, "duplicate variable '" + vars[i] + "' in .v");
    }
  }
  std::vector<LineInfo> lines(vars.size());
  for (std::size_t i = 0; i < vars.size(); ++i) {
    lines[i].name = vars[i];
  }

  std::vector<bool> is_input(vars.size(), !h.inputs.has_value());
  if (h.inputs) {
    for (const auto &name : *h.inputs) {
      auto it = index.find(name);
      if (it == index.end()) {
        throw ParseError(h.inputs_line, ".i references undeclared variable '" + name + "'");
      }
      if (is_input[it->second]) {
        throw ParseError(h.inputs_line, "duplicate variable '" + name + "' in .i");
      }
      is_input[it->second] = true;
    }
  }
  if (h.outputs) {
    std::vector<bool> seen(vars.size(), false);
    for (auto &l : lines) {
      l.is_output = false;
    }
    for (const auto &name : *h.outputs) {
      auto it = index.find(name);
      if (it == index.end()) {
        throw ParseError(h.outputs_line, ".o references undeclared variable '" + name + "'");
      }
      if (seen[it->second]) {
        throw ParseError(h.outputs_line, "duplicate variable '" + name + "' in .o");
      }
      seen[it->second] = true;
      lines[it->second].is_output = true;
    }
  }

  const auto non_inputs = static_cast<std::size_t>(std::count(is_input.begin(), is_input.end(), false));
  if (h.constants && h.constants->size() != non_inputs) {
    throw ParseError(h.constants_line, ".c lists " + std::to_string(h.constants->size()) +
                                           " constant(s) but " + std::to_string(non_inputs) +
                                           " variable(s) are not inputs");
  }
  std::size_t next_constant = 0;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (is_input[i]) {
      continue;
    }
    bool value = false;
    if (h.constants) {
      const auto &bit = (*h.constants)[next_constant++];
      if (bit != "0" && bit != "1") {
        throw ParseError(h.constants_line, "constant value must be 0 or 1, got '" + bit + "'");
      }
      value = bit == "1";
    }
    lines[i].constant = value;
  }
  return lines;
}

Gate parse_gate(std::string_view text, const std::map<std::string, std::size_t> &index,
                std::size_t line_no) {
  std::size_t split = 0;
  while (split < text.size() && !std::isspace(static_cast<unsigned char>(text[split]))) {
    ++split;
  }
  const std::string_view head = text.substr(0, split);
  const char family = head.empty() ? '\0' : head.front();
  if ((family != 't' && family != 'f') || head.size() < 2 ||
      !std::all_of(head.begin() + 1, head.end(),
                   [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    throw ParseError(line_no, "unknown gate '" + std::string(head) + "'");
  }
  const std::size_t k = std::stoul(std::string(head.substr(1)));
  const std::size_t num_targets = family == 't' ? 1 : 2;
  if (k < num_targets) {
    throw ParseError(line_no, "gate '" + std::string(head) + "' needs at least " +
                                  std::to_string(num_targets) + " operand(s)");
  }
  const auto operands = split_names(text.substr(split), line_no);
  if (operands.size() != k) {
    throw ParseError(line_no, "operand count mismatch: " + std::string(head) + " expects " +
                                  std::to_string(k) + ", got " +
                                  std::to_string(operands.size()));
  }

  std::vector<Control> controls;
  std::vector<LineId> targets;
  std::set<std::size_t> used;
  for (std::size_t i = 0; i < operands.size(); ++i) {
    std::string name = operands[i];
    const bool is_target = i + num_targets >= operands.size();
    bool negative = false;
    if (!name.empty() && name.back() == '\'') {
      if (is_target) {
        throw ParseError(line_no, "negative polarity on target '" + name + "'");
      }
      negative = true;
      name.pop_back();
    }
    auto it = index.find(name);
    if (it == index.end()) {
      throw ParseError(line_no, "undeclared variable '" + name + "'");
    }
    if (!used.insert(it->second).second) {
      throw ParseError(line_no, "duplicate operand '" + name + "'");
    }
    if (is_target) {
      targets.push_back(LineId{it->second});
    } else {
      controls.push_back({LineId{it->second}, negative ? Polarity::negative : Polarity::positive});
    }
  }
  return Gate{family == 't' ? GateKind::mct : GateKind::mcf, std::move(controls),
              std::move(targets)};
}

}  // namespace

Circuit parse_tfc(std::string_view text) {
  Header header;
  std::vector<std::string> metadata;
  std::vector<LineInfo> lines;
  std::map<std::string, std::size_t> index;
  std::vector<Gate> gates;
  enum class Phase { header, body, done } phase = Phase::header;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) {
      eol = text.size();
    }
    std::string_view raw = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') {
      raw.remove_suffix(1);
    }

    std::string_view line = trim(raw);
    if (!line.empty() && line.front() == '#') {
      metadata.emplace_back(trim(line.substr(1)));
      continue;
    }
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      line = trim(line.substr(0, hash));
    }
    if (line.empty()) {
      continue;
    }
    if (phase == Phase::done) {
      throw ParseError(line_no, "content after END");
    }

    if (line.front() == '.') {
      if (phase != Phase::header) {
        throw ParseError(line_no, "directive inside BEGIN/END block");
      }
      std::size_t split = 0;
      while (split < line.size() && !std::isspace(static_cast<unsigned char>(line[split]))) {
        ++split;
      }
      const std::string_view directive = line.substr(0, split);
      const std::string_view rest = line.substr(split);
      std::optional<std::vector<std::string>> *slot = nullptr;
      if (directive == ".v") {
        slot = &header.variables;
      } else if (directive == ".i" || directive == ".o") {
        // PLA headers carry a count here (".i 4"), TFC a name list.
        const auto value = trim(rest);
        if (!value.empty() && std::all_of(value.begin(), value.end(), [](char c) {
              return std::isdigit(static_cast<unsigned char>(c));
            })) {
          throw ParseError(line_no, "unsupported: PLA input; use TFC");
        }
        if (directive == ".i") {
          slot = &header.inputs;
          header.inputs_line = line_no;
        } else {
          slot = &header.outputs;
          header.outputs_line = line_no;
        }
      } else if (directive == ".c") {
        slot = &header.constants;
        header.constants_line = line_no;
      } else if (is_pla_directive(directive)) {
        throw ParseError(line_no, "unsupported: PLA input; use TFC");
      } else {
        throw ParseError(line_no, "unknown directive '" + std::string(directive) + "'");
      }
      if (slot->has_value()) {
        throw ParseError(line_no, "duplicate directive '" + std::string(directive) + "'");
      }
      *slot = split_names(rest, line_no);
      continue;
    }

    if (line == "BEGIN") {
      if (phase != Phase::header) {
        throw ParseError(line_no, "duplicate BEGIN");
      }
      lines = build_lines(header, line_no);
      for (std::size_t i = 0; i < lines.size(); ++i) {
        index.emplace(lines[i].name, i);
      }
      phase = Phase::body;
      continue;
    }
    if (line == "END") {
      if (phase != Phase::body) {
        throw ParseError(line_no, "END without BEGIN");
      }
      phase = Phase::done;
      continue;
    }
    if (phase != Phase::body) {
      throw ParseError(line_no, "gate outside BEGIN/END block");
    }
    gates.push_back(parse_gate(line, index, line_no));
  }

  if (phase == Phase::header) {
    throw ParseError(line_no, "missing BEGIN");
  }
  if (phase == Phase::body) {
    throw ParseError(line_no, "missing END");
  }
  Circuit circuit(std::move(lines), std::move(gates), std::move(metadata));
  if (auto violations = validate(circuit); !violations.empty()) {
    throw ParseError(line_no, describe(violations.front()));
  }
  return circuit;
}

namespace {

std::string join_names(const Circuit &circuit, const std::vector<LineId> &ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i != 0) {
      out += ',';
    }
    out += circuit.line(ids[i]).name;
  }
  return out;
}

void append_list(std::ostringstream &out, const char *directive, const std::string &list) {
  out << directive;
  if (!list.empty()) {
    out << ' ' << list;
  }
  out << '\n';
}

}  // namespace

std::string write_tfc(const Circuit &circuit) {
  std::ostringstream out;
  for (const auto &comment : circuit.metadata()) {
    out << "# " << comment << '\n';
  }
  std::vector<LineId> all(circuit.num_lines());
  for (std::size_t i = 0; i < all.size(); ++i) {
    all[i] = LineId{i};
  }
  append_list(out, ".v", join_names(circuit, all));
  append_list(out, ".i", join_names(circuit, circuit.primary_inputs()));
  append_list(out, ".o", join_names(circuit, circuit.primary_outputs()));
  const auto constants = circuit.constant_lines();
  if (!constants.empty()) {
    std::string bits;
    for (std::size_t i = 0; i < constants.size(); ++i) {
      if (i != 0) {
        bits += ',';
      }
      bits += *circuit.line(constants[i]).constant ? '1' : '0';
    }
    append_list(out, ".c", bits);
  }
  out << "BEGIN\n";
  for (const auto &gate : circuit.gates()) {
    const std::size_t k = gate.controls.size() + gate.targets.size();
    out << (gate.is_mct() ? 't' : 'f') << k << ' ';
    bool first = true;
    for (const auto &c : gate.controls) {
      out << (first ? "" : ",") << circuit.line(c.line).name
          << (c.polarity == Polarity::negative ? "'" : "");
      first = false;
    }
    for (const auto &t : gate.targets) {
      out << (first ? "" : ",") << circuit.line(t).name;
      first = false;
    }
    out << '\n';
  }
  out << "END\n";
  return out.str();
}

Circuit read_tfc_file(const std::string &path) {
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".pla") {
    throw ParseError(0, "unsupported: PLA input; use TFC");
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_tfc(buffer.str());
}

void write_tfc_file(const Circuit &circuit, const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write '" + path + "'");
  }
  out << write_tfc(circuit);
}

}  // namespace revdft
