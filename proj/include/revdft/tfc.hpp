#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "revdft/circuit.hpp"

namespace revdft {

/// Diagnostic for malformed TFC text; carries the 1-based source line.
class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t line, std::string rule)
      : std::runtime_error("line " + std::to_string(line) + ": " + rule),
        line_(line),
        rule_(std::move(rule)) {}

  std::size_t line() const { return line_; }
  const std::string &rule() const { return rule_; }

private:
  std::size_t line_;
  std::string rule_;
};

// TFC grammar accepted here:
//   # comment            (kept as circuit metadata)
//   .v a,b,c             variable order
//   .i a,b               primary inputs (default: all of .v)
//   .o c                 primary outputs (default: all of .v)
//   .c 0                 constants for .v minus .i, in .v order (default: 0)
//   BEGIN
//   t3 a,b',c            MCT, last operand is the target, b' is a negative control
//   f3 a,b,c             MCF, last two operands are swapped
//   END
Circuit parse_tfc(std::string_view text);
std::string write_tfc(const Circuit &circuit);

Circuit read_tfc_file(const std::string &path);
void write_tfc_file(const Circuit &circuit, const std::string &path);

}  // namespace revdft
