#pragma once

// Text format for terms:
//
//   term := `(var` INT `)` | `(const` LITERAL `)` | `(+` term term+ `)`
//         | `(-` term `)` | `(e` INT term `)` | `(v` INT term `)`
//
// LITERAL is the colon-separated element literal.  N-ary `+` desugars into a
// left fold of binary additions.  No folding or simplification happens here:
// every textual node becomes exactly one circuit node.

#include <stdexcept>
#include <string>
#include <string_view>

#include "nilsat/term.hpp"

namespace nilsat {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& what)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) +
                           ": " + what),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_, column_;
};

Circuit parse_circuit(std::string_view text, const AlgebraSpec& spec, int arity = -1);

}  // namespace nilsat
