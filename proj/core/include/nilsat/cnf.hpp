#pragma once

// CNF formulas with at most three literals per clause, plus DIMACS parsing.

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nilsat {

struct Literal {
  int var;        // 0-based
  bool positive;
};

struct Clause {
  std::vector<Literal> literals;
};

struct CnfFormula {
  int num_vars = 0;
  std::vector<Clause> clauses;

  int clause_count() const { return static_cast<int>(clauses.size()); }
};

bool eval_clause(const Clause& c, const std::vector<bool>& assignment);
bool eval_cnf(const CnfFormula& f, const std::vector<bool>& assignment);

// Standard DIMACS: `c` comments, `p cnf <vars> <clauses>` header,
// zero-terminated clauses.  Clauses longer than three literals are rejected
// unless `split_long` is set, in which case they are split into 3-CNF with
// fresh variables first.
CnfFormula parse_dimacs(std::string_view text, bool split_long = false);

std::string to_dimacs(const CnfFormula& f);

// 3-CNF splitting with fresh variables (equisatisfiable).
CnfFormula split_to_3cnf(const CnfFormula& f);

}  // namespace nilsat
