#include "nilsat/cnf.hpp"

#include <sstream>
#include <stdexcept>

namespace nilsat {

bool eval_clause(const Clause& c, const std::vector<bool>& assignment) {
  for (const Literal& lit : c.literals) {
    bool val = assignment[static_cast<std::size_t>(lit.var)];
    if (val == lit.positive) return true;
  }
  return false;
}

bool eval_cnf(const CnfFormula& f, const std::vector<bool>& assignment) {
  for (const Clause& c : f.clauses)
    if (!eval_clause(c, assignment)) return false;
  return true;
}

CnfFormula parse_dimacs(std::string_view text, bool split_long) {
  std::istringstream in{std::string(text)};
  std::string line;
  CnfFormula f;
  bool saw_header = false;
  int declared_clauses = -1;
  Clause current;
  bool too_long = false;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == 'c') continue;
    if (line[0] == 'p') {
      std::istringstream hs(line);
      std::string p, fmt;
      if (!(hs >> p >> fmt >> f.num_vars >> declared_clauses) || fmt != "cnf")
        throw std::invalid_argument("line " + std::to_string(line_no) +
                                    ": malformed DIMACS header");
      if (f.num_vars < 0 || declared_clauses < 0)
        throw std::invalid_argument("line " + std::to_string(line_no) +
                                    ": negative counts in DIMACS header");
      saw_header = true;
      continue;
    }
    if (!saw_header)
      throw std::invalid_argument("line " + std::to_string(line_no) +
                                  ": clause before DIMACS header");
    std::istringstream cs(line);
    int lit;
    while (cs >> lit) {
      if (lit == 0) {
        if (current.literals.size() > 3) too_long = true;
        f.clauses.push_back(std::move(current));
        current = {};
        continue;
      }
      int var = (lit > 0 ? lit : -lit) - 1;
      if (var >= f.num_vars)
        throw std::invalid_argument("line " + std::to_string(line_no) +
                                    ": literal exceeds declared variable count");
      current.literals.push_back({var, lit > 0});
    }
    if (cs.fail() && !cs.eof())
      throw std::invalid_argument("line " + std::to_string(line_no) +
                                  ": malformed clause");
  }
  if (!current.literals.empty())
    throw std::invalid_argument("unterminated clause at end of input");
  if (!saw_header) throw std::invalid_argument("missing DIMACS header");
  if (declared_clauses >= 0 && declared_clauses != f.clause_count())
    throw std::invalid_argument("DIMACS header declares " + std::to_string(declared_clauses) +
                                " clauses but " + std::to_string(f.clause_count()) +
                                " were given");
  if (too_long) {
    if (!split_long)
      throw std::invalid_argument(
          "input has clauses with more than three literals; rerun with 3-CNF "
          "splitting enabled");
    return split_to_3cnf(f);
  }
  return f;
}

std::string to_dimacs(const CnfFormula& f) {
  std::string out = "p cnf " + std::to_string(f.num_vars) + " " +
                    std::to_string(f.clause_count()) + "\n";
  for (const Clause& c : f.clauses) {
    for (const Literal& lit : c.literals)
      out += std::to_string(lit.positive ? lit.var + 1 : -(lit.var + 1)) + " ";
    out += "0\n";
  }
  return out;
}

CnfFormula split_to_3cnf(const CnfFormula& f) {
  CnfFormula out;
  out.num_vars = f.num_vars;
  for (const Clause& c : f.clauses) {
    if (c.literals.size() <= 3) {
      out.clauses.push_back(c);
      continue;
    }
    // (l1 l2 l3 ... lk) -> (l1 l2 y1) (-y1 l3 y2) ... (-y_{k-3} l_{k-1} lk)
    std::vector<Literal> lits = c.literals;
    Clause head;
    head.literals = {lits[0], lits[1], {out.num_vars, true}};
    out.clauses.push_back(head);
    int prev = out.num_vars++;
    for (std::size_t i = 2; i + 2 < lits.size(); ++i) {
      Clause mid;
      mid.literals = {{prev, false}, lits[i], {out.num_vars, true}};
      out.clauses.push_back(mid);
      prev = out.num_vars++;
    }
    Clause tail;
    tail.literals = {{prev, false}, lits[lits.size() - 2], lits[lits.size() - 1]};
    out.clauses.push_back(tail);
  }
  return out;
}

}  // namespace nilsat
