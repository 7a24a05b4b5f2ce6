#pragma once

// 3-CNF satisfiability reduced to a single equation t(x) = e_1 1 over the
// algebra.  With m clauses and height h the clauses are split into at most
// s^{h-2} parts of s = ceil(m^{1/(h-1)}) clauses each; every part becomes a
// CNF gadget into level h-1 and the conjunction tower combines the parts
// down to level 1.  The resulting term takes only the values 0 and e_1 1.

#include <vector>

#include "nilsat/cnf.hpp"
#include "nilsat/funcrep.hpp"
#include "nilsat/term.hpp"

namespace nilsat {

struct ReductionOutput {
  Term term;                                 // t over the formula's variables
  DElem target;                              // e_1 1
  int s;                                     // part size bound
  std::vector<CnfFormula> parts;             // over local variable indices
  std::vector<std::vector<int>> part_vars;   // local index -> formula variable
};

// Smallest s >= 1 with s^(h-1) >= m.
int part_bound(int m, int h);

// Requires an alternating spec of height >= 2, three literals per clause at
// most and at least one clause.  Throws std::runtime_error naming the
// required part size when a gadget ceiling is exceeded.
ReductionOutput reduce(const CnfFormula& phi, const AlgebraSpec& spec,
                       const RepresentLimits& limits = {});

// True variables become e_h 1, false ones 0.
std::vector<DElem> lift_witness(const CnfFormula& phi, const std::vector<bool>& assignment,
                                const AlgebraSpec& spec);
// b-decoding of the level-h coordinates.
std::vector<bool> read_witness(std::span<const DElem> assignment);

}  // namespace nilsat
