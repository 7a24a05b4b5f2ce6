#pragma once

// Linear algebra over the prime fields GF(q) and the hyperplane isolation
// procedure: given a nonempty Z subset of GF(q)^n, produce an affine
// subspace H of codimension at most log_q|Z| + q*log2(q) with |Z ^ H| = 1.
//
// While |Z| > q^(q-1) the set contains q linearly independent vectors
// w_1..w_q; solving W x = (0,1,...,q-1) gives a direction alpha whose q
// parallel hyperplanes all meet Z, so the smallest nonempty intersection
// has at most |Z|/q points.  Once |Z| <= q^(q-1), cutting on a coordinate
// where two vectors differ at least halves the set.

#include <optional>
#include <span>
#include <vector>

namespace nilsat {

struct AffineEq {
  std::vector<int> coef;  // over GF(q)
  int rhs;
};

struct AffineSystem {
  int q = 2;
  int n = 0;
  std::vector<AffineEq> eqs;
};

// Reduced row echelon data: pivot equations expressing the pivot variable
// in terms of the free ones, x_j = sum_{i in free} coef_i x_i + rhs.
struct RowReduced {
  bool consistent = true;
  std::vector<int> pivots;            // pivot column per reduced equation
  std::vector<int> free_vars;         // ascending
  std::vector<AffineEq> pivot_forms;  // aligned with pivots; coef over free vars only
  int codim() const { return static_cast<int>(pivots.size()); }
};

RowReduced row_reduce(const AffineSystem& sys);

// One solution of W x = a, or nullopt when inconsistent.
std::optional<std::vector<int>> gauss_solve(const std::vector<std::vector<int>>& w,
                                            const std::vector<int>& a, int q);

bool satisfies(const AffineSystem& sys, std::span<const int> x);

struct IsolateResult {
  AffineSystem h;        // accumulated cuts (independent by construction)
  std::vector<int> z;    // the single point of Z ^ H
};

// Z must be nonempty; every member a vector of n residues mod q.
IsolateResult isolate_point(std::span<const std::vector<int>> z_set, int q, int n);

}  // namespace nilsat
