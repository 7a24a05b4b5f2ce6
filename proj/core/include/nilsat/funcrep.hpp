#pragma once

// Compiles arbitrary functions (e_l D)^m -> e_k D (k < l) into terms of the
// algebra, and builds the conjunction and CNF gadgets on top of that.
//
// Two-level core (l = k+1), with q = p_{k+1} and p = p_k:
// for a point a in Z_q^m the indicator
//
//   chi_a(x) = inv(q^{m-1}) * ( sum_{affine hyperplanes H containing a} [x in H]
//                               - N2 * e_k1 ),
//   [x in H] = e_k1 - v_k(l_H(x)),   N2 = (q^{m-1}-1)/(q-1),
//
// equals e_k1 exactly at x = a and 0 elsewhere: a point x != a lies on N2 of
// the hyperplanes through a while a itself lies on N1 = (q^m-1)/(q-1), and
// N1 - N2 = q^{m-1} is invertible mod p because p != q.  The compiled term
// is sum_a g(a) * chi_a.
//
// Multi-level case (l > k+1): each variable is inflated into p_l one-hot
// indicators e_{k+1}1 - v_{k+1}...v_{l-1}(x - lambda*e_l 1) and the
// inflated function goes through the two-level core.

#include <cstdint>
#include <vector>

#include "nilsat/cnf.hpp"
#include "nilsat/term.hpp"

namespace nilsat {

struct LevelFunction {
  int src_level;            // l
  int dst_level;            // k < l
  int arity;                // m
  std::vector<int> table;   // size p_l^m, mixed radix with x_0 most significant;
                            // values in Z_{p_k}

  std::size_t domain_size(const AlgebraSpec& spec) const;
  // Table index of a tuple of residues at the source level.
  std::size_t index_of(const AlgebraSpec& spec, std::span<const int> point) const;
};

struct RepresentLimits {
  int max_arity = 6;                      // on the declared arity m
  std::uint64_t max_core_points = 1500;   // on the (inflated) core table
  std::uint64_t max_nodes = 16u << 20;    // rough output size guard
};

// Exact compilation; every value of the table is reproduced.  Throws
// std::invalid_argument for non-alternating level pairs (the construction
// needs q invertible mod p) and std::runtime_error when a ceiling is hit,
// naming the required resource.
Term represent(const LevelFunction& g, const AlgebraSpec& spec,
               const RepresentLimits& limits = {});

// AND^s_k : (e_{k+1}D)^s -> e_kD; 0 if any input is 0, else e_k1.
Term build_and(int s, int k, const AlgebraSpec& spec,
               const RepresentLimits& limits = {});

// The s^{h-2}-ary conjunction tower from level h-1 down to level 1;
// for h = 2 it is the identity embedding of the single part.
Term build_and_tower(int s, const AlgebraSpec& spec,
                     const RepresentLimits& limits = {});

// CNF gadget for one clause part: e_hD^{n} -> e_{h-1}D, value e_{h-1}1 when
// the part is satisfied under b(a) = (a != 0) and 0 otherwise.  Variables
// are the part's own indices 0..n-1 and are wrapped in e_h.
Term build_cnf_gadget(const CnfFormula& part, const AlgebraSpec& spec,
                      const RepresentLimits& limits = {});

// Variable remapping helpers used when plugging gadgets together.
Term subst_vars(const Term& t, std::span<const int> var_map);
Term subst_terms(const Term& t, std::span<const Term> replacements);

}  // namespace nilsat
