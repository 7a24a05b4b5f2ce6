#pragma once

// The symmetric group on four points, its normal-subgroup ladder
// 1 < V < A4 < S4, and the 3-CNF reduction into equation solving over S4.
//
// Elements are indices into a fixed table of the 24 permutations (lex order
// of image tuples, so index 0 is the identity).  The product x*y is the
// composition "apply y, then x".

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nilsat/cnf.hpp"

namespace nilsat {

class S4 {
 public:
  static constexpr int kOrder = 24;

  static int identity() { return 0; }
  static int compose(int a, int b);        // a * b: p -> a(b(p))
  static int inverse(int a);
  static int commutator(int a, int b);     // a^{-1} b^{-1} a b
  static bool is_even(int a);
  static bool in_v(int a);
  static bool in_a4(int a) { return is_even(a); }

  // Coset id of a modulo V (six cosets, ids stable across runs).
  static int v_coset(int a);

  static std::array<int, 4> images(int a);
  static int from_images(const std::array<int, 4>& img);

  static std::string cycle_notation(int a);
  static int parse_cycles(const std::string& text);

  // Fixed constants of the reduction.
  static int tau() { return from_images({1, 0, 2, 3}); }        // (12)
  static int sigma() { return from_images({1, 2, 0, 3}); }      // (123)
  static int target_c() { return from_images({1, 0, 3, 2}); }   // (12)(34)

  static const std::vector<int>& v_elements();
  static const std::vector<int>& a4_elements();

  // The subgroup generated by all commutators [x, y] with x in xs, y in ys.
  static std::vector<int> commutator_subgroup(const std::vector<int>& xs,
                                              const std::vector<int>& ys);

  // y_1..y_4 with [[y1,y2],[y3,y4]] = u; every u in V is realizable.
  static std::array<int, 4> decompose_into_commutators(int u);
};

// Words over {variable, constant, product, inverse, commutator}.
struct WordNode;
using Word = std::shared_ptr<const WordNode>;

struct WordNode {
  enum class Kind { Var, Const, Mul, Inv, Comm } kind;
  int var = -1;
  int value = 0;
  Word a, b;
};

Word w_var(int index);
Word w_const(int value);
Word w_mul(Word a, Word b);
Word w_inv(Word a);
Word w_comm(Word a, Word b);

int eval_word(const Word& w, std::span<const int> assignment);
std::uint64_t word_size(const Word& w);
int word_arity(const Word& w);
std::string print_word(const Word& w, int y_count);  // y1..y_k, then x1..x_n

// alpha_circ(y, xs) = [[...[y, x_1],...], x_s];
// alpha_word(s) = alpha_circ([[y1,y2],[y3,y4]], x_1..x_s) with the y's at
// Var 0..3 and the x's at Var 4..3+s.
Word alpha_circ(Word y, std::span<const Word> xs);
Word alpha_word(int s);

struct ClausePartGadget {
  Word word;        // over the part's local variables Var 0..n-1
  int num_vars;
};

// The DNF-commutator gadget: value always in A4, and in V exactly when the
// part is falsified under b(x) = (x in A4).  Verified on construction:
// exhaustively for up to `exhaustive_vars` variables, with `samples` random
// points above that.
ClausePartGadget build_clause_part(const CnfFormula& part, int exhaustive_vars = 3,
                                   int samples = 10000, std::uint64_t seed = 7);

struct S4Reduction {
  Word word;                                // over y1..y4 (Var 0..3) and x (Var 4..)
  int target;                               // c = (12)(34)
  int s;                                    // part size bound ceil(sqrt(m))
  std::vector<CnfFormula> parts;            // local variable indexing
  std::vector<std::vector<int>> part_vars;  // local -> formula variable
  int num_vars;                             // formula variables
};

S4Reduction reduce_s4(const CnfFormula& phi);

// A full solution of word = c built from a satisfying boolean assignment.
std::vector<int> solve_s4_witness(const S4Reduction& red, const std::vector<bool>& assignment);

}  // namespace nilsat
