#pragma once

// Expression trees and shared-node circuits over the algebra signature
// {+, -, constants, e_j, v_j}.
//
// A Term is an immutable tree; builders may share subtree pointers freely,
// and all size accounting treats a Term as the fully unfolded tree (so a
// chain of k shared doublings really has 2^{k+1}-1 nodes).  A Circuit is an
// explicit DAG: a topologically ordered node list with shared children, a
// designated output and a declared input arity.  compile() deduplicates
// structurally equal subterms, which is where circuits smaller than their
// terms come from.

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nilsat/algebra.hpp"

namespace nilsat {

enum class NodeKind { Var, Const, Add, Neg, E, V };

struct TermNode;
using Term = std::shared_ptr<const TermNode>;

struct TermNode {
  NodeKind kind;
  int var = -1;    // Var
  DElem value;     // Const
  int level = 0;   // E / V
  Term a, b;       // children (Add uses both, Neg/E/V use a)
};

Term t_var(int index);
Term t_const(DElem value);
Term t_add(Term a, Term b);
Term t_neg(Term a);
Term t_e(int level, Term a);
Term t_v(int level, Term a);

// lambda * t as literal repeated addition (lambda reduced mod p_1..p_h has
// no meaning for terms, so the caller passes a small non-negative scalar).
Term t_scale(int lambda, const Term& t, const AlgebraSpec& spec);
// The normalization t - s used to put equations into the form t - s = 0.
Term t_sub(const Term& a, const Term& b);

// Unfolded node count, saturating at uint64 max.
std::uint64_t term_size(const Term& t);
// Number of distinct variables assuming dense indexing: max index + 1.
int term_arity(const Term& t);
// Printed length of the term text (for comparing the node-count measure
// against plain character length in reports).
std::uint64_t term_chars(const Term& t);

struct CNode {
  NodeKind kind;
  int var = -1;
  DElem value;
  int level = 0;
  int a = -1, b = -1;
};

class Circuit {
 public:
  Circuit(const AlgebraSpec& spec, std::vector<CNode> nodes, int output, int arity);

  const AlgebraSpec& spec() const { return *spec_; }
  const std::vector<CNode>& nodes() const { return nodes_; }
  int output() const { return output_; }
  int arity() const { return arity_; }
  std::size_t size() const { return nodes_.size(); }

 private:
  const AlgebraSpec* spec_;
  std::vector<CNode> nodes_;
  int output_;
  int arity_;
};

// Builds circuits node by node; children must already exist.
class CircuitBuilder {
 public:
  explicit CircuitBuilder(const AlgebraSpec& spec, int arity)
      : spec_(&spec), arity_(arity) {}

  int add_var(int index);
  int add_const(DElem value);
  int add_add(int a, int b);
  int add_neg(int a);
  int add_e(int level, int a);
  int add_v(int level, int a);
  std::size_t size() const { return nodes_.size(); }

  Circuit build(int output) &&;

 private:
  int push(CNode node);
  const AlgebraSpec* spec_;
  int arity_;
  std::vector<CNode> nodes_;
};

// Structural dedup: shared and repeated subterms become single nodes.
// If `arity` is negative the declared arity is max var index + 1.
Circuit compile(const Term& t, const AlgebraSpec& spec, int arity = -1);

// Expansion in the other direction.  The result shares subtree pointers but
// denotes the full tree; throws if the unfolded node count exceeds the
// ceiling.
Term term_of_circuit(const Circuit& c, std::uint64_t max_nodes = 1u << 22);

DElem evaluate(const Circuit& c, std::span<const DElem> assignment);
DElem evaluate(const Term& t, const AlgebraSpec& spec, std::span<const DElem> assignment);

// Reusable evaluation scratch space for hot loops (one per worker thread).
class Evaluator {
 public:
  DElem eval(const Circuit& c, std::span<const DElem> assignment);

 private:
  std::vector<DElem> values_;
};

std::string print_term(const Term& t);
std::string print_circuit(const Circuit& c);

// Structure-preserving substitutions (shared subtrees stay shared).
// Renumber variables: Var(i) becomes Var(var_map[i]).
Term subst_vars(const Term& t, std::span<const int> var_map);
// Replace Var(i) by replacements[i].
Term subst_terms(const Term& t, std::span<const Term> replacements);

}  // namespace nilsat
