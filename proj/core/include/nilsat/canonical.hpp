#pragma once

// Canonical representation of a circuit over the algebra, level by level:
//
//   e_k t(b) = c^k + sum_i lambda^k_i * e_k(b_i)
//                  + sum_{s in S^k} kappa_s * v_k( s(e^{k+1}(b_1),...,e^{k+1}(b_n)) )
//
// A LevelForm holds the data of one such level-k component; its v-terms
// point at level-(k+1) forms, which recursively carry their own v-terms,
// so a form at level k only ever stores one level of scalars directly.
// Forms are hash-consed: structurally equal forms share one node, which is
// what lets addition merge v-terms by summing their kappa coefficients.

#include <cstdint>
#include <memory>
#include <span>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "nilsat/term.hpp"

namespace nilsat {

struct LevelForm;
using FormPtr = std::shared_ptr<const LevelForm>;

struct VTermEntry {
  int kappa;      // in Z_{p_level} \ {0}
  FormPtr inner;  // at level + 1
};

struct LevelForm {
  const AlgebraSpec* spec;
  int level;                      // k, 1-based
  int arity;                      // n
  int c;                          // constant in Z_{p_k}
  std::vector<int> lambda;        // size n, entries in Z_{p_k}
  std::vector<VTermEntry> vterms; // sorted by inner id; empty when level == h
  std::uint64_t id;               // interning id; equal structure <=> equal id

  bool is_constant() const;       // no live lambda and no v-terms
};

// Interning pool.  Forms created through one pool compare by id; the pool
// itself is only needed while building.
class FormPool {
 public:
  explicit FormPool(const AlgebraSpec& spec) : spec_(&spec) {}

  FormPtr intern(int level, int arity, int c, std::vector<int> lambda,
                 std::vector<VTermEntry> vterms);
  FormPtr zero(int level, int arity);
  FormPtr constant(int level, int arity, int c);

  const AlgebraSpec& spec() const { return *spec_; }

 private:
  using Key = std::vector<std::int64_t>;
  struct KeyHash {
    std::size_t operator()(const Key& k) const;
  };
  const AlgebraSpec* spec_;
  std::unordered_map<Key, FormPtr, KeyHash> pool_;
  std::uint64_t next_id_ = 0;
};

struct CanonicalForm {
  const AlgebraSpec* spec;
  int arity;
  std::vector<FormPtr> levels;  // levels[k-1] is the level-k component

  const AlgebraSpec& algebra() const { return *spec; }
};

// Memoized per circuit node: shared subcircuits are canonicalized once.
CanonicalForm canonicalize(const Circuit& c);

// Value of one level-k component, as a residue in Z_{p_k}.
int eval_level_form(const LevelForm& form, std::span<const DElem> assignment);

DElem evaluate_canonical(const CanonicalForm& f, std::span<const DElem> assignment);

// Unfolded entry count: per form 1 (constant) + #nonzero lambdas
// + per v-term (1 + inner size).  Shared inner forms count once per
// occurrence, matching the paper-style unwound measure.
std::uint64_t canonical_size(const CanonicalForm& f);

// Rebuilds a term computing a single level form (used by the slice
// combiner and by tests that cross-check forms against the evaluator).
Term term_of_level_form(const FormPtr& form, const AlgebraSpec& spec);

nlohmann::ordered_json level_form_to_json(const FormPtr& form);
nlohmann::ordered_json canonical_to_json(const CanonicalForm& f);

}  // namespace nilsat
