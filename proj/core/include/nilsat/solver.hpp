#pragma once

// Decision procedures for circuit satisfiability and equivalence over the
// algebra:
//
//  * solve_brute        exhaustive oracle with exact counting,
//  * solve_sparse       support-bounded search (support size ascending,
//                       support sets and value tuples in lex order),
//  * solve_random       seeded uniform sampling,
//  * ceqv               equivalence to the zero function,
//
// plus the slice machinery: restricting an equation to a slice E^k(u)
// yields a k-equation system, combine_system_V replaces the system by one
// two-valued term t*, and extract_conjunction turns a solved t* into a
// conjunction-like term ready for CC-circuit extraction.
//
// Work partitions across workers by canonical candidate index; the first
// witness is the smallest index, never the first arrival, so results are
// identical for any worker count.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "nilsat/canonical.hpp"
#include "nilsat/funcrep.hpp"
#include "nilsat/gf.hpp"
#include "nilsat/term.hpp"

namespace nilsat {

struct Instance {
  Circuit circuit;
  DElem target;  // the equation circuit(x) = target

  int arity() const { return circuit.arity(); }
};

enum class SolveStatus { Sat, Unsat, UnsatAtBound, GiveUp };
const char* to_string(SolveStatus s);

struct SolveResult {
  SolveStatus status;
  std::vector<DElem> witness;     // nonempty iff Sat
  int support = -1;               // witness support size (sparse solver)
  std::uint64_t evaluations = 0;  // canonical-order evaluation count
};

// Pluggable bound B(size, h) for the sparse solver.
struct SupportBound {
  enum class Kind { Sesh, Exhaustive, Fixed, Custom };
  Kind kind = Kind::Sesh;
  double c = 1.0;  // sesh: ceil(c * log2(size)^(h-1))
  int fixed = 0;
  bool escalate = true;  // keep growing the support past the bound
  std::function<int(std::uint64_t, int)> custom;

  int bound_for(std::uint64_t size, int height, int arity) const;
};

struct SearchLimits {
  std::uint64_t max_evaluations = 100'000'000;
};

SolveResult solve_brute(const Instance& inst, int workers = 1, const SearchLimits& limits = {});
SolveResult solve_sparse(const Instance& inst, const SupportBound& bound, int workers = 1,
                         const SearchLimits& limits = {});
SolveResult solve_random(const Instance& inst, std::uint64_t budget, std::uint64_t seed,
                         int workers = 1);

struct SolverConfig {
  enum class Kind { Brute, Sparse, Random } kind = Kind::Brute;
  SupportBound bound{};
  std::uint64_t budget = 1000;
  std::uint64_t seed = 0;
  int workers = 1;
  SearchLimits limits{};
};

SolveResult solve(const Instance& inst, const SolverConfig& config);

struct CeqvResult {
  enum class Status { Equiv, Counterexample, GiveUp } status;
  DElem value;                 // the attained d != 0, for counterexamples
  std::vector<DElem> witness;
};

// Is t identically 0?  Complete exactly when the configured solver is.
CeqvResult ceqv(const Circuit& t, const SolverConfig& config);

struct DensityReport {
  std::uint64_t domain = 0;              // |D|^n
  std::vector<std::uint64_t> exact;      // per element index (exact mode)
  std::vector<double> estimate;          // per element index (sampling mode)
  std::vector<double> stderr_bars;
  std::uint64_t samples = 0;
};

DensityReport density_exact(const Circuit& t, int workers = 1, const SearchLimits& limits = {});
DensityReport density_sampled(const Circuit& t, std::uint64_t samples, std::uint64_t seed,
                              int workers = 1);

// ---------------------------------------------------------------------------
// Slices.
// ---------------------------------------------------------------------------

// E^k(u) = { b : e_j(b) = e_j(u) for all j != k }.
struct SliceSet {
  std::vector<DElem> base;
  int level;

  bool contains(std::span<const DElem> b) const;
  // The slice member whose level-k coordinates are `coords`.
  std::vector<DElem> member(std::span<const int> coords) const;
};

// The k equations an equation t(b) = target reduces to inside the slice:
// equations[k-1] is linear in the e_k coordinates, every lower level keeps
// only its v-terms, with all fixed coordinates folded into the constants.
struct SliceSystem {
  const AlgebraSpec* spec = nullptr;
  int arity = 0;
  int k = 0;
  std::vector<FormPtr> equations;  // [j-1] is the level-j equation
};

SliceSystem restrict_to_slice(const CanonicalForm& f, const SliceSet& slice);
SliceSystem restrict_to_slice(const CanonicalForm& f, const SliceSet& slice, const DElem& target);

bool slice_system_holds(const SliceSystem& sys, std::span<const DElem> b);

// One two-valued term t* with t*(b) = e_1 1 exactly where the whole system
// holds (for b in the slice).  For k = 1 this needs p_1 = 2: with p_1 > 2
// the combiner would have to raise an affine level-1 form to the power
// p_1 - 1, which no term of the algebra can express on e_1-confined inputs.
Term combine_system_V(const SliceSystem& sys, const RepresentLimits& limits = {});

struct Conjunction {
  Term term;
  int arity;                   // surviving variable count
  std::vector<int> survivors;  // original indices, ascending
};

// Substitute mode: fix every variable with e_k(a_i) = 0 to the constant
// a_i and rescale the survivors so the all-(e_k 1) row maps onto a.
Conjunction extract_conjunction(const Term& tstar, const AlgebraSpec& spec,
                                std::span<const DElem> witness, int k);
// Affine mode: substitute the hyperplane's pivot equations, then shift so
// the all-(e_k 1) row lands on the isolated point z.
Conjunction extract_conjunction_affine(const Term& tstar, const AlgebraSpec& spec, int arity,
                                       const RowReduced& hyperplane, std::span<const int> z,
                                       int k);

}  // namespace nilsat
