#pragma once

// Shared helpers for the test suites: seeded random circuits and formulas,
// exhaustive assignment enumeration, and the independent boolean
// brute-force oracle the reduction tests compare against.

#include <optional>
#include <vector>

#include "nilsat/cnf.hpp"
#include "nilsat/rng.hpp"
#include "nilsat/term.hpp"

namespace nilsat::testutil {

// A random DAG circuit of roughly `target_size` nodes over all node kinds.
inline Circuit random_circuit(SplitMix64& rng, const AlgebraSpec& spec, int arity,
                              int target_size) {
  CircuitBuilder builder(spec, arity);
  std::vector<int> ids;
  for (int i = 0; i < arity; ++i) ids.push_back(builder.add_var(i));
  if (arity == 0) ids.push_back(builder.add_const(spec.zero()));
  while (static_cast<int>(builder.size()) < target_size) {
    int a = ids[static_cast<std::size_t>(rng.below(ids.size()))];
    int b = ids[static_cast<std::size_t>(rng.below(ids.size()))];
    switch (rng.below_int(8)) {
      case 0:
      case 1:
      case 2:
        ids.push_back(builder.add_add(a, b));
        break;
      case 3:
        ids.push_back(builder.add_neg(a));
        break;
      case 4:
        ids.push_back(builder.add_const(spec.element(rng.below(spec.carrier_size()))));
        break;
      case 5:
      case 6:
        ids.push_back(builder.add_e(1 + rng.below_int(spec.height()), a));
        break;
      default:
        if (spec.height() >= 2)
          ids.push_back(builder.add_v(1 + rng.below_int(spec.height() - 1), a));
        else
          ids.push_back(builder.add_neg(a));
        break;
    }
  }
  return std::move(builder).build(static_cast<int>(builder.size()) - 1);
}

// Calls fn for each of |D|^n assignments.
template <typename Fn>
void for_all_assignments(const AlgebraSpec& spec, int n, Fn&& fn) {
  std::vector<DElem> assignment(static_cast<std::size_t>(n), spec.zero());
  std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
  while (true) {
    fn(std::span<const DElem>(assignment));
    int pos = n - 1;
    while (pos >= 0) {
      if (++idx[static_cast<std::size_t>(pos)] < spec.carrier_size()) {
        assignment[static_cast<std::size_t>(pos)] = spec.element(idx[static_cast<std::size_t>(pos)]);
        break;
      }
      idx[static_cast<std::size_t>(pos)] = 0;
      assignment[static_cast<std::size_t>(pos)] = spec.zero();
      --pos;
    }
    if (pos < 0) break;
  }
}

inline std::vector<DElem> random_assignment(SplitMix64& rng, const AlgebraSpec& spec, int n) {
  std::vector<DElem> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out.push_back(spec.element(rng.below(spec.carrier_size())));
  return out;
}

// Independent boolean oracle.
inline std::optional<std::vector<bool>> boolean_brute(const CnfFormula& f) {
  int n = f.num_vars;
  std::vector<bool> assignment(static_cast<std::size_t>(n), false);
  for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
    for (int i = 0; i < n; ++i) assignment[static_cast<std::size_t>(i)] = (mask >> i) & 1;
    if (eval_cnf(f, assignment)) return assignment;
  }
  return std::nullopt;
}

inline CnfFormula random_cnf(SplitMix64& rng, int num_vars, int num_clauses) {
  CnfFormula f;
  f.num_vars = num_vars;
  for (int ci = 0; ci < num_clauses; ++ci) {
    Clause c;
    int width = 1 + rng.below_int(3);
    for (int li = 0; li < width; ++li)
      c.literals.push_back({rng.below_int(num_vars), rng.below(2) == 0});
    f.clauses.push_back(std::move(c));
  }
  return f;
}

}  // namespace nilsat::testutil
