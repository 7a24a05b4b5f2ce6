#include "nilsat/reduction.hpp"

#include <stdexcept>
#include <string>

namespace nilsat {

int part_bound(int m, int h) {
  if (m < 1) throw std::invalid_argument("clause count must be positive");
  if (h < 2) throw std::invalid_argument("part bound needs height >= 2");
  for (int s = 1;; ++s) {
    std::uint64_t pow = 1;
    for (int i = 0; i < h - 1 && pow < static_cast<std::uint64_t>(m); ++i)
      pow *= static_cast<std::uint64_t>(s);
    if (pow >= static_cast<std::uint64_t>(m)) return s;
  }
}

ReductionOutput reduce(const CnfFormula& phi, const AlgebraSpec& spec,
                       const RepresentLimits& limits) {
  int h = spec.height();
  if (h < 2) throw std::invalid_argument("the reduction needs height >= 2");
  if (!spec.alternating())
    throw std::invalid_argument("the reduction needs alternating primes");
  if (phi.clauses.empty())
    throw std::invalid_argument("empty formulas are trivially satisfiable; nothing to reduce");
  for (const Clause& c : phi.clauses)
    if (c.literals.size() > 3)
      throw std::invalid_argument("clause with more than three literals; split to 3-CNF first");

  int m = phi.clause_count();
  int s = part_bound(m, h);

  ReductionOutput out;
  out.s = s;
  out.target = spec.unit(1);

  // Clauses packed in input order, s per part.
  for (int start = 0; start < m; start += s) {
    CnfFormula part;
    std::vector<int> vars;  // local -> global, in first-occurrence order
    for (int ci = start; ci < std::min(start + s, m); ++ci) {
      Clause local;
      for (const Literal& lit : phi.clauses[static_cast<std::size_t>(ci)].literals) {
        int local_var = -1;
        for (std::size_t i = 0; i < vars.size(); ++i)
          if (vars[i] == lit.var) local_var = static_cast<int>(i);
        if (local_var < 0) {
          local_var = static_cast<int>(vars.size());
          vars.push_back(lit.var);
        }
        local.literals.push_back({local_var, lit.positive});
      }
      part.clauses.push_back(std::move(local));
    }
    part.num_vars = static_cast<int>(vars.size());
    out.parts.push_back(std::move(part));
    out.part_vars.push_back(std::move(vars));
  }

  std::uint64_t max_parts = 1;
  for (int i = 0; i < h - 2; ++i) max_parts *= static_cast<std::uint64_t>(s);
  if (out.parts.size() > max_parts)
    throw std::logic_error("part packing produced more than s^(h-2) parts");

  Term tower;
  std::vector<Term> slots(max_parts);
  try {
    tower = build_and_tower(s, spec, limits);
    for (std::size_t i = 0; i < out.parts.size(); ++i) {
      Term gadget = build_cnf_gadget(out.parts[i], spec, limits);
      slots[i] = subst_vars(gadget, out.part_vars[i]);
    }
  } catch (const std::runtime_error& err) {
    throw std::runtime_error("reduction with " + std::to_string(m) + " clauses needs part size s=" +
                             std::to_string(s) + ": " + err.what());
  }
  // Unused tower inputs take the conjunction-neutral constant e_{h-1}1.
  for (std::size_t i = out.parts.size(); i < max_parts; ++i)
    slots[i] = t_const(spec.unit(h - 1));

  out.term = subst_terms(tower, slots);
  return out;
}

std::vector<DElem> lift_witness(const CnfFormula& phi, const std::vector<bool>& assignment,
                                const AlgebraSpec& spec) {
  if (static_cast<int>(assignment.size()) != phi.num_vars)
    throw std::invalid_argument("assignment length does not match variable count");
  std::vector<DElem> out;
  out.reserve(assignment.size());
  for (bool b : assignment) out.push_back(b ? spec.unit(spec.height()) : spec.zero());
  return out;
}

std::vector<bool> read_witness(std::span<const DElem> assignment) {
  std::vector<bool> out;
  out.reserve(assignment.size());
  for (const DElem& a : assignment) out.push_back(a.coord(a.spec().height()) != 0);
  return out;
}

}  // namespace nilsat
