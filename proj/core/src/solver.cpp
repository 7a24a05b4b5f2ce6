#include "nilsat/solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <stdexcept>
#include <thread>

#include "nilsat/funcrep.hpp"
#include "nilsat/rng.hpp"

namespace nilsat {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Sat: return "SAT";
    case SolveStatus::Unsat: return "UNSAT";
    case SolveStatus::UnsatAtBound: return "UNSAT-AT-BOUND";
    case SolveStatus::GiveUp: return "GIVE-UP";
  }
  return "?";
}

int SupportBound::bound_for(std::uint64_t size, int height, int arity) const {
  switch (kind) {
    case Kind::Exhaustive:
      return arity;
    case Kind::Fixed:
      return std::min(fixed, arity);
    case Kind::Custom:
      return std::clamp(custom(size, height), 0, arity);
    case Kind::Sesh: {
      double lg = std::log2(static_cast<double>(std::max<std::uint64_t>(size, 2)));
      double b = c * std::pow(lg, height - 1);
      return std::clamp(static_cast<int>(std::ceil(b)), 0, arity);
    }
  }
  return arity;
}

namespace {

constexpr std::uint64_t kNoWitness = ~0ull;

std::uint64_t pow_checked(std::uint64_t base, int exp, std::uint64_t cap) {
  std::uint64_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (r > cap / base) return cap + 1;
    r *= base;
  }
  return r;
}

// Runs fn(worker, begin, end) over a chunked index range.
template <typename Fn>
void parallel_chunks(std::uint64_t total, int workers, Fn&& fn) {
  workers = std::max(1, workers);
  if (workers == 1 || total < 2) {
    fn(0, 0, total);
    return;
  }
  std::uint64_t chunk = (total + static_cast<std::uint64_t>(workers) - 1) /
                        static_cast<std::uint64_t>(workers);
  std::vector<std::thread> threads;
  for (int w = 0; w < workers; ++w) {
    std::uint64_t begin = chunk * static_cast<std::uint64_t>(w);
    std::uint64_t end = std::min(total, begin + chunk);
    if (begin >= end) break;
    threads.emplace_back([&fn, w, begin, end] { fn(w, begin, end); });
  }
  for (auto& t : threads) t.join();
}

void decode_assignment(const AlgebraSpec& spec, std::uint64_t index, int n,
                       std::vector<DElem>& out) {
  std::uint64_t d = spec.carrier_size();
  out.resize(static_cast<std::size_t>(n), spec.zero());
  for (int i = n - 1; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = spec.element(index % d);
    index /= d;
  }
}

std::uint64_t binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  }
  return r;
}

// Lex-order unranking of a k-subset of {0..n-1}.
void unrank_combination(int n, int k, std::uint64_t rank, std::vector<int>& out) {
  out.clear();
  int next = 0;
  for (int slot = 0; slot < k; ++slot) {
    for (int candidate = next;; ++candidate) {
      std::uint64_t block = binom(n - candidate - 1, k - slot - 1);
      if (rank < block) {
        out.push_back(candidate);
        next = candidate + 1;
        break;
      }
      rank -= block;
    }
  }
}

}  // namespace

SolveResult solve_brute(const Instance& inst, int workers, const SearchLimits& limits) {
  const AlgebraSpec& spec = inst.circuit.spec();
  int n = inst.arity();
  std::uint64_t total = pow_checked(spec.carrier_size(), n, limits.max_evaluations);
  if (total > limits.max_evaluations)
    throw std::runtime_error("brute search needs " + std::to_string(spec.carrier_size()) + "^" +
                             std::to_string(n) + " evaluations, above the ceiling of " +
                             std::to_string(limits.max_evaluations));

  std::atomic<std::uint64_t> best{kNoWitness};
  parallel_chunks(total, workers, [&](int, std::uint64_t begin, std::uint64_t end) {
    Evaluator ev;
    std::vector<DElem> assignment;
    for (std::uint64_t idx = begin; idx < end; ++idx) {
      if ((idx & 0x3ff) == 0 && best.load(std::memory_order_relaxed) < begin) return;
      decode_assignment(spec, idx, n, assignment);
      if (ev.eval(inst.circuit, assignment) == inst.target) {
        std::uint64_t prev = best.load(std::memory_order_relaxed);
        while (idx < prev && !best.compare_exchange_weak(prev, idx)) {
        }
        return;
      }
    }
  });

  SolveResult res;
  std::uint64_t hit = best.load();
  if (hit == kNoWitness) {
    res.status = SolveStatus::Unsat;
    res.evaluations = total;
  } else {
    res.status = SolveStatus::Sat;
    res.evaluations = hit + 1;
    decode_assignment(spec, hit, n, res.witness);
    res.support = 0;
    for (const DElem& a : res.witness)
      if (!a.is_zero()) ++res.support;
  }
  return res;
}

SolveResult solve_sparse(const Instance& inst, const SupportBound& bound, int workers,
                         const SearchLimits& limits) {
  const AlgebraSpec& spec = inst.circuit.spec();
  int n = inst.arity();
  std::uint64_t nonzero = spec.carrier_size() - 1;
  int b0 = bound.bound_for(inst.circuit.size(), spec.height(), n);
  int last_sigma = bound.escalate ? n : b0;

  std::uint64_t evaluated_before = 0;
  for (int sigma = 0; sigma <= last_sigma; ++sigma) {
    std::uint64_t supports = binom(n, sigma);
    std::uint64_t values = pow_checked(nonzero, sigma, limits.max_evaluations);
    if (values > limits.max_evaluations || supports > limits.max_evaluations / values)
      throw std::runtime_error("support level " + std::to_string(sigma) + " needs " +
                               std::to_string(supports) + " * " + std::to_string(values) +
                               " evaluations, above the ceiling of " +
                               std::to_string(limits.max_evaluations));
    std::uint64_t space = supports * values;

    std::atomic<std::uint64_t> best{kNoWitness};
    parallel_chunks(space, workers, [&](int, std::uint64_t begin, std::uint64_t end) {
      Evaluator ev;
      std::vector<int> support;
      std::vector<DElem> assignment(static_cast<std::size_t>(n), spec.zero());
      std::uint64_t support_rank = values == 0 ? 0 : begin / values;
      std::uint64_t value_rank = values == 0 ? 0 : begin % values;
      unrank_combination(n, sigma, support_rank, support);
      for (std::uint64_t idx = begin; idx < end; ++idx) {
        if ((idx & 0xff) == 0 && best.load(std::memory_order_relaxed) < begin) return;
        // Assignment: zero outside the support, the unranked nonzero values
        // (element indices 1..|D|-1, lex by slot) on it.
        std::fill(assignment.begin(), assignment.end(), spec.zero());
        std::uint64_t v = value_rank;
        for (int slot = sigma - 1; slot >= 0; --slot) {
          assignment[static_cast<std::size_t>(support[static_cast<std::size_t>(slot)])] =
              spec.element(1 + v % nonzero);
          v /= nonzero;
        }
        if (ev.eval(inst.circuit, assignment) == inst.target) {
          std::uint64_t prev = best.load(std::memory_order_relaxed);
          while (idx < prev && !best.compare_exchange_weak(prev, idx)) {
          }
          return;
        }
        if (++value_rank == values) {
          value_rank = 0;
          ++support_rank;
          unrank_combination(n, sigma, support_rank, support);
        }
      }
    });

    std::uint64_t hit = best.load();
    if (hit != kNoWitness) {
      SolveResult res;
      res.status = SolveStatus::Sat;
      res.support = sigma;
      res.evaluations = evaluated_before + hit + 1;
      std::vector<int> support;
      unrank_combination(n, sigma, values == 0 ? 0 : hit / values, support);
      res.witness.assign(static_cast<std::size_t>(n), spec.zero());
      std::uint64_t v = values == 0 ? 0 : hit % values;
      for (int slot = sigma - 1; slot >= 0; --slot) {
        res.witness[static_cast<std::size_t>(support[static_cast<std::size_t>(slot)])] =
            spec.element(1 + v % nonzero);
        v /= nonzero;
      }
      return res;
    }
    evaluated_before += space;
  }

  SolveResult res;
  res.status = last_sigma >= n ? SolveStatus::Unsat : SolveStatus::UnsatAtBound;
  res.evaluations = evaluated_before;
  return res;
}

SolveResult solve_random(const Instance& inst, std::uint64_t budget, std::uint64_t seed,
                         int workers) {
  if (budget < 1) throw std::invalid_argument("budget must be at least 1");
  const AlgebraSpec& spec = inst.circuit.spec();
  int n = inst.arity();
  std::uint64_t d = spec.carrier_size();

  std::atomic<std::uint64_t> best{kNoWitness};
  parallel_chunks(budget, workers, [&](int, std::uint64_t begin, std::uint64_t end) {
    Evaluator ev;
    std::vector<DElem> assignment(static_cast<std::size_t>(n), spec.zero());
    for (std::uint64_t idx = begin; idx < end; ++idx) {
      if ((idx & 0xff) == 0 && best.load(std::memory_order_relaxed) < begin) return;
      SplitMix64 rng(substream_seed(seed, idx));
      for (int i = 0; i < n; ++i)
        assignment[static_cast<std::size_t>(i)] = spec.element(rng.below(d));
      if (ev.eval(inst.circuit, assignment) == inst.target) {
        std::uint64_t prev = best.load(std::memory_order_relaxed);
        while (idx < prev && !best.compare_exchange_weak(prev, idx)) {
        }
        return;
      }
    }
  });

  SolveResult res;
  std::uint64_t hit = best.load();
  if (hit == kNoWitness) {
    res.status = SolveStatus::GiveUp;
    res.evaluations = budget;
  } else {
    res.status = SolveStatus::Sat;
    res.evaluations = hit + 1;
    SplitMix64 rng(substream_seed(seed, hit));
    res.witness.assign(static_cast<std::size_t>(n), spec.zero());
    for (int i = 0; i < n; ++i)
      res.witness[static_cast<std::size_t>(i)] = spec.element(rng.below(d));
    res.support = 0;
    for (const DElem& a : res.witness)
      if (!a.is_zero()) ++res.support;
  }
  return res;
}

SolveResult solve(const Instance& inst, const SolverConfig& config) {
  switch (config.kind) {
    case SolverConfig::Kind::Brute:
      return solve_brute(inst, config.workers, config.limits);
    case SolverConfig::Kind::Sparse:
      return solve_sparse(inst, config.bound, config.workers, config.limits);
    case SolverConfig::Kind::Random:
      return solve_random(inst, config.budget, config.seed, config.workers);
  }
  throw std::logic_error("unknown solver kind");
}

CeqvResult ceqv(const Circuit& t, const SolverConfig& config) {
  const AlgebraSpec& spec = t.spec();
  bool incomplete = false;
  for (std::size_t di = 1; di < spec.carrier_size(); ++di) {
    DElem d = spec.element(di);
    SolveResult r = solve(Instance{t, d}, config);
    if (r.status == SolveStatus::Sat)
      return CeqvResult{CeqvResult::Status::Counterexample, d, std::move(r.witness)};
    if (r.status != SolveStatus::Unsat) incomplete = true;
  }
  if (incomplete) return CeqvResult{CeqvResult::Status::GiveUp, spec.zero(), {}};
  return CeqvResult{CeqvResult::Status::Equiv, spec.zero(), {}};
}

DensityReport density_exact(const Circuit& t, int workers, const SearchLimits& limits) {
  const AlgebraSpec& spec = t.spec();
  int n = t.arity();
  std::uint64_t total = pow_checked(spec.carrier_size(), n, limits.max_evaluations);
  if (total > limits.max_evaluations)
    throw std::runtime_error("exact density needs " + std::to_string(spec.carrier_size()) + "^" +
                             std::to_string(n) + " evaluations, above the ceiling of " +
                             std::to_string(limits.max_evaluations));

  int nworkers = std::max(1, workers);
  std::vector<std::vector<std::uint64_t>> partial(
      static_cast<std::size_t>(nworkers),
      std::vector<std::uint64_t>(spec.carrier_size(), 0));
  parallel_chunks(total, nworkers, [&](int w, std::uint64_t begin, std::uint64_t end) {
    Evaluator ev;
    std::vector<DElem> assignment;
    for (std::uint64_t idx = begin; idx < end; ++idx) {
      decode_assignment(spec, idx, n, assignment);
      DElem val = ev.eval(t, assignment);
      ++partial[static_cast<std::size_t>(w)][spec.index_of(val)];
    }
  });

  DensityReport rep;
  rep.domain = total;
  rep.exact.assign(spec.carrier_size(), 0);
  for (const auto& p : partial)
    for (std::size_t i = 0; i < p.size(); ++i) rep.exact[i] += p[i];
  return rep;
}

DensityReport density_sampled(const Circuit& t, std::uint64_t samples, std::uint64_t seed,
                              int workers) {
  if (samples < 1) throw std::invalid_argument("need at least one sample");
  const AlgebraSpec& spec = t.spec();
  int n = t.arity();
  std::uint64_t d = spec.carrier_size();

  int nworkers = std::max(1, workers);
  std::vector<std::vector<std::uint64_t>> partial(
      static_cast<std::size_t>(nworkers), std::vector<std::uint64_t>(d, 0));
  parallel_chunks(samples, nworkers, [&](int w, std::uint64_t begin, std::uint64_t end) {
    Evaluator ev;
    std::vector<DElem> assignment(static_cast<std::size_t>(n), spec.zero());
    for (std::uint64_t idx = begin; idx < end; ++idx) {
      SplitMix64 rng(substream_seed(seed, idx));
      for (int i = 0; i < n; ++i)
        assignment[static_cast<std::size_t>(i)] = spec.element(rng.below(d));
      ++partial[static_cast<std::size_t>(w)][spec.index_of(ev.eval(t, assignment))];
    }
  });

  DensityReport rep;
  rep.domain = samples;
  rep.samples = samples;
  rep.estimate.assign(d, 0.0);
  rep.stderr_bars.assign(d, 0.0);
  std::vector<std::uint64_t> counts(d, 0);
  for (const auto& p : partial)
    for (std::size_t i = 0; i < p.size(); ++i) counts[i] += p[i];
  for (std::size_t i = 0; i < d; ++i) {
    double phat = static_cast<double>(counts[i]) / static_cast<double>(samples);
    rep.estimate[i] = phat;
    rep.stderr_bars[i] = std::sqrt(phat * (1.0 - phat) / static_cast<double>(samples));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Slices.
// ---------------------------------------------------------------------------

bool SliceSet::contains(std::span<const DElem> b) const {
  if (b.size() != base.size()) return false;
  if (base.empty()) return true;
  const AlgebraSpec& spec = base[0].spec();
  for (std::size_t i = 0; i < base.size(); ++i)
    for (int j = 1; j <= spec.height(); ++j)
      if (j != level && b[i].coord(j) != base[i].coord(j)) return false;
  return true;
}

std::vector<DElem> SliceSet::member(std::span<const int> coords) const {
  if (coords.size() != base.size()) throw std::invalid_argument("coordinate count mismatch");
  std::vector<DElem> out(base.begin(), base.end());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = out[i].with_coord(level, coords[i]);
  return out;
}

namespace {

// Specializes a level form to the slice E^k(u): coordinates other than k
// are fixed from u, so lambda parts below level k and v-terms at level k
// and above fold into the constants.  Shared forms specialize once.
FormPtr specialize(const FormPtr& form, std::span<const DElem> u, int k, FormPool& pool,
                   std::unordered_map<const LevelForm*, FormPtr>& memo) {
  auto found = memo.find(form.get());
  if (found != memo.end()) return found->second;
  const AlgebraSpec& spec = pool.spec();
  int level = form->level;
  int p = spec.prime(level);
  if (level > k) {
    FormPtr out = pool.constant(level, form->arity, eval_level_form(*form, u));
    memo.emplace(form.get(), out);
    return out;
  }
  if (level == k) {
    long long c = form->c;
    for (const VTermEntry& vt : form->vterms)
      if (eval_level_form(*vt.inner, u) != 0) c += vt.kappa;
    FormPtr out = pool.intern(level, form->arity, static_cast<int>(c % p), form->lambda, {});
    memo.emplace(form.get(), out);
    return out;
  }
  // level < k: the linear part is fixed, the v-terms stay live.
  long long c = form->c;
  for (int i = 0; i < form->arity; ++i)
    c += static_cast<long long>(form->lambda[static_cast<std::size_t>(i)]) *
         u[static_cast<std::size_t>(i)].coord(level);
  std::vector<VTermEntry> vterms;
  for (const VTermEntry& vt : form->vterms) {
    FormPtr inner = specialize(vt.inner, u, k, pool, memo);
    if (inner->is_constant()) {
      if (inner->c != 0) c += vt.kappa;
    } else {
      vterms.push_back({vt.kappa, inner});
    }
  }
  // Merge structurally equal inners that specialization may have exposed.
  std::sort(vterms.begin(), vterms.end(), [](const VTermEntry& a, const VTermEntry& b) {
    return a.inner->id < b.inner->id;
  });
  std::vector<VTermEntry> merged;
  for (const VTermEntry& vt : vterms) {
    if (!merged.empty() && merged.back().inner == vt.inner) {
      merged.back().kappa = (merged.back().kappa + vt.kappa) % p;
    } else {
      merged.push_back(vt);
    }
  }
  std::erase_if(merged, [](const VTermEntry& vt) { return vt.kappa == 0; });
  FormPtr out = pool.intern(level, form->arity, static_cast<int>(c % p),
                            std::vector<int>(static_cast<std::size_t>(form->arity), 0),
                            std::move(merged));
  memo.emplace(form.get(), out);
  return out;
}

}  // namespace

SliceSystem restrict_to_slice(const CanonicalForm& f, const SliceSet& slice) {
  return restrict_to_slice(f, slice, f.spec->zero());
}

SliceSystem restrict_to_slice(const CanonicalForm& f, const SliceSet& slice,
                              const DElem& target) {
  const AlgebraSpec& spec = *f.spec;
  int k = slice.level;
  if (k < 1 || k > spec.height()) throw std::out_of_range("level out of range");
  if (static_cast<int>(slice.base.size()) != f.arity)
    throw std::invalid_argument("slice arity mismatch");

  SliceSystem sys;
  sys.spec = &spec;
  sys.arity = f.arity;
  sys.k = k;

  // Levels above k are fixed on the slice, so the system only covers levels
  // 1..k of t(b) = target; whether the upper levels hold is a property of
  // the base point alone.  The interned forms own their data, the pool is
  // only needed while building.
  FormPool pool(spec);
  std::unordered_map<const LevelForm*, FormPtr> memo;
  for (int j = 1; j <= k; ++j) {
    FormPtr eq =
        specialize(f.levels[static_cast<std::size_t>(j - 1)], slice.base, k, pool, memo);
    int p = spec.prime(j);
    int shift = target.coord(j) == 0 ? 0 : p - target.coord(j);
    if (shift != 0) {
      // Equation e_j t(b) = d_j becomes e_j t(b) - d_j = 0.
      eq = pool.intern(j, eq->arity, (eq->c + shift) % p, eq->lambda, eq->vterms);
    }
    sys.equations.push_back(std::move(eq));
  }
  return sys;
}

bool slice_system_holds(const SliceSystem& sys, std::span<const DElem> b) {
  for (const FormPtr& eq : sys.equations)
    if (eval_level_form(*eq, b) != 0) return false;
  return true;
}

namespace {

// Multilinear polynomials over idempotent {0,1}-valued indicator slots,
// coefficients mod p: monomials are sorted slot-index sets.
using Monomial = std::vector<int>;
using MultiPoly = std::map<Monomial, int>;

MultiPoly poly_scale_add(const MultiPoly& a, const MultiPoly& b, int factor, int p) {
  MultiPoly out = a;
  for (const auto& [mono, coef] : b) {
    int& slot = out[mono];
    slot = ((slot + factor * coef) % p + p) % p;
    if (slot == 0) out.erase(mono);
  }
  return out;
}

MultiPoly poly_mul(const MultiPoly& a, const MultiPoly& b, int p) {
  MultiPoly out;
  for (const auto& [m1, c1] : a)
    for (const auto& [m2, c2] : b) {
      Monomial m;
      std::set_union(m1.begin(), m1.end(), m2.begin(), m2.end(), std::back_inserter(m));
      int& slot = out[m];
      slot = (slot + c1 * c2) % p;
      if (slot == 0) out.erase(m);
    }
  return out;
}

}  // namespace

Term combine_system_V(const SliceSystem& sys, const RepresentLimits& limits) {
  const AlgebraSpec& spec = *sys.spec;
  int k = sys.k;
  int p1 = spec.prime(1);
  const LevelForm& eq1 = *sys.equations[0];

  if (k == 1) {
    // Single linear equation; e_1 1 - r^(p_1 - 1) is only a term when the
    // exponent is 1.
    if (p1 != 2)
      throw std::invalid_argument(
          "level-1 slices with p_1 > 2 admit no exact two-valued combiner: "
          "a term of the algebra is affine on e_1-confined inputs");
    Term r1 = term_of_level_form(sys.equations[0], spec);
    return t_add(t_const(spec.unit(1)), t_neg(r1));
  }

  // Indicator slots: one per level-1 v-term, then one per level j = 2..k.
  std::vector<Term> slots;
  for (const VTermEntry& vt : eq1.vterms)
    slots.push_back(term_of_level_form(vt.inner, spec));
  for (int j = 2; j <= k; ++j) {
    Term rj = term_of_level_form(sys.equations[static_cast<std::size_t>(j - 1)], spec);
    for (int lev = j - 1; lev >= 2; --lev) rj = t_v(lev, rj);
    slots.push_back(rj);
  }

  // rhat = c^1 + sum kappa_s * v_1(z_s), raised to p_1 - 1 with w^2 = w.
  MultiPoly rhat{{Monomial{}, eq1.c % p1}};
  if (eq1.c % p1 == 0) rhat.clear();
  for (std::size_t s = 0; s < eq1.vterms.size(); ++s) {
    int kappa = eq1.vterms[s].kappa % p1;
    if (kappa != 0) rhat[Monomial{static_cast<int>(s)}] = kappa;
  }
  MultiPoly acc{{Monomial{}, 1}};
  for (int i = 0; i < p1 - 1; ++i) acc = poly_mul(acc, rhat, p1);
  // V = (1 - rhat^(p1-1)) * prod_j (1 - v_1(z_j))
  acc = poly_scale_add(MultiPoly{{Monomial{}, 1}}, acc, -1, p1);
  for (int j = 2; j <= k; ++j) {
    int slot = static_cast<int>(eq1.vterms.size()) + (j - 2);
    MultiPoly factor{{Monomial{}, 1}, {Monomial{slot}, p1 - 1}};
    acc = poly_mul(acc, factor, p1);
  }

  // Products of l indicators are the l-ary conjunctions into level 1.
  std::map<int, Term> and_cache;
  auto and_gadget = [&](int l) -> const Term& {
    auto it = and_cache.find(l);
    if (it == and_cache.end())
      it = and_cache.emplace(l, build_and(l, 1, spec, limits)).first;
    return it->second;
  };

  Term total;
  for (const auto& [mono, coef] : acc) {
    Term piece;
    if (mono.empty()) {
      piece = t_const(spec.unit(1).scaled(coef));
    } else if (mono.size() == 1) {
      piece = t_scale(coef, t_v(1, slots[static_cast<std::size_t>(mono[0])]), spec);
    } else {
      std::vector<Term> args;
      for (int slot : mono) args.push_back(slots[static_cast<std::size_t>(slot)]);
      piece = t_scale(coef, subst_terms(and_gadget(static_cast<int>(mono.size())), args), spec);
    }
    total = total ? t_add(total, piece) : piece;
  }
  return total ? total : t_const(spec.zero());
}

Conjunction extract_conjunction(const Term& tstar, const AlgebraSpec& spec,
                                std::span<const DElem> witness, int k) {
  int n = static_cast<int>(witness.size());
  DElem val = evaluate(tstar, spec, witness);
  if (!(val == spec.unit(1)))
    throw std::invalid_argument("the witness does not solve t* = e_1 1");

  Conjunction out;
  std::vector<Term> repl(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    int lambda = witness[static_cast<std::size_t>(i)].coord(k);
    if (lambda == 0) {
      repl[static_cast<std::size_t>(i)] = t_const(witness[static_cast<std::size_t>(i)]);
    } else {
      int fresh = static_cast<int>(out.survivors.size());
      out.survivors.push_back(i);
      repl[static_cast<std::size_t>(i)] = t_scale(lambda, t_var(fresh), spec);
    }
  }
  out.term = subst_terms(tstar, repl);
  out.arity = static_cast<int>(out.survivors.size());
  return out;
}

Conjunction extract_conjunction_affine(const Term& tstar, const AlgebraSpec& spec, int arity,
                                       const RowReduced& hyperplane, std::span<const int> z,
                                       int k) {
  int pk = spec.prime(k);
  if (static_cast<int>(z.size()) != arity) throw std::invalid_argument("point size mismatch");

  Conjunction out;
  out.survivors = hyperplane.free_vars;
  out.arity = static_cast<int>(out.survivors.size());

  // Free variable i: x_i + (z_i - 1) e_k 1, so the all-(e_k 1) row lands on z.
  std::vector<Term> shifted(static_cast<std::size_t>(arity));
  for (std::size_t fi = 0; fi < out.survivors.size(); ++fi) {
    int orig = out.survivors[fi];
    Term t = t_var(static_cast<int>(fi));
    int shift = (z[static_cast<std::size_t>(orig)] - 1 + pk) % pk;
    if (shift != 0) t = t_add(t, t_const(spec.unit(k).scaled(shift)));
    shifted[static_cast<std::size_t>(orig)] = t;
  }
  // Pivot variable j: its hyperplane form over the (already shifted) frees.
  std::vector<Term> repl(static_cast<std::size_t>(arity));
  for (int i = 0; i < arity; ++i) repl[static_cast<std::size_t>(i)] = shifted[static_cast<std::size_t>(i)];
  for (std::size_t r = 0; r < hyperplane.pivots.size(); ++r) {
    int j = hyperplane.pivots[static_cast<std::size_t>(r)];
    const AffineEq& form = hyperplane.pivot_forms[static_cast<std::size_t>(r)];
    Term t = t_const(spec.unit(k).scaled(form.rhs));
    for (int fv : hyperplane.free_vars) {
      int coef = form.coef[static_cast<std::size_t>(fv)];
      if (coef != 0)
        t = t_add(t, t_scale(coef, shifted[static_cast<std::size_t>(fv)], spec));
    }
    repl[static_cast<std::size_t>(j)] = t;
  }
  out.term = subst_terms(tstar, repl);
  return out;
}

}  // namespace nilsat
