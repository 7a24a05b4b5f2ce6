#include "nilsat/funcrep.hpp"

#include <stdexcept>
#include <string>

namespace nilsat {

namespace {

std::uint64_t ipow(std::uint64_t base, int exp) {
  std::uint64_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

int inverse_mod(int a, int p) {
  a %= p;
  if (a < 0) a += p;
  for (int b = 1; b < p; ++b)
    if (a * b % p == 1) return b;
  throw std::invalid_argument("no inverse of " + std::to_string(a) + " mod " +
                              std::to_string(p));
}

void decode_point(std::size_t index, int q, int m, std::vector<int>& out) {
  out.resize(static_cast<std::size_t>(m));
  for (int i = m - 1; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = static_cast<int>(index % static_cast<std::size_t>(q));
    index /= static_cast<std::size_t>(q);
  }
}

// Core of the construction: g maps Z_q^m -> Z_p with q = p_{k+1}, p = p_k,
// read as a function (e_{k+1}D)^m -> e_kD.
Term represent_core(const std::vector<int>& table, int m, int k, const AlgebraSpec& spec,
                    const RepresentLimits& limits) {
  int p = spec.prime(k);
  int q = spec.prime(k + 1);
  if (p == q)
    throw std::invalid_argument(
        "levels " + std::to_string(k) + " and " + std::to_string(k + 1) +
        " carry the same prime; the point-indicator construction needs q "
        "invertible mod p");

  if (m == 0) return t_const(spec.unit(k).scaled(table.at(0)));

  std::uint64_t points = ipow(static_cast<std::uint64_t>(q), m);
  if (points > limits.max_core_points)
    throw std::runtime_error("function table needs " + std::to_string(points) +
                             " points, above the ceiling of " +
                             std::to_string(limits.max_core_points));
  if (table.size() != points) throw std::invalid_argument("table size mismatch");

  std::uint64_t nnz = 0;
  for (int val : table)
    if (val % p != 0) ++nnz;
  std::uint64_t n1 = (points - 1) / static_cast<std::uint64_t>(q - 1);
  std::uint64_t estimated =
      nnz * n1 * static_cast<std::uint64_t>(m * (q - 1) + 4) * static_cast<std::uint64_t>(p - 1);
  if (estimated > limits.max_nodes)
    throw std::runtime_error("compiled term would need roughly " +
                             std::to_string(estimated) + " nodes, above the ceiling of " +
                             std::to_string(limits.max_nodes));

  if (nnz == 0) return t_const(spec.zero());

  int inv = inverse_mod(static_cast<int>(ipow(static_cast<std::uint64_t>(q), m - 1) %
                                         static_cast<std::uint64_t>(p)),
                        p);
  int n2 = static_cast<int>(((ipow(static_cast<std::uint64_t>(q), m - 1) - 1) /
                             static_cast<std::uint64_t>(q - 1)) %
                            static_cast<std::uint64_t>(p));

  // Directions: all alpha in Z_q^m with the first nonzero entry equal to 1,
  // in lex order.  Their linear parts are shared across all points.
  std::vector<std::vector<int>> directions;
  std::vector<Term> linear;
  std::vector<int> alpha;
  for (std::size_t idx = 1; idx < points; ++idx) {
    decode_point(idx, q, m, alpha);
    int lead = 0;
    while (alpha[static_cast<std::size_t>(lead)] == 0) ++lead;
    if (alpha[static_cast<std::size_t>(lead)] != 1) continue;
    Term lin;
    for (int i = 0; i < m; ++i) {
      int a = alpha[static_cast<std::size_t>(i)];
      if (a == 0) continue;
      Term part = t_scale(a, t_var(i), spec);
      lin = lin ? t_add(lin, part) : part;
    }
    directions.push_back(alpha);
    linear.push_back(lin);
  }

  // [x in H] for H = {x : alpha.x = beta}, memoized per (direction, beta).
  const Term unit_k = t_const(spec.unit(k));
  std::vector<std::vector<Term>> hyperplane(directions.size(),
                                            std::vector<Term>(static_cast<std::size_t>(q)));
  auto in_hyperplane = [&](std::size_t dir, int beta) -> const Term& {
    Term& slot = hyperplane[dir][static_cast<std::size_t>(beta)];
    if (!slot) {
      Term affine = linear[dir];
      if (beta != 0) affine = t_add(affine, t_const(spec.unit(k + 1).scaled(q - beta)));
      slot = t_add(unit_k, t_neg(t_v(k, affine)));
    }
    return slot;
  };

  Term total;
  std::vector<int> point;
  for (std::size_t idx = 0; idx < points; ++idx) {
    int val = table[idx] % p;
    if (val == 0) continue;
    decode_point(idx, q, m, point);
    Term chi;
    for (std::size_t dir = 0; dir < directions.size(); ++dir) {
      int beta = 0;
      for (int i = 0; i < m; ++i)
        beta = (beta + directions[dir][static_cast<std::size_t>(i)] *
                           point[static_cast<std::size_t>(i)]) % q;
      const Term& ht = in_hyperplane(dir, beta);
      chi = chi ? t_add(chi, ht) : ht;
    }
    if (n2 != 0) chi = t_add(chi, t_const(spec.unit(k).scaled(p - n2)));
    Term contrib = t_scale(val * inv % p, chi, spec);
    total = total ? t_add(total, contrib) : contrib;
  }
  return total ? total : t_const(spec.zero());
}

}  // namespace

std::size_t LevelFunction::domain_size(const AlgebraSpec& spec) const {
  return static_cast<std::size_t>(ipow(static_cast<std::uint64_t>(spec.prime(src_level)), arity));
}

std::size_t LevelFunction::index_of(const AlgebraSpec& spec, std::span<const int> pt) const {
  int q = spec.prime(src_level);
  std::size_t idx = 0;
  for (int x : pt) idx = idx * static_cast<std::size_t>(q) + static_cast<std::size_t>(x);
  return idx;
}

Term represent(const LevelFunction& g, const AlgebraSpec& spec, const RepresentLimits& limits) {
  int k = g.dst_level;
  int l = g.src_level;
  int h = spec.height();
  if (k < 1 || l > h || k >= l) throw std::invalid_argument("bad level pair");
  if (g.arity < 0) throw std::invalid_argument("negative arity");
  if (g.arity > limits.max_arity)
    throw std::runtime_error("function arity " + std::to_string(g.arity) +
                             " is above the ceiling of " + std::to_string(limits.max_arity));
  if (g.table.size() != g.domain_size(spec)) throw std::invalid_argument("table size mismatch");
  int p = spec.prime(k);
  for (int val : g.table)
    if (val < 0 || val >= p) throw std::invalid_argument("table value out of range");

  if (l == k + 1) return represent_core(g.table, g.arity, k, spec, limits);

  // Inflate each source-level variable into p_l one-hot indicators over
  // level k+1 and compile the inflated function through the core.
  int pl = spec.prime(l);
  int q = spec.prime(k + 1);
  int inflated = pl * g.arity;
  std::uint64_t core_points = ipow(static_cast<std::uint64_t>(q), inflated);
  if (core_points > limits.max_core_points)
    throw std::runtime_error("inflated table needs " + std::to_string(core_points) +
                             " points, above the ceiling of " +
                             std::to_string(limits.max_core_points));

  std::vector<int> core_table(core_points, 0);
  std::vector<int> pattern;
  std::vector<int> decoded(static_cast<std::size_t>(g.arity));
  for (std::size_t idx = 0; idx < core_points; ++idx) {
    decode_point(idx, q, inflated, pattern);
    bool valid = true;
    for (int i = 0; i < g.arity && valid; ++i) {
      int ones = 0, pos = -1;
      for (int lam = 0; lam < pl; ++lam) {
        int entry = pattern[static_cast<std::size_t>(i * pl + lam)];
        if (entry == 1) {
          ++ones;
          pos = lam;
        } else if (entry != 0) {
          valid = false;
        }
      }
      if (ones != 1) valid = false;
      if (valid) decoded[static_cast<std::size_t>(i)] = pos;
    }
    if (valid) {
      std::size_t src = 0;
      for (int i = 0; i < g.arity; ++i)
        src = src * static_cast<std::size_t>(pl) +
              static_cast<std::size_t>(decoded[static_cast<std::size_t>(i)]);
      core_table[idx] = g.table[src];
    }
  }

  Term core = represent_core(core_table, inflated, k, spec, limits);

  std::vector<Term> repl(static_cast<std::size_t>(inflated));
  const Term unit_k1 = t_const(spec.unit(k + 1));
  for (int i = 0; i < g.arity; ++i) {
    for (int lam = 0; lam < pl; ++lam) {
      Term u = t_var(i);
      if (lam != 0) u = t_add(u, t_const(spec.unit(l).scaled(pl - lam)));
      for (int lev = l - 1; lev >= k + 1; --lev) u = t_v(lev, u);
      repl[static_cast<std::size_t>(i * pl + lam)] = t_add(unit_k1, t_neg(u));
    }
  }
  return subst_terms(core, repl);
}

Term build_and(int s, int k, const AlgebraSpec& spec, const RepresentLimits& limits) {
  if (s < 1) throw std::invalid_argument("conjunction arity must be positive");
  if (k < 1 || k > spec.height() - 1) throw std::out_of_range("level out of range");
  int q = spec.prime(k + 1);
  LevelFunction g{k + 1, k, s, {}};
  std::size_t points = g.domain_size(spec);
  g.table.assign(points, 0);
  std::vector<int> pt;
  for (std::size_t idx = 0; idx < points; ++idx) {
    decode_point(idx, q, s, pt);
    bool all = true;
    for (int x : pt)
      if (x == 0) all = false;
    g.table[idx] = all ? 1 : 0;
  }
  return represent(g, spec, limits);
}

Term build_and_tower(int s, const AlgebraSpec& spec, const RepresentLimits& limits) {
  int h = spec.height();
  if (h < 2) throw std::invalid_argument("conjunction tower needs height >= 2");
  if (!spec.alternating()) throw std::invalid_argument("conjunction tower needs alternating primes");
  if (s < 1) throw std::invalid_argument("part count must be positive");

  // build(k) has arity s^{h-1-k} and maps level-(h-1) inputs into e_kD.
  std::vector<Term> towers(static_cast<std::size_t>(h));
  std::uint64_t block = 1;
  towers[static_cast<std::size_t>(h - 1)] = t_var(0);
  for (int k = h - 2; k >= 1; --k) {
    Term andk = build_and(s, k, spec, limits);
    std::vector<Term> parts(static_cast<std::size_t>(s));
    for (int i = 0; i < s; ++i) {
      std::vector<int> map(static_cast<std::size_t>(block));
      for (std::size_t j = 0; j < map.size(); ++j)
        map[j] = static_cast<int>(static_cast<std::uint64_t>(i) * block + j);
      parts[static_cast<std::size_t>(i)] =
          subst_vars(towers[static_cast<std::size_t>(k + 1)], map);
    }
    towers[static_cast<std::size_t>(k)] = subst_terms(andk, parts);
    block *= static_cast<std::uint64_t>(s);
  }
  return towers[1];
}

Term build_cnf_gadget(const CnfFormula& part, const AlgebraSpec& spec,
                      const RepresentLimits& limits) {
  int h = spec.height();
  if (h < 2) throw std::invalid_argument("CNF gadget needs height >= 2");
  int n = part.num_vars;
  int q = spec.prime(h);
  LevelFunction g{h, h - 1, n, {}};
  std::size_t points = g.domain_size(spec);
  g.table.assign(points, 0);
  std::vector<int> pt;
  std::vector<bool> bools(static_cast<std::size_t>(n));
  for (std::size_t idx = 0; idx < points; ++idx) {
    decode_point(idx, q, n, pt);
    for (int i = 0; i < n; ++i) bools[static_cast<std::size_t>(i)] = pt[static_cast<std::size_t>(i)] != 0;
    g.table[idx] = eval_cnf(part, bools) ? 1 : 0;
  }
  Term raw = represent(g, spec, limits);
  std::vector<Term> wrapped(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) wrapped[static_cast<std::size_t>(i)] = t_e(h, t_var(i));
  return subst_terms(raw, wrapped);
}

}  // namespace nilsat
