#include "nilsat/gf.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>

namespace nilsat {

namespace {

int norm_mod(long long x, int q) {
  int r = static_cast<int>(x % q);
  return r < 0 ? r + q : r;
}

int inv_mod(int a, int q) {
  a = norm_mod(a, q);
  for (int b = 1; b < q; ++b)
    if (a * b % q == 1) return b;
  throw std::invalid_argument("not invertible");
}

}  // namespace

RowReduced row_reduce(const AffineSystem& sys) {
  int q = sys.q;
  int n = sys.n;
  // Augmented matrix, eliminated in place.
  std::vector<std::vector<int>> rows;
  for (const AffineEq& eq : sys.eqs) {
    if (static_cast<int>(eq.coef.size()) != n) throw std::invalid_argument("coefficient size mismatch");
    std::vector<int> r(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i < n; ++i) r[static_cast<std::size_t>(i)] = norm_mod(eq.coef[static_cast<std::size_t>(i)], q);
    r[static_cast<std::size_t>(n)] = norm_mod(eq.rhs, q);
    rows.push_back(std::move(r));
  }

  RowReduced out;
  std::size_t rank = 0;
  for (int col = 0; col < n && rank < rows.size(); ++col) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && rows[pivot][static_cast<std::size_t>(col)] == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    int inv = inv_mod(rows[rank][static_cast<std::size_t>(col)], q);
    for (int i = col; i <= n; ++i)
      rows[rank][static_cast<std::size_t>(i)] = rows[rank][static_cast<std::size_t>(i)] * inv % q;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank) continue;
      int factor = rows[r][static_cast<std::size_t>(col)];
      if (factor == 0) continue;
      for (int i = col; i <= n; ++i)
        rows[r][static_cast<std::size_t>(i)] =
            norm_mod(rows[r][static_cast<std::size_t>(i)] -
                         static_cast<long long>(factor) * rows[rank][static_cast<std::size_t>(i)],
                     q);
    }
    out.pivots.push_back(col);
    ++rank;
  }
  for (std::size_t r = rank; r < rows.size(); ++r)
    if (rows[r][static_cast<std::size_t>(n)] != 0) out.consistent = false;

  std::vector<bool> is_pivot(static_cast<std::size_t>(n), false);
  for (int p : out.pivots) is_pivot[static_cast<std::size_t>(p)] = true;
  for (int i = 0; i < n; ++i)
    if (!is_pivot[static_cast<std::size_t>(i)]) out.free_vars.push_back(i);

  // x_pivot = rhs - sum(coef_free * x_free); store with the minus folded in.
  for (std::size_t r = 0; r < rank; ++r) {
    AffineEq form;
    form.coef.assign(static_cast<std::size_t>(n), 0);
    for (int fv : out.free_vars)
      form.coef[static_cast<std::size_t>(fv)] =
          norm_mod(-rows[r][static_cast<std::size_t>(fv)], q);
    form.rhs = rows[r][static_cast<std::size_t>(n)];
    out.pivot_forms.push_back(std::move(form));
  }
  return out;
}

std::optional<std::vector<int>> gauss_solve(const std::vector<std::vector<int>>& w,
                                            const std::vector<int>& a, int q) {
  if (w.size() != a.size()) throw std::invalid_argument("dimension mismatch");
  AffineSystem sys;
  sys.q = q;
  sys.n = w.empty() ? 0 : static_cast<int>(w[0].size());
  for (std::size_t i = 0; i < w.size(); ++i) sys.eqs.push_back({w[i], a[i]});
  RowReduced red = row_reduce(sys);
  if (!red.consistent) return std::nullopt;
  // Free variables at zero, pivots from their forms.
  std::vector<int> x(static_cast<std::size_t>(sys.n), 0);
  for (std::size_t r = 0; r < red.pivots.size(); ++r)
    x[static_cast<std::size_t>(red.pivots[r])] = red.pivot_forms[r].rhs;
  return x;
}

bool satisfies(const AffineSystem& sys, std::span<const int> x) {
  for (const AffineEq& eq : sys.eqs) {
    long long acc = 0;
    for (int i = 0; i < sys.n; ++i)
      acc += static_cast<long long>(eq.coef[static_cast<std::size_t>(i)]) *
             x[static_cast<std::size_t>(i)];
    if (norm_mod(acc, sys.q) != norm_mod(eq.rhs, sys.q)) return false;
  }
  return true;
}

namespace {

// Greedy independent subset of size `want` via incremental elimination.
std::vector<std::vector<int>> independent_vectors(std::span<const std::vector<int>> z, int q,
                                                  int n, int want) {
  std::vector<std::vector<int>> basis;   // echelonized copies
  std::vector<std::vector<int>> chosen;  // originals
  for (const auto& vec : z) {
    std::vector<int> r = vec;
    for (const auto& b : basis) {
      int lead = 0;
      while (lead < n && b[static_cast<std::size_t>(lead)] == 0) ++lead;
      if (lead < n && r[static_cast<std::size_t>(lead)] != 0) {
        int factor = r[static_cast<std::size_t>(lead)];
        for (int i = 0; i < n; ++i)
          r[static_cast<std::size_t>(i)] = norm_mod(
              r[static_cast<std::size_t>(i)] -
                  static_cast<long long>(factor) * b[static_cast<std::size_t>(i)], q);
      }
    }
    bool zero = std::all_of(r.begin(), r.end(), [](int x) { return x == 0; });
    if (zero) continue;
    int lead = 0;
    while (r[static_cast<std::size_t>(lead)] == 0) ++lead;
    int inv = inv_mod(r[static_cast<std::size_t>(lead)], q);
    for (int i = 0; i < n; ++i) r[static_cast<std::size_t>(i)] = r[static_cast<std::size_t>(i)] * inv % q;
    basis.push_back(std::move(r));
    chosen.push_back(vec);
    if (static_cast<int>(chosen.size()) == want) break;
  }
  return chosen;
}

}  // namespace

IsolateResult isolate_point(std::span<const std::vector<int>> z_set, int q, int n) {
  if (z_set.empty()) throw std::invalid_argument("Z must be nonempty");
  for (const auto& vec : z_set) {
    if (static_cast<int>(vec.size()) != n) throw std::invalid_argument("vector size mismatch");
    for (int x : vec)
      if (x < 0 || x >= q) throw std::invalid_argument("residue out of range");
  }

  std::vector<std::vector<int>> z(z_set.begin(), z_set.end());
  IsolateResult out;
  out.h.q = q;
  out.h.n = n;

  std::uint64_t big_threshold = 1;
  for (int i = 0; i < q - 1; ++i) big_threshold *= static_cast<std::uint64_t>(q);

  auto cut = [&](const std::vector<int>& alpha, int beta) {
    std::vector<std::vector<int>> keep;
    for (auto& vec : z) {
      long long acc = 0;
      for (int i = 0; i < n; ++i)
        acc += static_cast<long long>(alpha[static_cast<std::size_t>(i)]) *
               vec[static_cast<std::size_t>(i)];
      if (norm_mod(acc, q) == beta) keep.push_back(std::move(vec));
    }
    z = std::move(keep);
    out.h.eqs.push_back({alpha, beta});
  };

  while (z.size() > 1) {
    bool big = static_cast<std::uint64_t>(z.size()) > big_threshold;
    std::vector<int> alpha;
    if (big) {
      auto w = independent_vectors(z, q, n, q);
      if (static_cast<int>(w.size()) == q) {
        std::vector<int> a(static_cast<std::size_t>(q));
        for (int i = 0; i < q; ++i) a[static_cast<std::size_t>(i)] = i;
        auto sol = gauss_solve(w, a, q);
        if (sol) alpha = *sol;
      }
      // The lemma guarantees q independent vectors here; if the greedy
      // search cannot realize that we fall through to the small phase.
    }
    if (alpha.empty()) {
      // Small phase: cut on the first coordinate where two vectors differ.
      int coord = -1;
      for (int i = 0; i < n && coord < 0; ++i)
        for (std::size_t t = 1; t < z.size(); ++t)
          if (z[t][static_cast<std::size_t>(i)] != z[0][static_cast<std::size_t>(i)]) {
            coord = i;
            break;
          }
      alpha.assign(static_cast<std::size_t>(n), 0);
      alpha[static_cast<std::size_t>(coord)] = 1;
    }
    // Pick the smallest nonempty class; ties by the smaller field constant.
    std::vector<std::size_t> bucket(static_cast<std::size_t>(q), 0);
    for (const auto& vec : z) {
      long long acc = 0;
      for (int i = 0; i < n; ++i)
        acc += static_cast<long long>(alpha[static_cast<std::size_t>(i)]) *
               vec[static_cast<std::size_t>(i)];
      ++bucket[static_cast<std::size_t>(norm_mod(acc, q))];
    }
    int best = -1;
    for (int b = 0; b < q; ++b) {
      std::size_t count = bucket[static_cast<std::size_t>(b)];
      if (count == 0) continue;
      if (best < 0 || count < bucket[static_cast<std::size_t>(best)]) best = b;
    }
    cut(alpha, best);
  }
  out.z = z[0];
  return out;
}

}  // namespace nilsat
