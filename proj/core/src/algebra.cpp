#include "nilsat/algebra.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace nilsat {

bool AlgebraSpec::is_prime(int n) {
  if (n < 2) return false;
  for (int d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

AlgebraSpec::AlgebraSpec(std::span<const int> primes) {
  if (primes.empty()) throw std::invalid_argument("algebra needs at least one prime");
  if (primes.size() > kMaxHeight)
    throw std::invalid_argument("algebra height exceeds " + std::to_string(kMaxHeight));
  h_ = static_cast<int>(primes.size());
  for (int i = 0; i < h_; ++i) {
    int p = primes[i];
    if (!is_prime(p)) throw std::invalid_argument(std::to_string(p) + " is not prime");
    if (p > 251) throw std::invalid_argument("primes above 251 are not supported");
    primes_[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(p);
    carrier_ *= static_cast<std::size_t>(p);
    if (i > 0 && primes[i] == primes[i - 1]) alternating_ = false;
  }
}

AlgebraSpec::AlgebraSpec(std::initializer_list<int> primes)
    : AlgebraSpec(std::span<const int>(primes.begin(), primes.size())) {}

int AlgebraSpec::prime(int level) const {
  if (level < 1 || level > h_) throw std::out_of_range("level out of range");
  return primes_[static_cast<std::size_t>(level - 1)];
}

DElem AlgebraSpec::zero() const {
  DElem r;
  r.spec_ = this;
  return r;
}

DElem AlgebraSpec::one() const {
  DElem r;
  r.spec_ = this;
  for (int j = 0; j < h_; ++j) r.c_[static_cast<std::size_t>(j)] = 1;
  return r;
}

DElem AlgebraSpec::unit(int level) const {
  if (level < 1 || level > h_) throw std::out_of_range("level out of range");
  DElem r;
  r.spec_ = this;
  r.c_[static_cast<std::size_t>(level - 1)] = 1;
  return r;
}

DElem AlgebraSpec::make(std::initializer_list<int> coords) const {
  if (static_cast<int>(coords.size()) != h_)
    throw std::invalid_argument("coordinate count does not match algebra height");
  DElem r;
  r.spec_ = this;
  int j = 0;
  for (int x : coords) {
    int p = prime(j + 1);
    if (x < 0 || x >= p) throw std::invalid_argument("coordinate out of range");
    r.c_[static_cast<std::size_t>(j++)] = static_cast<std::uint8_t>(x);
  }
  return r;
}

DElem AlgebraSpec::element(std::size_t index) const {
  if (index >= carrier_) throw std::out_of_range("element index out of range");
  DElem r;
  r.spec_ = this;
  for (int j = h_ - 1; j >= 0; --j) {
    std::size_t p = primes_[static_cast<std::size_t>(j)];
    r.c_[static_cast<std::size_t>(j)] = static_cast<std::uint8_t>(index % p);
    index /= p;
  }
  return r;
}

std::size_t AlgebraSpec::index_of(const DElem& a) const {
  if (!(a.spec() == *this)) throw std::invalid_argument("element from a different algebra");
  std::size_t idx = 0;
  for (int j = 0; j < h_; ++j)
    idx = idx * primes_[static_cast<std::size_t>(j)] + a.coord(j + 1);
  return idx;
}

DElem AlgebraSpec::parse_literal(std::string_view text) const {
  DElem r;
  r.spec_ = this;
  int level = 1;
  std::size_t pos = 0;
  while (true) {
    std::size_t colon = text.find(':', pos);
    std::string_view part = text.substr(pos, colon == std::string_view::npos
                                                 ? std::string_view::npos
                                                 : colon - pos);
    if (level > h_) throw std::invalid_argument("too many coordinates in element literal");
    int value = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
    if (ec != std::errc() || ptr != part.data() + part.size())
      throw std::invalid_argument("bad residue in element literal");
    if (value < 0 || value >= prime(level))
      throw std::invalid_argument("residue out of range in element literal");
    r.c_[static_cast<std::size_t>(level - 1)] = static_cast<std::uint8_t>(value);
    ++level;
    if (colon == std::string_view::npos) break;
    pos = colon + 1;
  }
  if (level != h_ + 1) throw std::invalid_argument("too few coordinates in element literal");
  return r;
}

namespace {

const AlgebraSpec& require_same(const DElem& a, const DElem& b) {
  const AlgebraSpec& sa = a.spec();
  const AlgebraSpec& sb = b.spec();
  if (&sa != &sb && !(sa == sb))
    throw std::invalid_argument("mismatched algebra specs");
  return sa;
}

}  // namespace

const AlgebraSpec& DElem::spec() const {
  if (!spec_) throw std::logic_error("unbound element");
  return *spec_;
}

int DElem::coord(int level) const {
  if (level < 1 || level > spec().height()) throw std::out_of_range("level out of range");
  return c_[static_cast<std::size_t>(level - 1)];
}

DElem DElem::with_coord(int level, int value) const {
  int p = spec().prime(level);
  if (value < 0 || value >= p) throw std::invalid_argument("coordinate out of range");
  DElem r = *this;
  r.c_[static_cast<std::size_t>(level - 1)] = static_cast<std::uint8_t>(value);
  return r;
}

bool DElem::is_zero() const {
  for (int j = 0; j < spec().height(); ++j)
    if (c_[static_cast<std::size_t>(j)] != 0) return false;
  return true;
}

DElem DElem::operator+(const DElem& o) const {
  const AlgebraSpec& s = require_same(*this, o);
  DElem r = *this;
  for (int j = 0; j < s.height(); ++j) {
    int sum = r.c_[static_cast<std::size_t>(j)] + o.c_[static_cast<std::size_t>(j)];
    int p = s.prime(j + 1);
    if (sum >= p) sum -= p;
    r.c_[static_cast<std::size_t>(j)] = static_cast<std::uint8_t>(sum);
  }
  return r;
}

DElem DElem::operator-() const {
  const AlgebraSpec& s = spec();
  DElem r = *this;
  for (int j = 0; j < s.height(); ++j) {
    int x = r.c_[static_cast<std::size_t>(j)];
    r.c_[static_cast<std::size_t>(j)] =
        static_cast<std::uint8_t>(x == 0 ? 0 : s.prime(j + 1) - x);
  }
  return r;
}

DElem DElem::operator-(const DElem& o) const { return *this + (-o); }

DElem DElem::scaled(int lambda) const {
  const AlgebraSpec& s = spec();
  DElem r = *this;
  for (int j = 0; j < s.height(); ++j) {
    int p = s.prime(j + 1);
    int l = lambda % p;
    if (l < 0) l += p;
    r.c_[static_cast<std::size_t>(j)] =
        static_cast<std::uint8_t>((l * r.c_[static_cast<std::size_t>(j)]) % p);
  }
  return r;
}

std::string DElem::to_literal() const {
  std::string out;
  for (int j = 1; j <= spec().height(); ++j) {
    if (j > 1) out += ':';
    out += std::to_string(coord(j));
  }
  return out;
}

bool operator==(const DElem& a, const DElem& b) {
  if (!a.bound() || !b.bound()) return a.bound() == b.bound();
  if (!(a.spec() == b.spec())) return false;
  for (int j = 0; j < a.spec().height(); ++j)
    if (a.c_[static_cast<std::size_t>(j)] != b.c_[static_cast<std::size_t>(j)]) return false;
  return true;
}

DElem e(int j, const DElem& a) {
  const AlgebraSpec& s = a.spec();
  if (j < 1 || j > s.height()) throw std::out_of_range("level out of range");
  DElem r;
  r.spec_ = &s;
  r.c_[static_cast<std::size_t>(j - 1)] = a.c_[static_cast<std::size_t>(j - 1)];
  return r;
}

DElem e_upper(int k, const DElem& a) {
  const AlgebraSpec& s = a.spec();
  if (k < 1 || k > s.height() + 1) throw std::out_of_range("level out of range");
  DElem r;
  r.spec_ = &s;
  for (int j = k; j <= s.height(); ++j)
    r.c_[static_cast<std::size_t>(j - 1)] = a.c_[static_cast<std::size_t>(j - 1)];
  return r;
}

DElem v(int j, const DElem& a) {
  const AlgebraSpec& s = a.spec();
  if (j < 1 || j > s.height() - 1) throw std::out_of_range("level out of range");
  DElem r;
  r.spec_ = &s;
  r.c_[static_cast<std::size_t>(j - 1)] = a.c_[static_cast<std::size_t>(j)] != 0 ? 1 : 0;
  return r;
}

bool theta_related(const AlgebraSpec& spec, int k, const DElem& a, const DElem& b) {
  if (k < 1 || k > spec.height() + 1) throw std::out_of_range("level out of range");
  for (int j = k; j <= spec.height(); ++j)
    if (a.coord(j) != b.coord(j)) return false;
  return true;
}

namespace {

Partition normalize_partition(std::vector<int> raw) {
  std::vector<int> remap(raw.size(), -1);
  int next = 0;
  for (int& cls : raw) {
    if (remap[static_cast<std::size_t>(cls)] < 0) remap[static_cast<std::size_t>(cls)] = next++;
    cls = remap[static_cast<std::size_t>(cls)];
  }
  return raw;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
  bool merge(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a > b) std::swap(a, b);
    parent[static_cast<std::size_t>(b)] = a;
    return true;
  }
};

// Tables for every unary translation of the algebra: x -> x + c for each
// constant c, negation, the e_j's and the v_j's.  Closing a pair set under
// these is enough to generate a congruence (Mal'cev).
std::vector<std::vector<int>> translation_tables(const AlgebraSpec& spec) {
  std::size_t n = spec.carrier_size();
  std::vector<DElem> elems;
  elems.reserve(n);
  for (std::size_t i = 0; i < n; ++i) elems.push_back(spec.element(i));

  std::vector<std::vector<int>> tables;
  auto add_table = [&](auto&& f) {
    std::vector<int> t(n);
    for (std::size_t i = 0; i < n; ++i)
      t[i] = static_cast<int>(spec.index_of(f(elems[i])));
    tables.push_back(std::move(t));
  };

  for (std::size_t ci = 0; ci < n; ++ci) {
    DElem c = elems[ci];
    add_table([&](const DElem& x) { return x + c; });
  }
  add_table([](const DElem& x) { return -x; });
  for (int j = 1; j <= spec.height(); ++j)
    add_table([&](const DElem& x) { return e(j, x); });
  for (int j = 1; j + 1 <= spec.height(); ++j)
    add_table([&](const DElem& x) { return v(j, x); });
  return tables;
}

Partition close_pairs(const AlgebraSpec& spec,
                      const std::vector<std::vector<int>>& tables,
                      std::span<const std::pair<int, int>> seeds) {
  std::size_t n = spec.carrier_size();
  UnionFind uf(n);
  std::queue<std::pair<int, int>> work;
  for (auto [a, b] : seeds)
    if (uf.merge(a, b)) work.emplace(a, b);
  while (!work.empty()) {
    auto [a, b] = work.front();
    work.pop();
    for (const auto& t : tables) {
      int fa = t[static_cast<std::size_t>(a)];
      int fb = t[static_cast<std::size_t>(b)];
      if (uf.merge(fa, fb)) work.emplace(fa, fb);
    }
  }
  std::vector<int> raw(n);
  for (std::size_t i = 0; i < n; ++i) raw[i] = uf.find(static_cast<int>(i));
  return normalize_partition(std::move(raw));
}

int class_count(const Partition& p) {
  int m = 0;
  for (int c : p) m = std::max(m, c + 1);
  return m;
}

}  // namespace

Partition theta_partition(const AlgebraSpec& spec, int k) {
  if (k < 1 || k > spec.height() + 1) throw std::out_of_range("level out of range");
  std::size_t n = spec.carrier_size();
  std::vector<int> raw(n);
  for (std::size_t i = 0; i < n; ++i) {
    DElem a = spec.element(i);
    raw[i] = static_cast<int>(spec.index_of(e_upper(k, a)));
  }
  return normalize_partition(std::move(raw));
}

std::vector<Partition> enumerate_congruences(const AlgebraSpec& spec,
                                             std::size_t max_carrier) {
  std::size_t n = spec.carrier_size();
  if (n > max_carrier)
    throw std::invalid_argument("carrier size " + std::to_string(n) +
                                " exceeds the congruence-enumeration ceiling of " +
                                std::to_string(max_carrier));
  auto tables = translation_tables(spec);

  std::vector<Partition> found;
  auto insert = [&](Partition p) {
    if (std::find(found.begin(), found.end(), p) == found.end()) {
      found.push_back(std::move(p));
      return true;
    }
    return false;
  };

  // Equality, then every principal congruence.
  {
    std::vector<int> eq(n);
    std::iota(eq.begin(), eq.end(), 0);
    insert(eq);
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      std::pair<int, int> seed{static_cast<int>(a), static_cast<int>(b)};
      insert(close_pairs(spec, tables, std::span(&seed, 1)));
    }

  // Close under joins.  The transitive closure of a union of congruences is
  // again a congruence, so merging the generating pairs of two partitions
  // and re-closing yields the join.
  bool grew = true;
  while (grew) {
    grew = false;
    std::size_t count = found.size();
    for (std::size_t i = 0; i < count; ++i)
      for (std::size_t j = i + 1; j < count; ++j) {
        std::vector<std::pair<int, int>> seeds;
        for (const Partition* part : {&found[i], &found[j]}) {
          std::vector<int> rep(n, -1);
          for (std::size_t x = 0; x < n; ++x) {
            int cls = (*part)[x];
            if (rep[static_cast<std::size_t>(cls)] < 0)
              rep[static_cast<std::size_t>(cls)] = static_cast<int>(x);
            else
              seeds.emplace_back(rep[static_cast<std::size_t>(cls)], static_cast<int>(x));
          }
        }
        if (insert(close_pairs(spec, tables, seeds))) grew = true;
      }
  }

  std::sort(found.begin(), found.end(), [](const Partition& a, const Partition& b) {
    int ca = class_count(a), cb = class_count(b);
    if (ca != cb) return ca > cb;
    return a < b;
  });
  return found;
}

}  // namespace nilsat
