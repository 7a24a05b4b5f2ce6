#pragma once

// Exact arithmetic for the expanded product group Z_{p1} x ... x Z_{ph}:
// the abelian group operations together with the level projections e_j and
// the level tests v_j.  Everything here is a small immutable value; all
// operations are pure and safe to share across threads.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nilsat {

inline constexpr int kMaxHeight = 8;

class DElem;

// A validated list of prime moduli p_1,...,p_h (h >= 1).  "Alternating"
// means p_i != p_{i+1} for all i; the gadget compiler and the SAT reduction
// require an alternating spec of height >= 2.
class AlgebraSpec {
 public:
  explicit AlgebraSpec(std::span<const int> primes);
  AlgebraSpec(std::initializer_list<int> primes);

  static bool is_prime(int n);

  int height() const { return h_; }
  int prime(int level) const;  // 1-based
  bool alternating() const { return alternating_; }
  std::size_t carrier_size() const { return carrier_; }

  DElem zero() const;
  DElem one() const;
  // e_level(1): the element with 1 at `level` and 0 elsewhere.
  DElem unit(int level) const;
  DElem make(std::initializer_list<int> coords) const;

  // Enumeration order: coordinate 1 is most significant, matching the
  // reading order of the textual literal "a1:a2:...:ah".
  DElem element(std::size_t index) const;
  std::size_t index_of(const DElem& a) const;

  // Parses "a1:a2:...:ah" (decimal residues). Throws std::invalid_argument.
  DElem parse_literal(std::string_view text) const;

  friend bool operator==(const AlgebraSpec& a, const AlgebraSpec& b) {
    return a.h_ == b.h_ && a.primes_ == b.primes_;
  }

 private:
  std::array<std::uint8_t, kMaxHeight> primes_{};
  int h_ = 0;
  std::size_t carrier_ = 1;
  bool alternating_ = true;
};

// One element of the carrier.  Carries a pointer to its spec so that mixing
// elements of different algebras is caught at run time.
class DElem {
 public:
  DElem() = default;  // unbound; only valid as a placeholder

  bool bound() const { return spec_ != nullptr; }
  const AlgebraSpec& spec() const;

  int coord(int level) const;  // 1-based
  DElem with_coord(int level, int value) const;

  bool is_zero() const;

  DElem operator+(const DElem& o) const;
  DElem operator-() const;
  DElem operator-(const DElem& o) const;

  // Componentwise lambda * x mod p_j.  Equals x added to itself lambda
  // times; the collapsed form is kept because the scalars stay tiny.
  DElem scaled(int lambda) const;

  std::string to_literal() const;

  friend bool operator==(const DElem& a, const DElem& b);

 private:
  friend class AlgebraSpec;
  friend DElem e(int j, const DElem& a);
  friend DElem e_upper(int k, const DElem& a);
  friend DElem v(int j, const DElem& a);

  const AlgebraSpec* spec_ = nullptr;
  std::array<std::uint8_t, kMaxHeight> c_{};
};

// The basic unary operations of the algebra.
DElem e(int j, const DElem& a);        // keep coordinate j, zero the rest
DElem e_upper(int k, const DElem& a);  // zero all coordinates below k; k in [1, h+1]
DElem v(int j, const DElem& a);        // b_j(x_{j+1}) placed at coordinate j; j in [1, h-1]

// ---------------------------------------------------------------------------
// Congruences.
//
// theta_k relates two elements iff they agree on coordinates k..h, so
// theta_1 is equality and theta_{h+1} is the total relation.  These form a
// chain and are in fact all congruences of the algebra; enumerate_congruences
// verifies that claim by brute force at small carrier sizes.
//
// A Partition assigns a class id to every carrier index, ids numbered by
// first occurrence.
// ---------------------------------------------------------------------------

using Partition = std::vector<int>;

bool theta_related(const AlgebraSpec& spec, int k, const DElem& a, const DElem& b);
Partition theta_partition(const AlgebraSpec& spec, int k);  // k in [1, h+1]

// All congruence partitions, sorted by class count descending (so the
// theta-chain order when the result is the chain).  Refuses carriers larger
// than `max_carrier`: pair closure is exhaustive and must stay desk-scale.
std::vector<Partition> enumerate_congruences(const AlgebraSpec& spec,
                                             std::size_t max_carrier = 64);

}  // namespace nilsat
