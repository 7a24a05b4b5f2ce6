#include <doctest.h>

#include "nilsat/algebra.hpp"
#include "testutil.hpp"

using namespace nilsat;

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(AlgebraSpec({4}), std::invalid_argument);
  CHECK_THROWS_AS(AlgebraSpec({2, 1}), std::invalid_argument);
  CHECK_THROWS_AS(AlgebraSpec(std::span<const int>{}), std::invalid_argument);
  AlgebraSpec d23({2, 3});
  CHECK(d23.height() == 2);
  CHECK(d23.carrier_size() == 6);
  CHECK(d23.alternating());
  CHECK_FALSE(AlgebraSpec({2, 2}).alternating());
  CHECK(AlgebraSpec({2, 3, 2}).alternating());
}

TEST_CASE("group operations componentwise") {
  AlgebraSpec d23({2, 3});
  CHECK(d23.make({1, 2}) + d23.make({1, 2}) == d23.make({0, 1}));
  CHECK(d23.make({0, 0}) + d23.make({1, 2}) == d23.make({1, 2}));
  CHECK(-d23.make({1, 2}) == d23.make({1, 1}));
  CHECK(d23.make({1, 2}) - d23.make({1, 2}) == d23.zero());

  AlgebraSpec other({3, 2});
  CHECK_THROWS_AS(d23.make({1, 2}) + other.make({1, 1}), std::invalid_argument);
}

TEST_CASE("projections and level tests") {
  AlgebraSpec d23({2, 3});
  CHECK(e(1, d23.make({1, 2})) == d23.make({1, 0}));
  CHECK(e_upper(2, d23.make({1, 2})) == d23.make({0, 2}));
  CHECK_THROWS_AS(e(3, d23.make({1, 2})), std::out_of_range);

  AlgebraSpec d232({2, 3, 2});
  CHECK(e_upper(2, d232.make({1, 2, 1})) == d232.make({0, 2, 1}));
  CHECK(e_upper(4, d232.make({1, 2, 1})) == d232.zero());

  // b_j(0) = 0 and b_j(a) = 1 otherwise.
  CHECK(v(1, d23.make({0, 0})) == d23.zero());
  CHECK(v(1, d23.make({1, 2})) == d23.make({1, 0}));
  CHECK(v(2, d232.make({0, 0, 1})) == d232.make({0, 1, 0}));
  CHECK_THROWS_AS(v(2, d23.make({0, 0})), std::out_of_range);
}

TEST_CASE("scaling collapses repeated addition") {
  AlgebraSpec d23({2, 3});
  for (std::size_t i = 0; i < d23.carrier_size(); ++i) {
    DElem a = d23.element(i);
    DElem sum = d23.zero();
    for (int lambda = 0; lambda <= 6; ++lambda) {
      CHECK(a.scaled(lambda) == sum);
      sum = sum + a;
    }
  }
}

TEST_CASE("element literals round-trip") {
  AlgebraSpec d232({2, 3, 2});
  for (std::size_t i = 0; i < d232.carrier_size(); ++i) {
    DElem a = d232.element(i);
    CHECK(d232.parse_literal(a.to_literal()) == a);
    CHECK(d232.index_of(a) == i);
  }
  CHECK(d232.parse_literal("1:2:0") == d232.make({1, 2, 0}));
  CHECK_THROWS_AS(d232.parse_literal("1:3:0"), std::invalid_argument);
  CHECK_THROWS_AS(d232.parse_literal("1:2"), std::invalid_argument);
  CHECK_THROWS_AS(d232.parse_literal("1:2:0:1"), std::invalid_argument);
  CHECK_THROWS_AS(d232.parse_literal("a:b:c"), std::invalid_argument);
}

TEST_CASE("projection identities") {
  for (auto primes : {std::vector<int>{2, 3}, std::vector<int>{2, 3, 2}}) {
    AlgebraSpec spec(primes);
    int h = spec.height();
    for (std::size_t ia = 0; ia < spec.carrier_size(); ++ia)
      for (std::size_t ib = 0; ib < spec.carrier_size(); ++ib) {
        DElem a = spec.element(ia);
        DElem b = spec.element(ib);
        for (int k = 1; k <= h; ++k) {
          CHECK(e(k, a + b) == e(k, a) + e(k, b));
          CHECK(e(k, e(k, a)) == e(k, a));
          for (int l = 1; l <= h; ++l)
            if (k != l) CHECK(e(k, e(l, a)) == spec.zero());
          if (k <= h - 1) {
            CHECK(e(k, v(k, a)) == v(k, a));
            CHECK(v(k, a) == v(k, e(k + 1, a)));
            for (int l = 1; l <= h - 1; ++l)
              if (k != l) CHECK(e(k, v(l, a)) == spec.zero());
          }
        }
        // a decomposes as the sum of its projections.
        DElem sum = spec.zero();
        for (int j = 1; j <= h; ++j) sum = sum + e(j, a);
        CHECK(sum == a);
      }
  }
}

TEST_CASE("theta chain") {
  AlgebraSpec d232({2, 3, 2});
  CHECK(theta_partition(d232, 1).size() == 12);
  // theta_1 is equality, theta_{h+1} total.
  Partition eq = theta_partition(d232, 1);
  for (std::size_t i = 0; i < eq.size(); ++i) CHECK(eq[i] == static_cast<int>(i));
  Partition total = theta_partition(d232, 4);
  for (int cls : total) CHECK(cls == 0);
  // Strict chain.
  for (int k = 1; k <= 3; ++k) CHECK(theta_partition(d232, k) != theta_partition(d232, k + 1));

  // theta_k is preserved by every basic operation.
  for (int k = 1; k <= d232.height() + 1; ++k) {
    for (std::size_t ia = 0; ia < d232.carrier_size(); ++ia)
      for (std::size_t ib = 0; ib < d232.carrier_size(); ++ib) {
        DElem a = d232.element(ia), b = d232.element(ib);
        if (!theta_related(d232, k, a, b)) continue;
        CHECK(theta_related(d232, k, -a, -b));
        for (int j = 1; j <= d232.height(); ++j)
          CHECK(theta_related(d232, k, e(j, a), e(j, b)));
        for (int j = 1; j <= d232.height() - 1; ++j)
          CHECK(theta_related(d232, k, v(j, a), v(j, b)));
        for (std::size_t ic = 0; ic < d232.carrier_size(); ++ic) {
          DElem c = d232.element(ic);
          CHECK(theta_related(d232, k, a + c, b + c));
        }
      }
  }
}

TEST_CASE("congruence enumeration matches the chain") {
  SUBCASE("D[2,3]") {
    AlgebraSpec spec({2, 3});
    auto congruences = enumerate_congruences(spec);
    REQUIRE(congruences.size() == 3);
    for (int k = 1; k <= 3; ++k)
      CHECK(congruences[static_cast<std::size_t>(k - 1)] == theta_partition(spec, k));
  }
  SUBCASE("D[2] has only the two trivial congruences") {
    AlgebraSpec spec({2});
    CHECK(enumerate_congruences(spec).size() == 2);
  }
  SUBCASE("D[2,3,2]") {
    AlgebraSpec spec({2, 3, 2});
    auto congruences = enumerate_congruences(spec);
    REQUIRE(congruences.size() == 4);
    for (int k = 1; k <= 4; ++k)
      CHECK(congruences[static_cast<std::size_t>(k - 1)] == theta_partition(spec, k));
  }
  SUBCASE("ceiling is enforced") {
    AlgebraSpec spec({2, 3, 2, 3});  // carrier 36 is fine; 64 is the ceiling
    CHECK_NOTHROW(enumerate_congruences(spec));
    AlgebraSpec big({3, 5, 5});  // carrier 75
    CHECK_THROWS_AS(enumerate_congruences(big), std::invalid_argument);
  }
}
