#include <doctest.h>

#include <cmath>
#include <set>
#include <stdexcept>

#include "nilsat/gf.hpp"
#include "nilsat/rng.hpp"

using namespace nilsat;

TEST_CASE("gauss_solve") {
  SUBCASE("identity system over GF(3)") {
    auto x = gauss_solve({{1, 0}, {0, 1}}, {2, 1}, 3);
    REQUIRE(x.has_value());
    CHECK(*x == std::vector<int>{2, 1});
  }
  SUBCASE("single equation x0 + x1 = 1 over GF(2)") {
    AffineSystem sys{2, 2, {{{1, 1}, 1}}};
    RowReduced red = row_reduce(sys);
    CHECK(red.consistent);
    CHECK(red.pivots == std::vector<int>{0});
    CHECK(red.free_vars == std::vector<int>{1});
  }
  SUBCASE("inconsistent system") {
    CHECK_FALSE(gauss_solve({{1, 0}, {1, 0}}, {0, 1}, 2).has_value());
  }
  SUBCASE("solutions satisfy the system") {
    SplitMix64 rng(31);
    for (int q : {2, 3, 5}) {
      for (int round = 0; round < 50; ++round) {
        int n = 1 + rng.below_int(6);
        int rows = 1 + rng.below_int(n);
        std::vector<std::vector<int>> w(static_cast<std::size_t>(rows),
                                        std::vector<int>(static_cast<std::size_t>(n)));
        std::vector<int> a(static_cast<std::size_t>(rows));
        for (auto& row : w)
          for (int& x : row) x = rng.below_int(q);
        for (int& x : a) x = rng.below_int(q);
        auto sol = gauss_solve(w, a, q);
        if (sol) {
          AffineSystem sys{q, n, {}};
          for (std::size_t r = 0; r < w.size(); ++r) sys.eqs.push_back({w[r], a[r]});
          CHECK(satisfies(sys, *sol));
        }
      }
    }
  }
}

TEST_CASE("isolate_point worked examples") {
  SUBCASE("singleton set: whole space") {
    std::vector<std::vector<int>> z{{1, 0, 1}};
    IsolateResult r = isolate_point(z, 2, 3);
    CHECK(r.h.eqs.empty());
    CHECK(r.z == z[0]);
  }
  SUBCASE("GF(2), n=2, Z = {00, 01, 10}: big phase") {
    std::vector<std::vector<int>> z{{0, 0}, {0, 1}, {1, 0}};
    IsolateResult r = isolate_point(z, 2, 2);
    // Exactly one survivor, codim within log2(3) + 2*log2(2) rounded up.
    int members = 0;
    for (const auto& vec : z)
      if (satisfies(r.h, vec)) {
        ++members;
        CHECK(vec == r.z);
      }
    CHECK(members == 1);
    CHECK(r.h.eqs.size() <= 3);
  }
  SUBCASE("GF(3), two points differing at one coordinate: small phase") {
    std::vector<std::vector<int>> z{{1, 0, 2}, {1, 0, 1}};
    IsolateResult r = isolate_point(z, 3, 3);
    REQUIRE(r.h.eqs.size() == 1);
    // The cut is on the distinguishing coordinate.
    CHECK(r.h.eqs[0].coef == std::vector<int>{0, 0, 1});
    int members = 0;
    for (const auto& vec : z)
      if (satisfies(r.h, vec)) ++members;
    CHECK(members == 1);
  }
  SUBCASE("empty set is rejected") {
    std::vector<std::vector<int>> z;
    CHECK_THROWS_AS(isolate_point(z, 2, 2), std::invalid_argument);
  }
}

TEST_CASE("isolate_point random suite: singleton and codimension bound") {
  SplitMix64 rng(92);
  for (int q : {2, 3, 5}) {
    for (int round = 0; round < 170; ++round) {
      int n = 1 + rng.below_int(8);
      std::uint64_t space = 1;
      for (int i = 0; i < n; ++i) space *= static_cast<std::uint64_t>(q);
      int want = 1 + rng.below_int(200);
      std::set<std::vector<int>> zs;
      for (int t = 0; t < want; ++t) {
        std::vector<int> vec(static_cast<std::size_t>(n));
        for (int& x : vec) x = rng.below_int(q);
        zs.insert(std::move(vec));
      }
      std::vector<std::vector<int>> z(zs.begin(), zs.end());
      IsolateResult r = isolate_point(z, q, n);

      // Exactly one member of Z survives, and it is the reported point.
      int members = 0;
      for (const auto& vec : z)
        if (satisfies(r.h, vec)) {
          ++members;
          CHECK(vec == r.z);
        }
      CHECK(members == 1);

      // codim <= ceil(log_q |Z|) + ceil(q log2 q), and the equations are
      // independent.
      double logq = std::log(static_cast<double>(z.size())) / std::log(static_cast<double>(q));
      int bound = static_cast<int>(std::ceil(logq - 1e-9)) +
                  static_cast<int>(std::ceil(q * std::log2(static_cast<double>(q)) - 1e-9));
      CHECK(static_cast<int>(r.h.eqs.size()) <= bound);
      RowReduced red = row_reduce(r.h);
      CHECK(red.consistent);
      CHECK(red.codim() == static_cast<int>(r.h.eqs.size()));
    }
  }
}

TEST_CASE("isolation output is deterministic") {
  SplitMix64 rng(17);
  std::vector<std::vector<int>> z;
  for (int t = 0; t < 40; ++t) {
    std::vector<int> vec(4);
    for (int& x : vec) x = rng.below_int(3);
    z.push_back(std::move(vec));
  }
  IsolateResult a = isolate_point(z, 3, 4);
  IsolateResult b = isolate_point(z, 3, 4);
  CHECK(a.z == b.z);
  REQUIRE(a.h.eqs.size() == b.h.eqs.size());
  for (std::size_t i = 0; i < a.h.eqs.size(); ++i) {
    CHECK(a.h.eqs[i].coef == b.h.eqs[i].coef);
    CHECK(a.h.eqs[i].rhs == b.h.eqs[i].rhs);
  }
}
