#include <doctest.h>

#include "nilsat/reduction.hpp"
#include "nilsat/solver.hpp"
#include "testutil.hpp"

using namespace nilsat;

namespace {

// Brute-force check that t = e_1 1 is solvable iff the formula is, and that
// the term is two-valued; small enough for exhaustive domains only.
void check_reduction(const CnfFormula& phi, const AlgebraSpec& spec) {
  ReductionOutput red = reduce(phi, spec);
  Circuit c = compile(red.term, spec, phi.num_vars);
  Evaluator ev;
  bool algebra_solvable = false;
  testutil::for_all_assignments(spec, phi.num_vars, [&](std::span<const DElem> x) {
    DElem val = ev.eval(c, x);
    bool two_valued = val == spec.zero() || val == spec.unit(1);
    CHECK(two_valued);
    if (val == red.target) algebra_solvable = true;
  });
  bool boolean_solvable = testutil::boolean_brute(phi).has_value();
  CHECK(algebra_solvable == boolean_solvable);
}

}  // namespace

TEST_CASE("DIMACS parsing") {
  CnfFormula f = parse_dimacs("c a comment\np cnf 3 2\n1 -2 0\n2 3 0\n");
  CHECK(f.num_vars == 3);
  REQUIRE(f.clause_count() == 2);
  CHECK(f.clauses[0].literals[0].var == 0);
  CHECK(f.clauses[0].literals[1].var == 1);
  CHECK_FALSE(f.clauses[0].literals[1].positive);

  CHECK_THROWS_AS(parse_dimacs("1 2 0\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 3 0\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_dimacs("p cnf 2 2\n1 0\n"), std::invalid_argument);
  // Four-literal clauses are rejected without the splitting flag.
  CHECK_THROWS_AS(parse_dimacs("p cnf 4 1\n1 2 3 4 0\n"), std::invalid_argument);
  CnfFormula split = parse_dimacs("p cnf 4 1\n1 2 3 4 0\n", true);
  for (const Clause& c : split.clauses) CHECK(c.literals.size() <= 3);
  CHECK(split.num_vars > 4);
}

TEST_CASE("3-CNF splitting preserves satisfiability") {
  SplitMix64 rng(88);
  for (int round = 0; round < 40; ++round) {
    CnfFormula f;
    f.num_vars = 4;
    int m = 1 + rng.below_int(3);
    for (int ci = 0; ci < m; ++ci) {
      Clause c;
      int width = 4 + rng.below_int(2);
      for (int li = 0; li < width; ++li)
        c.literals.push_back({rng.below_int(4), rng.below(2) == 0});
      f.clauses.push_back(std::move(c));
    }
    CnfFormula g = split_to_3cnf(f);
    for (const Clause& c : g.clauses) CHECK(c.literals.size() <= 3);
    CHECK(testutil::boolean_brute(f).has_value() == testutil::boolean_brute(g).has_value());
  }
}

TEST_CASE("part bound s = ceil(m^(1/(h-1)))") {
  CHECK(part_bound(1, 2) == 1);
  CHECK(part_bound(5, 2) == 5);   // h = 2: s = m
  CHECK(part_bound(4, 3) == 2);   // 2^2 >= 4
  CHECK(part_bound(5, 3) == 3);   // 2^2 < 5 <= 3^2
  CHECK(part_bound(9, 3) == 3);
  CHECK(part_bound(8, 4) == 2);   // 2^3 >= 8
}

TEST_CASE("reduction shapes") {
  AlgebraSpec d232({2, 3, 2});
  SplitMix64 rng(5);
  CnfFormula phi = testutil::random_cnf(rng, 3, 4);
  ReductionOutput red = reduce(phi, d232);
  CHECK(red.s == 2);
  CHECK(red.parts.size() == 2);
  for (const CnfFormula& part : red.parts) {
    CHECK(part.clause_count() <= red.s);
    CHECK(part.num_vars <= 3 * red.s);
  }
  CHECK(red.target == d232.unit(1));
}

TEST_CASE("worked instances over D[2,3]") {
  AlgebraSpec d23({2, 3});
  SUBCASE("one clause, solvable, with the encoded witness") {
    CnfFormula phi;
    phi.num_vars = 2;
    phi.clauses.push_back({{{0, true}, {1, true}}});
    ReductionOutput red = reduce(phi, d23);
    Circuit c = compile(red.term, d23, 2);
    std::vector<DElem> witness{d23.make({0, 1}), d23.make({0, 0})};
    CHECK(evaluate(c, witness) == d23.unit(1));
    check_reduction(phi, d23);
  }
  SUBCASE("a contradiction is unsolvable") {
    CnfFormula phi;
    phi.num_vars = 1;
    phi.clauses.push_back({{{0, true}}});
    phi.clauses.push_back({{{0, false}}});
    check_reduction(phi, d23);
  }
}

TEST_CASE("witness lifting and reading") {
  AlgebraSpec d23({2, 3});
  CnfFormula phi;
  phi.num_vars = 2;
  phi.clauses.push_back({{{0, true}, {1, true}}});

  std::vector<bool> beta{true, false};
  auto lifted = lift_witness(phi, beta, d23);
  CHECK(lifted == std::vector<DElem>{d23.make({0, 1}), d23.make({0, 0})});
  CHECK(read_witness(lifted) == beta);

  ReductionOutput red = reduce(phi, d23);
  CHECK(evaluate(red.term, d23, lifted) == red.target);

  // Round trip over every boolean assignment.
  for (std::uint64_t mask = 0; mask < 4; ++mask) {
    std::vector<bool> b{(mask & 1) != 0, (mask & 2) != 0};
    CHECK(read_witness(lift_witness(phi, b, d23)) == b);
  }
  // read applies the b-encoding to the level-h coordinate.
  std::vector<DElem> odd{d23.make({0, 2}), d23.make({0, 0})};
  CHECK(read_witness(odd) == std::vector<bool>{true, false});
}

TEST_CASE("soundness and completeness on exhaustive small formulas") {
  for (auto primes : {std::vector<int>{2, 3}, std::vector<int>{2, 3, 2}}) {
    AlgebraSpec spec(primes);
    // All 3-CNFs over 2 variables with up to 2 clauses drawn from the
    // eight nontrivial clause shapes.
    std::vector<Clause> shapes;
    for (int v = 0; v < 2; ++v)
      for (bool pos : {false, true}) shapes.push_back({{{v, pos}}});
    for (bool p0 : {false, true})
      for (bool p1 : {false, true}) shapes.push_back({{{0, p0}, {1, p1}}});
    for (std::size_t i = 0; i < shapes.size(); ++i) {
      CnfFormula one;
      one.num_vars = 2;
      one.clauses = {shapes[i]};
      check_reduction(one, spec);
      for (std::size_t j = i; j < shapes.size(); ++j) {
        CnfFormula two;
        two.num_vars = 2;
        two.clauses = {shapes[i], shapes[j]};
        check_reduction(two, spec);
      }
    }
  }
}

TEST_CASE("soundness and completeness on random formulas") {
  for (auto primes : {std::vector<int>{2, 3}, std::vector<int>{2, 3, 2}}) {
    AlgebraSpec spec(primes);
    SplitMix64 rng(1234);
    for (int round = 0; round < 25; ++round) {
      CnfFormula phi = testutil::random_cnf(rng, 1 + rng.below_int(3), 1 + rng.below_int(4));
      check_reduction(phi, spec);
    }
  }
}

TEST_CASE("reduction errors") {
  AlgebraSpec d22({2, 2});
  AlgebraSpec d2({2});
  AlgebraSpec d23({2, 3});
  CnfFormula phi;
  phi.num_vars = 1;
  phi.clauses.push_back({{{0, true}}});
  CHECK_THROWS_AS(reduce(phi, d22), std::invalid_argument);  // not alternating
  CHECK_THROWS_AS(reduce(phi, d2), std::invalid_argument);   // height 1
  CnfFormula empty;
  empty.num_vars = 1;
  CHECK_THROWS_AS(reduce(empty, d23), std::invalid_argument);
  // Ceiling violations report the required part size.
  SplitMix64 rng(3);
  CnfFormula big = testutil::random_cnf(rng, 12, 49);  // h=2: s = 49 >> arity ceiling
  try {
    reduce(big, d23);
    FAIL("expected a ceiling error");
  } catch (const std::runtime_error& err) {
    CHECK(std::string(err.what()).find("s=49") != std::string::npos);
  }
}
