#include <doctest.h>

#include "nilsat/parser.hpp"
#include "nilsat/term.hpp"
#include "testutil.hpp"

using namespace nilsat;

TEST_CASE("evaluation follows the operation definitions") {
  AlgebraSpec d23({2, 3});
  SUBCASE("v_1(e_2 x_0)") {
    Term t = t_v(1, t_e(2, t_var(0)));
    std::vector<DElem> x{d23.make({0, 1})};
    CHECK(evaluate(t, d23, x) == d23.make({1, 0}));
  }
  SUBCASE("x_0 + x_1") {
    Term t = t_add(t_var(0), t_var(1));
    std::vector<DElem> x{d23.make({1, 2}), d23.make({1, 2})};
    CHECK(evaluate(t, d23, x) == d23.make({0, 1}));
  }
  SUBCASE("e_1(x_0) + (1,0)") {
    Term t = t_add(t_e(1, t_var(0)), t_const(d23.make({1, 0})));
    std::vector<DElem> x{d23.make({1, 2})};
    CHECK(evaluate(t, d23, x) == d23.make({0, 0}));
  }
  SUBCASE("arity mismatch") {
    Term t = t_var(1);
    std::vector<DElem> x{d23.zero()};
    CHECK_THROWS(evaluate(t, d23, x));
  }
}

TEST_CASE("parse and print") {
  AlgebraSpec d23({2, 3});
  SUBCASE("basic terms") {
    Circuit c = parse_circuit("(v 1 (e 2 (var 0)))", d23);
    std::vector<DElem> x{d23.make({0, 1})};
    CHECK(evaluate(c, x) == d23.make({1, 0}));

    Circuit sum = parse_circuit("(+ (var 0) (const 1:1))", d23);
    std::vector<DElem> y{d23.make({1, 2})};
    CHECK(evaluate(sum, y) == d23.make({0, 0}));
  }
  SUBCASE("n-ary + desugars to a left fold") {
    Circuit c = parse_circuit("(+ (var 0) (var 0) (var 0))", d23);
    std::vector<DElem> x{d23.make({1, 1})};
    CHECK(evaluate(c, x) == d23.make({1, 0}));
    CHECK(c.size() == 5);  // three textual var nodes and two adds, no folding
  }
  SUBCASE("level out of range carries a position") {
    try {
      parse_circuit("(v 9 (var 0))", d23);
      FAIL("expected a parse error");
    } catch (const ParseError& err) {
      CHECK(std::string(err.what()).find("level out of range") != std::string::npos);
      CHECK(err.line() == 1);
    }
  }
  SUBCASE("malformed inputs") {
    CHECK_THROWS_AS(parse_circuit("(var 0", d23), ParseError);
    CHECK_THROWS_AS(parse_circuit("(frob 1)", d23), ParseError);
    CHECK_THROWS_AS(parse_circuit("(const 7:7)", d23), ParseError);
    CHECK_THROWS_AS(parse_circuit("(+ (var 0))", d23), ParseError);
    CHECK_THROWS_AS(parse_circuit("(var 99999999999)", d23), ParseError);
    CHECK_THROWS_AS(parse_circuit("(var 0) (var 1)", d23), ParseError);
  }
  SUBCASE("round trip evaluates identically") {
    SplitMix64 rng(11);
    for (int round = 0; round < 30; ++round) {
      Circuit c = testutil::random_circuit(rng, d23, 2, 18);
      Circuit back = parse_circuit(print_circuit(c), d23, 2);
      testutil::for_all_assignments(d23, 2, [&](std::span<const DElem> x) {
        CHECK(evaluate(c, x) == evaluate(back, x));
      });
    }
  }
}

TEST_CASE("sizes: terms unfold, circuits share") {
  AlgebraSpec d23({2, 3});
  SUBCASE("var node") {
    CHECK(term_size(t_var(0)) == 1);
  }
  SUBCASE("chain of shared doublings") {
    const int k = 10;
    Term t = t_var(0);
    for (int i = 0; i < k; ++i) t = t_add(t, t);
    CHECK(term_size(t) == (1u << (k + 1)) - 1);
    Circuit c = compile(t, d23);
    CHECK(c.size() == k + 1);
    Term expanded = term_of_circuit(c);
    CHECK(term_size(expanded) == (1u << (k + 1)) - 1);
  }
  SUBCASE("one add reused twice") {
    CircuitBuilder b(d23, 2);
    int x0 = b.add_var(0);
    int x1 = b.add_var(1);
    int a = b.add_add(x0, x1);
    int top = b.add_add(a, a);
    Circuit c = std::move(b).build(top);
    CHECK(c.size() == 4);
    CHECK(term_size(term_of_circuit(c)) == 7);
  }
  SUBCASE("expansion ceiling") {
    Term t = t_var(0);
    for (int i = 0; i < 40; ++i) t = t_add(t, t);
    Circuit c = compile(t, d23);
    CHECK_THROWS_AS(term_of_circuit(c, 1u << 20), std::runtime_error);
  }
}

TEST_CASE("replacing a subcircuit by its value is sound") {
  // evaluate is a homomorphic fold over the DAG.
  AlgebraSpec d232({2, 3, 2});
  SplitMix64 rng(5);
  for (int round = 0; round < 25; ++round) {
    Circuit c = testutil::random_circuit(rng, d232, 2, 20);
    auto x = testutil::random_assignment(rng, d232, 2);
    // Pick an internal node, freeze its value as a constant, re-evaluate.
    std::size_t cut = rng.below(c.size());
    Evaluator ev;
    DElem expected = ev.eval(c, x);
    // Evaluate the subcircuit rooted at `cut`.
    std::vector<CNode> nodes(c.nodes().begin(), c.nodes().begin() + static_cast<long>(cut) + 1);
    Circuit sub(d232, std::move(nodes), static_cast<int>(cut), c.arity());
    DElem subval = ev.eval(sub, x);
    std::vector<CNode> patched = c.nodes();
    patched[cut] = CNode{NodeKind::Const, -1, subval, 0, -1, -1};
    Circuit replaced(d232, std::move(patched), c.output(), c.arity());
    CHECK(ev.eval(replaced, x) == expected);
  }
}

TEST_CASE("subtraction helper") {
  AlgebraSpec d23({2, 3});
  Term t = t_sub(t_var(0), t_var(1));
  std::vector<DElem> x{d23.make({1, 1}), d23.make({1, 2})};
  CHECK(evaluate(t, d23, x) == d23.make({0, 2}));
}

TEST_CASE("term expansion agrees with the circuit") {
  for (auto primes : {std::vector<int>{2, 3}, std::vector<int>{2, 3, 2}}) {
    AlgebraSpec spec(primes);
    SplitMix64 rng(17);
    for (int round = 0; round < 10; ++round) {
      Circuit c = testutil::random_circuit(rng, spec, 3, 15);
      Term t = term_of_circuit(c);
      testutil::for_all_assignments(spec, 3, [&](std::span<const DElem> x) {
        CHECK(evaluate(c, x) == evaluate(t, spec, x));
      });
    }
  }
}
