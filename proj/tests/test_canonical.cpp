#include <doctest.h>

#include "nilsat/canonical.hpp"
#include "nilsat/parser.hpp"
#include "testutil.hpp"

using namespace nilsat;

namespace {

void check_agreement(const Circuit& c, int exhaustive_arity = 3, int random_points = 500,
                     std::uint64_t seed = 99) {
  CanonicalForm canon = canonicalize(c);
  const AlgebraSpec& spec = c.spec();
  Evaluator ev;
  if (c.arity() <= exhaustive_arity) {
    testutil::for_all_assignments(spec, c.arity(), [&](std::span<const DElem> x) {
      CHECK(ev.eval(c, x) == evaluate_canonical(canon, x));
    });
  } else {
    SplitMix64 rng(seed);
    for (int i = 0; i < random_points; ++i) {
      auto x = testutil::random_assignment(rng, spec, c.arity());
      CHECK(ev.eval(c, x) == evaluate_canonical(canon, x));
    }
  }
}

}  // namespace

TEST_CASE("canonical form of the worked example") {
  // t = v_1(e_2 x_0 + e_2 x_0) + e_1 x_0 + (1,0) over D[2,3]
  AlgebraSpec d23({2, 3});
  Term t = t_add(t_add(t_v(1, t_add(t_e(2, t_var(0)), t_e(2, t_var(0)))), t_e(1, t_var(0))),
                 t_const(d23.make({1, 0})));
  Circuit c = compile(t, d23, 1);
  CanonicalForm canon = canonicalize(c);

  const LevelForm& l1 = *canon.levels[0];
  CHECK(l1.c == 1);
  CHECK(l1.lambda == std::vector<int>{1});
  REQUIRE(l1.vterms.size() == 1);
  CHECK(l1.vterms[0].kappa == 1);
  const LevelForm& inner = *l1.vterms[0].inner;
  CHECK(inner.level == 2);
  CHECK(inner.lambda == std::vector<int>{2});
  CHECK(inner.c == 0);
  CHECK(inner.vterms.empty());

  const LevelForm& l2 = *canon.levels[1];
  CHECK(l2.is_constant());
  CHECK(l2.c == 0);

  check_agreement(c);
  std::vector<DElem> x{d23.make({1, 1})};
  CHECK(evaluate_canonical(canon, x) == d23.make({1, 0}));
}

TEST_CASE("constant and coefficient-collapse cases") {
  AlgebraSpec d23({2, 3});
  SUBCASE("const 0 canonicalizes to all-zero data") {
    Circuit c = compile(t_const(d23.zero()), d23, 0);
    CanonicalForm canon = canonicalize(c);
    for (const FormPtr& level : canon.levels) {
      CHECK(level->is_constant());
      CHECK(level->c == 0);
    }
  }
  SUBCASE("3 e_2(x_0) vanishes mod 3") {
    Term sum = t_add(t_add(t_e(2, t_var(0)), t_e(2, t_var(0))), t_e(2, t_var(0)));
    CanonicalForm canon = canonicalize(compile(sum, d23, 1));
    CHECK(canon.levels[1]->lambda == std::vector<int>{0});
    CHECK(canon.levels[0]->is_constant());
    CHECK(canon.levels[0]->c == 0);
  }
  SUBCASE("level-2-only affine form") {
    // c^2 = 1, lambda^2_0 = 1 at x_0 = (0,2): 1 + 2 = 0 mod 3.
    Term t = t_add(t_const(d23.make({0, 1})), t_e(2, t_var(0)));
    CanonicalForm canon = canonicalize(compile(t, d23, 1));
    std::vector<DElem> x{d23.make({0, 2})};
    CHECK(evaluate_canonical(canon, x) == d23.zero());
  }
  SUBCASE("all-zero assignment leaves constants and v-images of constants") {
    Term t = t_add(t_v(1, t_const(d23.make({0, 2}))), t_const(d23.make({1, 1})));
    CanonicalForm canon = canonicalize(compile(t, d23, 0));
    std::vector<DElem> none;
    CHECK(evaluate_canonical(canon, none) == d23.make({0, 1}));
  }
}

TEST_CASE("v-terms with equal inner forms merge") {
  AlgebraSpec d23({2, 3});
  // v_1(e_2 x_0) + v_1(e_2 x_0) has kappa = 2 = 0 mod 2, so no v-term at all.
  Term t = t_add(t_v(1, t_e(2, t_var(0))), t_v(1, t_e(2, t_var(0))));
  CanonicalForm canon = canonicalize(compile(t, d23, 1));
  CHECK(canon.levels[0]->vterms.empty());
  check_agreement(compile(t, d23, 1));

  // Over D[3,2] the two copies keep kappa = 2.
  AlgebraSpec d32({3, 2});
  Term u = t_add(t_v(1, t_e(2, t_var(0))), t_v(1, t_e(2, t_var(0))));
  CanonicalForm cu = canonicalize(compile(u, d32, 1));
  REQUIRE(cu.levels[0]->vterms.size() == 1);
  CHECK(cu.levels[0]->vterms[0].kappa == 2);
}

TEST_CASE("canonical evaluation agrees with direct evaluation") {
  for (auto primes :
       {std::vector<int>{2, 3}, std::vector<int>{2, 3, 2}, std::vector<int>{3, 2, 3}}) {
    AlgebraSpec spec(primes);
    SplitMix64 rng(404 + static_cast<std::uint64_t>(primes.size()));
    for (int round = 0; round < 40; ++round) {
      int arity = 1 + rng.below_int(4);
      int size = 5 + rng.below_int(36);
      Circuit c = testutil::random_circuit(rng, spec, arity, size);
      check_agreement(c, 3, 120, rng.next());
    }
  }
}

TEST_CASE("level-k output depends only on theta_k classes of the inputs") {
  AlgebraSpec d232({2, 3, 2});
  SplitMix64 rng(2025);
  for (int round = 0; round < 30; ++round) {
    Circuit c = testutil::random_circuit(rng, d232, 3, 25);
    CanonicalForm canon = canonicalize(c);
    auto x = testutil::random_assignment(rng, d232, 3);
    for (int k = 1; k <= d232.height(); ++k) {
      // Perturb one variable below level k: e_k output must not move.
      auto y = x;
      int var = rng.below_int(3);
      for (int j = 1; j < k; ++j)
        y[static_cast<std::size_t>(var)] = y[static_cast<std::size_t>(var)].with_coord(
            j, rng.below_int(d232.prime(j)));
      CHECK(eval_level_form(*canon.levels[static_cast<std::size_t>(k - 1)], x) ==
            eval_level_form(*canon.levels[static_cast<std::size_t>(k - 1)], y));
    }
  }
}

TEST_CASE("canonical size stays within the desk-scale ceiling") {
  for (auto primes :
       {std::vector<int>{2, 3}, std::vector<int>{2, 3, 2}, std::vector<int>{3, 2, 3}}) {
    AlgebraSpec spec(primes);
    SplitMix64 rng(31337);
    for (int round = 0; round < 25; ++round) {
      Circuit c = testutil::random_circuit(rng, spec, 3, 10 + rng.below_int(31));
      std::uint64_t size = canonical_size(canonicalize(c));
      long double bound = 64.0L;
      for (int i = 0; i < spec.height() * spec.height(); ++i)
        bound *= static_cast<long double>(c.size());
      CHECK(static_cast<long double>(size) <= bound);
    }
  }
}

TEST_CASE("memoization canonicalizes shared subcircuits once") {
  // A doubling chain of depth 60 computes 2^60 * v_1(e_2 x_0); without
  // per-node reuse the canonicalization would unfold 2^60 summands.
  AlgebraSpec d32({3, 2});
  Term t = t_v(1, t_e(2, t_var(0)));
  for (int i = 0; i < 60; ++i) t = t_add(t, t);
  Circuit c = compile(t, d32, 1);
  CHECK(c.size() == 63);
  CanonicalForm canon = canonicalize(c);
  REQUIRE(canon.levels[0]->vterms.size() == 1);
  CHECK(canon.levels[0]->vterms[0].kappa == 1);  // 2^60 mod 3
  std::vector<DElem> x{d32.make({0, 1})};
  CHECK(evaluate_canonical(canon, x) == d32.make({1, 0}));
}

TEST_CASE("term_of_level_form computes the form") {
  AlgebraSpec d232({2, 3, 2});
  SplitMix64 rng(777);
  for (int round = 0; round < 20; ++round) {
    Circuit c = testutil::random_circuit(rng, d232, 2, 20);
    CanonicalForm canon = canonicalize(c);
    for (int k = 1; k <= 3; ++k) {
      Term t = term_of_level_form(canon.levels[static_cast<std::size_t>(k - 1)], d232);
      Circuit tc = compile(t, d232, 2);
      testutil::for_all_assignments(d232, 2, [&](std::span<const DElem> x) {
        int direct = eval_level_form(*canon.levels[static_cast<std::size_t>(k - 1)], x);
        CHECK(evaluate(tc, x) == d232.unit(k).scaled(direct));
      });
    }
  }
}

TEST_CASE("canonical JSON carries the level data") {
  AlgebraSpec d23({2, 3});
  Circuit c = parse_circuit("(+ (v 1 (e 2 (var 0))) (const 1:0))", d23);
  auto j = canonical_to_json(canonicalize(c));
  CHECK(j["arity"] == 1);
  CHECK(j["levels"].size() == 2);
  CHECK(j["levels"][0]["c"] == 1);
  CHECK(j["levels"][0]["vterms"].size() == 1);
  CHECK(j["levels"][0]["vterms"][0]["inner"]["level"] == 2);
}
