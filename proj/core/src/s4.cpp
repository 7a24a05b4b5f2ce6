#include "nilsat/s4.hpp"

#include <algorithm>
#include <stdexcept>

#include "nilsat/rng.hpp"

namespace nilsat {

namespace {

struct Tables {
  std::array<std::array<int, 4>, 24> images;
  std::array<std::array<int, 24>, 24> mul;
  std::array<int, 24> inv;
  std::array<bool, 24> even;
  std::array<bool, 24> in_v;
  std::array<int, 24> coset;
  std::vector<int> v_list;
  std::vector<int> a4_list;
  std::array<std::array<int, 4>, 24> decomp;  // only entries for u in V are valid
  std::array<bool, 24> decomp_ok;

  Tables() {
    // All permutations in lex order of image tuples.
    std::array<int, 4> perm{0, 1, 2, 3};
    int count = 0;
    do {
      images[static_cast<std::size_t>(count++)] = perm;
    } while (std::next_permutation(perm.begin(), perm.end()));

    auto index_of = [&](const std::array<int, 4>& img) {
      for (int i = 0; i < 24; ++i)
        if (images[static_cast<std::size_t>(i)] == img) return i;
      throw std::logic_error("not a permutation");
    };

    for (int a = 0; a < 24; ++a)
      for (int b = 0; b < 24; ++b) {
        std::array<int, 4> img;
        for (int p = 0; p < 4; ++p)
          img[static_cast<std::size_t>(p)] = images[static_cast<std::size_t>(
              a)][static_cast<std::size_t>(images[static_cast<std::size_t>(b)][static_cast<std::size_t>(p)])];
        mul[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = index_of(img);
      }
    for (int a = 0; a < 24; ++a) {
      std::array<int, 4> img;
      for (int p = 0; p < 4; ++p)
        img[static_cast<std::size_t>(images[static_cast<std::size_t>(a)][static_cast<std::size_t>(p)])] = p;
      inv[static_cast<std::size_t>(a)] = index_of(img);
    }
    for (int a = 0; a < 24; ++a) {
      int inversions = 0;
      const auto& img = images[static_cast<std::size_t>(a)];
      for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
          if (img[static_cast<std::size_t>(i)] > img[static_cast<std::size_t>(j)]) ++inversions;
      even[static_cast<std::size_t>(a)] = inversions % 2 == 0;
      if (even[static_cast<std::size_t>(a)]) a4_list.push_back(a);
    }
    // V: the identity and the three fixed-point-free involutions.
    for (int a = 0; a < 24; ++a) {
      const auto& img = images[static_cast<std::size_t>(a)];
      bool fixed_point_free = true;
      for (int p = 0; p < 4; ++p)
        if (img[static_cast<std::size_t>(p)] == p) fixed_point_free = false;
      bool involution = mul[static_cast<std::size_t>(a)][static_cast<std::size_t>(a)] == 0;
      in_v[static_cast<std::size_t>(a)] = a == 0 || (fixed_point_free && involution);
      if (in_v[static_cast<std::size_t>(a)]) v_list.push_back(a);
    }
    // Coset ids modulo V: the smallest member of aV.
    for (int a = 0; a < 24; ++a) {
      int best = 24;
      for (int u : v_list)
        best = std::min(best, mul[static_cast<std::size_t>(a)][static_cast<std::size_t>(u)]);
      coset[static_cast<std::size_t>(a)] = best;
    }
    // Decomposition table u = [[y1,y2],[y3,y4]], first hit in scan order.
    decomp_ok.fill(false);
    int remaining = static_cast<int>(v_list.size());
    for (int y1 = 0; y1 < 24 && remaining > 0; ++y1)
      for (int y2 = 0; y2 < 24 && remaining > 0; ++y2) {
        int c1 = comm(y1, y2);
        for (int y3 = 0; y3 < 24 && remaining > 0; ++y3)
          for (int y4 = 0; y4 < 24 && remaining > 0; ++y4) {
            int u = comm(c1, comm(y3, y4));
            if (!decomp_ok[static_cast<std::size_t>(u)]) {
              decomp_ok[static_cast<std::size_t>(u)] = true;
              decomp[static_cast<std::size_t>(u)] = {y1, y2, y3, y4};
              --remaining;
            }
          }
      }
  }

  int comm(int a, int b) const {
    int ai = inv[static_cast<std::size_t>(a)];
    int bi = inv[static_cast<std::size_t>(b)];
    return mul[static_cast<std::size_t>(mul[static_cast<std::size_t>(
        mul[static_cast<std::size_t>(ai)][static_cast<std::size_t>(bi)])][static_cast<std::size_t>(a)])]
              [static_cast<std::size_t>(b)];
  }
};

const Tables& tables() {
  static const Tables t;
  return t;
}

}  // namespace

int S4::compose(int a, int b) { return tables().mul[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]; }
int S4::inverse(int a) { return tables().inv[static_cast<std::size_t>(a)]; }
int S4::commutator(int a, int b) { return tables().comm(a, b); }
bool S4::is_even(int a) { return tables().even[static_cast<std::size_t>(a)]; }
bool S4::in_v(int a) { return tables().in_v[static_cast<std::size_t>(a)]; }
int S4::v_coset(int a) { return tables().coset[static_cast<std::size_t>(a)]; }

std::array<int, 4> S4::images(int a) { return tables().images[static_cast<std::size_t>(a)]; }

int S4::from_images(const std::array<int, 4>& img) {
  for (int i = 0; i < 24; ++i)
    if (tables().images[static_cast<std::size_t>(i)] == img) return i;
  throw std::invalid_argument("not a permutation of 0..3");
}

const std::vector<int>& S4::v_elements() { return tables().v_list; }
const std::vector<int>& S4::a4_elements() { return tables().a4_list; }

std::string S4::cycle_notation(int a) {
  if (a == 0) return "id";
  const auto img = images(a);
  std::array<bool, 4> seen{};
  std::string out;
  for (int start = 0; start < 4; ++start) {
    if (seen[static_cast<std::size_t>(start)]) continue;
    std::vector<int> cycle{start};
    seen[static_cast<std::size_t>(start)] = true;
    int cur = img[static_cast<std::size_t>(start)];
    while (cur != start) {
      cycle.push_back(cur);
      seen[static_cast<std::size_t>(cur)] = true;
      cur = img[static_cast<std::size_t>(cur)];
    }
    if (cycle.size() < 2) continue;
    out += '(';
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      if (i) out += ' ';
      out += std::to_string(cycle[i] + 1);
    }
    out += ')';
  }
  return out;
}

int S4::parse_cycles(const std::string& text) {
  if (text == "id" || text == "()" || text == "e") return 0;
  std::array<int, 4> img{0, 1, 2, 3};
  std::vector<int> cycle;
  bool open = false;
  auto close_cycle = [&]() {
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      int from = cycle[i];
      int to = cycle[(i + 1) % cycle.size()];
      img[static_cast<std::size_t>(from)] = to;
    }
    cycle.clear();
  };
  for (char ch : text) {
    if (ch == '(') {
      if (open) throw std::invalid_argument("nested cycle");
      open = true;
    } else if (ch == ')') {
      if (!open) throw std::invalid_argument("unbalanced cycle");
      close_cycle();
      open = false;
    } else if (ch >= '1' && ch <= '4') {
      if (!open) throw std::invalid_argument("point outside a cycle");
      cycle.push_back(ch - '1');
    } else if (ch == ' ' || ch == ',') {
      continue;
    } else {
      throw std::invalid_argument("bad character in cycle notation");
    }
  }
  if (open) throw std::invalid_argument("unbalanced cycle");
  // The image table built above maps along cycles; composing cycles
  // left-to-right matches the printer because printed cycles are disjoint.
  return from_images(img);
}

std::vector<int> S4::commutator_subgroup(const std::vector<int>& xs, const std::vector<int>& ys) {
  std::array<bool, 24> in{};
  in[0] = true;
  std::vector<int> members{0};
  for (int x : xs)
    for (int y : ys) {
      int c = commutator(x, y);
      if (!in[static_cast<std::size_t>(c)]) {
        in[static_cast<std::size_t>(c)] = true;
        members.push_back(c);
      }
    }
  // Close under multiplication.
  bool grew = true;
  while (grew) {
    grew = false;
    std::size_t count = members.size();
    for (std::size_t i = 0; i < count; ++i)
      for (std::size_t j = 0; j < count; ++j) {
        int c = compose(members[i], members[j]);
        if (!in[static_cast<std::size_t>(c)]) {
          in[static_cast<std::size_t>(c)] = true;
          members.push_back(c);
          grew = true;
        }
      }
  }
  std::sort(members.begin(), members.end());
  return members;
}

std::array<int, 4> S4::decompose_into_commutators(int u) {
  if (!in_v(u)) throw std::invalid_argument("only elements of V are decomposed");
  if (!tables().decomp_ok[static_cast<std::size_t>(u)])
    throw std::logic_error("decomposition table is incomplete");
  return tables().decomp[static_cast<std::size_t>(u)];
}

Word w_var(int index) {
  auto n = std::make_shared<WordNode>();
  n->kind = WordNode::Kind::Var;
  n->var = index;
  return n;
}

Word w_const(int value) {
  auto n = std::make_shared<WordNode>();
  n->kind = WordNode::Kind::Const;
  n->value = value;
  return n;
}

Word w_mul(Word a, Word b) {
  auto n = std::make_shared<WordNode>();
  n->kind = WordNode::Kind::Mul;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

Word w_inv(Word a) {
  auto n = std::make_shared<WordNode>();
  n->kind = WordNode::Kind::Inv;
  n->a = std::move(a);
  return n;
}

Word w_comm(Word a, Word b) {
  auto n = std::make_shared<WordNode>();
  n->kind = WordNode::Kind::Comm;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

int eval_word(const Word& w, std::span<const int> assignment) {
  switch (w->kind) {
    case WordNode::Kind::Var:
      if (w->var >= static_cast<int>(assignment.size()))
        throw std::invalid_argument("assignment too short");
      return assignment[static_cast<std::size_t>(w->var)];
    case WordNode::Kind::Const:
      return w->value;
    case WordNode::Kind::Mul:
      return S4::compose(eval_word(w->a, assignment), eval_word(w->b, assignment));
    case WordNode::Kind::Inv:
      return S4::inverse(eval_word(w->a, assignment));
    case WordNode::Kind::Comm:
      return S4::commutator(eval_word(w->a, assignment), eval_word(w->b, assignment));
  }
  throw std::logic_error("bad word node");
}

std::uint64_t word_size(const Word& w) {
  std::uint64_t s = 1;
  if (w->a) s += word_size(w->a);
  if (w->b) s += word_size(w->b);
  return s;
}

int word_arity(const Word& w) {
  int arity = w->kind == WordNode::Kind::Var ? w->var + 1 : 0;
  if (w->a) arity = std::max(arity, word_arity(w->a));
  if (w->b) arity = std::max(arity, word_arity(w->b));
  return arity;
}

std::string print_word(const Word& w, int y_count) {
  switch (w->kind) {
    case WordNode::Kind::Var:
      return w->var < y_count ? "y" + std::to_string(w->var + 1)
                              : "x" + std::to_string(w->var - y_count + 1);
    case WordNode::Kind::Const:
      return S4::cycle_notation(w->value);
    case WordNode::Kind::Mul:
      return "(" + print_word(w->a, y_count) + " * " + print_word(w->b, y_count) + ")";
    case WordNode::Kind::Inv:
      return print_word(w->a, y_count) + "^-1";
    case WordNode::Kind::Comm:
      return "[" + print_word(w->a, y_count) + ", " + print_word(w->b, y_count) + "]";
  }
  throw std::logic_error("bad word node");
}

Word alpha_circ(Word y, std::span<const Word> xs) {
  Word acc = std::move(y);
  for (const Word& x : xs) acc = w_comm(acc, x);
  return acc;
}

Word alpha_word(int s) {
  if (s < 1) throw std::invalid_argument("alpha needs s >= 1");
  Word y = w_comm(w_comm(w_var(0), w_var(1)), w_comm(w_var(2), w_var(3)));
  std::vector<Word> xs;
  for (int i = 0; i < s; ++i) xs.push_back(w_var(4 + i));
  return alpha_circ(std::move(y), xs);
}

namespace {

// One DNF row: w_T = [g_1(x_1), [g_2(x_2), [..., [g_n(x_n), sigma]...]]],
// g_i(x) = x * tau when the row wants x true, plain x otherwise.
Word dnf_row(const std::vector<bool>& row) {
  Word acc = w_const(S4::sigma());
  for (int i = static_cast<int>(row.size()) - 1; i >= 0; --i) {
    Word g = row[static_cast<std::size_t>(i)] ? w_mul(w_var(i), w_const(S4::tau())) : w_var(i);
    acc = w_comm(g, acc);
  }
  return acc;
}

}  // namespace

ClausePartGadget build_clause_part(const CnfFormula& part, int exhaustive_vars, int samples,
                                   std::uint64_t seed) {
  int n = part.num_vars;
  if (n > 16) throw std::invalid_argument("clause part with more than 16 variables");

  Word word;
  std::vector<bool> row(static_cast<std::size_t>(n));
  for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
    for (int i = 0; i < n; ++i) row[static_cast<std::size_t>(i)] = (mask >> i) & 1;
    if (!eval_cnf(part, row)) continue;
    Word w = dnf_row(row);
    word = word ? w_mul(word, w) : std::move(w);
  }
  if (!word) word = w_const(S4::identity());  // unsatisfiable part: constantly in V

  // Verify the coset property before handing the gadget out.
  auto check = [&](std::span<const int> x) {
    int value = eval_word(word, x);
    if (!S4::in_a4(value)) throw std::logic_error("clause gadget left A4");
    std::vector<bool> bools(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) bools[static_cast<std::size_t>(i)] = S4::in_a4(x[static_cast<std::size_t>(i)]);
    bool sat = eval_cnf(part, bools);
    if (S4::in_v(value) == sat) throw std::logic_error("clause gadget coset mismatch");
  };
  std::vector<int> x(static_cast<std::size_t>(n), 0);
  if (n <= exhaustive_vars) {
    std::uint64_t total = 1;
    for (int i = 0; i < n; ++i) total *= S4::kOrder;
    for (std::uint64_t idx = 0; idx < total; ++idx) {
      std::uint64_t rest = idx;
      for (int i = 0; i < n; ++i) {
        x[static_cast<std::size_t>(i)] = static_cast<int>(rest % S4::kOrder);
        rest /= S4::kOrder;
      }
      check(x);
    }
  } else {
    SplitMix64 rng(seed);
    for (int t = 0; t < samples; ++t) {
      for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = rng.below_int(S4::kOrder);
      check(x);
    }
  }
  return ClausePartGadget{std::move(word), n};
}

S4Reduction reduce_s4(const CnfFormula& phi) {
  if (phi.clauses.empty()) throw std::invalid_argument("empty formulas are trivially satisfiable");
  for (const Clause& c : phi.clauses)
    if (c.literals.size() > 3)
      throw std::invalid_argument("clause with more than three literals; split to 3-CNF first");
  int m = phi.clause_count();
  int s = 1;
  while (s * s < m) ++s;  // ceil(sqrt(m))

  S4Reduction red;
  red.s = s;
  red.target = S4::target_c();
  red.num_vars = phi.num_vars;

  for (int start = 0; start < m; start += s) {
    CnfFormula part;
    std::vector<int> vars;
    for (int ci = start; ci < std::min(start + s, m); ++ci) {
      Clause local;
      for (const Literal& lit : phi.clauses[static_cast<std::size_t>(ci)].literals) {
        int lv = -1;
        for (std::size_t i = 0; i < vars.size(); ++i)
          if (vars[i] == lit.var) lv = static_cast<int>(i);
        if (lv < 0) {
          lv = static_cast<int>(vars.size());
          vars.push_back(lit.var);
        }
        local.literals.push_back({lv, lit.positive});
      }
      part.clauses.push_back(std::move(local));
    }
    part.num_vars = static_cast<int>(vars.size());
    red.parts.push_back(std::move(part));
    red.part_vars.push_back(std::move(vars));
  }

  // Plug p_{part}(x) into the alpha word; formula variable i lives at
  // word variable 4 + i.
  std::vector<Word> part_words;
  for (std::size_t pi = 0; pi < red.parts.size(); ++pi) {
    ClausePartGadget gadget = build_clause_part(red.parts[pi]);
    // Remap local variables onto the global x block.
    struct Remap {
      const std::vector<int>& vars;
      Word run(const Word& w) {
        switch (w->kind) {
          case WordNode::Kind::Var:
            return w_var(4 + vars[static_cast<std::size_t>(w->var)]);
          case WordNode::Kind::Const:
            return w;
          case WordNode::Kind::Mul:
            return w_mul(run(w->a), run(w->b));
          case WordNode::Kind::Inv:
            return w_inv(run(w->a));
          case WordNode::Kind::Comm:
            return w_comm(run(w->a), run(w->b));
        }
        throw std::logic_error("bad word node");
      }
    };
    part_words.push_back(Remap{red.part_vars[pi]}.run(gadget.word));
  }
  Word y = w_comm(w_comm(w_var(0), w_var(1)), w_comm(w_var(2), w_var(3)));
  red.word = alpha_circ(std::move(y), part_words);
  return red;
}

std::vector<int> solve_s4_witness(const S4Reduction& red, const std::vector<bool>& assignment) {
  if (static_cast<int>(assignment.size()) != red.num_vars)
    throw std::invalid_argument("assignment length does not match variable count");

  std::vector<int> full(static_cast<std::size_t>(4 + red.num_vars), S4::identity());
  for (int i = 0; i < red.num_vars; ++i)
    full[static_cast<std::size_t>(4 + i)] =
        assignment[static_cast<std::size_t>(i)] ? S4::sigma() : S4::tau();

  // With all parts satisfied every part value is in A4 \ V, so
  // u -> alpha_circ(u, parts) permutes V and some u reaches c.
  std::vector<int> part_values;
  for (std::size_t pi = 0; pi < red.parts.size(); ++pi) {
    std::vector<bool> local(static_cast<std::size_t>(red.parts[pi].num_vars));
    for (std::size_t li = 0; li < local.size(); ++li)
      local[li] = assignment[static_cast<std::size_t>(red.part_vars[pi][li])];
    if (!eval_cnf(red.parts[pi], local))
      throw std::invalid_argument("assignment does not satisfy the formula");
  }

  for (int u : S4::v_elements()) {
    std::vector<int> probe = full;
    auto y = S4::decompose_into_commutators(u);
    for (int i = 0; i < 4; ++i) probe[static_cast<std::size_t>(i)] = y[static_cast<std::size_t>(i)];
    if (eval_word(red.word, probe) == red.target) return probe;
  }
  throw std::logic_error("no u in V reaches the target; the construction is broken");
}

}  // namespace nilsat
