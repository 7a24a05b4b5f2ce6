#include "nilsat/term.hpp"

#include <map>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

namespace nilsat {

Term t_var(int index) {
  if (index < 0) throw std::invalid_argument("negative variable index");
  auto n = std::make_shared<TermNode>();
  n->kind = NodeKind::Var;
  n->var = index;
  return n;
}

Term t_const(DElem value) {
  auto n = std::make_shared<TermNode>();
  n->kind = NodeKind::Const;
  n->value = std::move(value);
  return n;
}

Term t_add(Term a, Term b) {
  auto n = std::make_shared<TermNode>();
  n->kind = NodeKind::Add;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

Term t_neg(Term a) {
  auto n = std::make_shared<TermNode>();
  n->kind = NodeKind::Neg;
  n->a = std::move(a);
  return n;
}

Term t_e(int level, Term a) {
  auto n = std::make_shared<TermNode>();
  n->kind = NodeKind::E;
  n->level = level;
  n->a = std::move(a);
  return n;
}

Term t_v(int level, Term a) {
  auto n = std::make_shared<TermNode>();
  n->kind = NodeKind::V;
  n->level = level;
  n->a = std::move(a);
  return n;
}

Term t_scale(int lambda, const Term& t, const AlgebraSpec& spec) {
  if (lambda < 0) throw std::invalid_argument("negative scalar");
  if (lambda == 0) return t_const(spec.zero());
  Term acc = t;
  for (int i = 1; i < lambda; ++i) acc = t_add(acc, t);
  return acc;
}

Term t_sub(const Term& a, const Term& b) { return t_add(a, t_neg(b)); }

namespace {

constexpr std::uint64_t kSizeMax = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  return (kSizeMax - a < b) ? kSizeMax : a + b;
}

// Iterative post-order walk over the physical node graph, visiting each
// distinct pointer once.
template <typename Visit>
void walk_term(const Term& root, Visit&& visit) {
  std::unordered_map<const TermNode*, bool> seen;
  std::vector<std::pair<const TermNode*, bool>> stack{{root.get(), false}};
  while (!stack.empty()) {
    auto [node, expanded] = stack.back();
    stack.pop_back();
    if (seen.count(node) && seen[node]) continue;
    if (expanded) {
      seen[node] = true;
      visit(node);
      continue;
    }
    if (seen.count(node)) continue;
    seen[node] = false;
    stack.push_back({node, true});
    if (node->a) stack.push_back({node->a.get(), false});
    if (node->b) stack.push_back({node->b.get(), false});
  }
}

}  // namespace

std::uint64_t term_size(const Term& t) {
  if (!t) throw std::invalid_argument("null term");
  std::unordered_map<const TermNode*, std::uint64_t> size;
  walk_term(t, [&](const TermNode* n) {
    std::uint64_t s = 1;
    if (n->a) s = sat_add(s, size.at(n->a.get()));
    if (n->b) s = sat_add(s, size.at(n->b.get()));
    size[n] = s;
  });
  return size.at(t.get());
}

int term_arity(const Term& t) {
  if (!t) throw std::invalid_argument("null term");
  int arity = 0;
  walk_term(t, [&](const TermNode* n) {
    if (n->kind == NodeKind::Var && n->var + 1 > arity) arity = n->var + 1;
  });
  return arity;
}

Circuit::Circuit(const AlgebraSpec& spec, std::vector<CNode> nodes, int output, int arity)
    : spec_(&spec), nodes_(std::move(nodes)), output_(output), arity_(arity) {
  if (nodes_.empty()) throw std::invalid_argument("empty circuit");
  if (output_ < 0 || output_ >= static_cast<int>(nodes_.size()))
    throw std::invalid_argument("output node out of range");
  if (arity_ < 0) throw std::invalid_argument("negative arity");
  for (int i = 0; i < static_cast<int>(nodes_.size()); ++i) {
    const CNode& n = nodes_[static_cast<std::size_t>(i)];
    if ((n.a >= 0 && n.a >= i) || (n.b >= 0 && n.b >= i))
      throw std::invalid_argument("circuit is not topologically ordered");
    if (n.kind == NodeKind::Var && (n.var < 0 || n.var >= arity_))
      throw std::invalid_argument("variable index out of declared arity");
  }
}

int CircuitBuilder::push(CNode node) {
  nodes_.push_back(std::move(node));
  return static_cast<int>(nodes_.size()) - 1;
}

int CircuitBuilder::add_var(int index) {
  if (index < 0 || index >= arity_) throw std::invalid_argument("variable index out of range");
  return push({NodeKind::Var, index, {}, 0, -1, -1});
}

int CircuitBuilder::add_const(DElem value) {
  if (!(value.spec() == *spec_)) throw std::invalid_argument("mismatched algebra specs");
  return push({NodeKind::Const, -1, std::move(value), 0, -1, -1});
}

int CircuitBuilder::add_add(int a, int b) {
  if (a < 0 || b < 0 || a >= static_cast<int>(nodes_.size()) ||
      b >= static_cast<int>(nodes_.size()))
    throw std::invalid_argument("child index out of range");
  return push({NodeKind::Add, -1, {}, 0, a, b});
}

int CircuitBuilder::add_neg(int a) {
  if (a < 0 || a >= static_cast<int>(nodes_.size()))
    throw std::invalid_argument("child index out of range");
  return push({NodeKind::Neg, -1, {}, 0, a, -1});
}

int CircuitBuilder::add_e(int level, int a) {
  if (level < 1 || level > spec_->height()) throw std::out_of_range("level out of range");
  if (a < 0 || a >= static_cast<int>(nodes_.size()))
    throw std::invalid_argument("child index out of range");
  return push({NodeKind::E, -1, {}, level, a, -1});
}

int CircuitBuilder::add_v(int level, int a) {
  if (level < 1 || level > spec_->height() - 1) throw std::out_of_range("level out of range");
  if (a < 0 || a >= static_cast<int>(nodes_.size()))
    throw std::invalid_argument("child index out of range");
  return push({NodeKind::V, -1, {}, level, a, -1});
}

Circuit CircuitBuilder::build(int output) && {
  return Circuit(*spec_, std::move(nodes_), output, arity_);
}

Circuit compile(const Term& t, const AlgebraSpec& spec, int arity) {
  if (!t) throw std::invalid_argument("null term");
  if (arity < 0) arity = term_arity(t);

  // Dedup key: kind + payload + children node ids.
  using Key = std::tuple<int, int, std::size_t, int, int, int>;
  std::map<Key, int> dedup;
  std::unordered_map<const TermNode*, int> node_of;
  std::vector<CNode> nodes;

  walk_term(t, [&](const TermNode* n) {
    int ca = n->a ? node_of.at(n->a.get()) : -1;
    int cb = n->b ? node_of.at(n->b.get()) : -1;
    std::size_t payload = 0;
    if (n->kind == NodeKind::Const) {
      if (!(n->value.spec() == spec)) throw std::invalid_argument("mismatched algebra specs");
      payload = spec.index_of(n->value);
    }
    if (n->kind == NodeKind::Var && n->var >= arity)
      throw std::invalid_argument("variable index out of declared arity");
    if (n->kind == NodeKind::E && (n->level < 1 || n->level > spec.height()))
      throw std::out_of_range("level out of range");
    if (n->kind == NodeKind::V && (n->level < 1 || n->level > spec.height() - 1))
      throw std::out_of_range("level out of range");
    Key key{static_cast<int>(n->kind), n->var, payload, n->level, ca, cb};
    auto it = dedup.find(key);
    if (it == dedup.end()) {
      nodes.push_back({n->kind, n->var, n->kind == NodeKind::Const ? n->value : DElem{},
                       n->level, ca, cb});
      it = dedup.emplace(key, static_cast<int>(nodes.size()) - 1).first;
    }
    node_of[n] = it->second;
  });
  return Circuit(spec, std::move(nodes), node_of.at(t.get()), arity);
}

Term term_of_circuit(const Circuit& c, std::uint64_t max_nodes) {
  std::vector<Term> terms(c.size());
  std::vector<std::uint64_t> sizes(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    const CNode& n = c.nodes()[i];
    std::uint64_t s = 1;
    switch (n.kind) {
      case NodeKind::Var:
        terms[i] = t_var(n.var);
        break;
      case NodeKind::Const:
        terms[i] = t_const(n.value);
        break;
      case NodeKind::Add:
        terms[i] = t_add(terms[static_cast<std::size_t>(n.a)],
                         terms[static_cast<std::size_t>(n.b)]);
        s = sat_add(s, sat_add(sizes[static_cast<std::size_t>(n.a)],
                               sizes[static_cast<std::size_t>(n.b)]));
        break;
      case NodeKind::Neg:
        terms[i] = t_neg(terms[static_cast<std::size_t>(n.a)]);
        s = sat_add(s, sizes[static_cast<std::size_t>(n.a)]);
        break;
      case NodeKind::E:
        terms[i] = t_e(n.level, terms[static_cast<std::size_t>(n.a)]);
        s = sat_add(s, sizes[static_cast<std::size_t>(n.a)]);
        break;
      case NodeKind::V:
        terms[i] = t_v(n.level, terms[static_cast<std::size_t>(n.a)]);
        s = sat_add(s, sizes[static_cast<std::size_t>(n.a)]);
        break;
    }
    sizes[i] = s;
    if (s > max_nodes)
      throw std::runtime_error("term expansion exceeds the ceiling of " +
                               std::to_string(max_nodes) + " nodes");
  }
  return terms[static_cast<std::size_t>(c.output())];
}

DElem Evaluator::eval(const Circuit& c, std::span<const DElem> assignment) {
  if (static_cast<int>(assignment.size()) != c.arity())
    throw std::invalid_argument("assignment length does not match circuit arity");
  const AlgebraSpec& spec = c.spec();
  values_.resize(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    const CNode& n = c.nodes()[i];
    switch (n.kind) {
      case NodeKind::Var:
        values_[i] = assignment[static_cast<std::size_t>(n.var)];
        if (!(values_[i].spec() == spec))
          throw std::invalid_argument("mismatched algebra specs");
        break;
      case NodeKind::Const:
        values_[i] = n.value;
        break;
      case NodeKind::Add:
        values_[i] = values_[static_cast<std::size_t>(n.a)] +
                     values_[static_cast<std::size_t>(n.b)];
        break;
      case NodeKind::Neg:
        values_[i] = -values_[static_cast<std::size_t>(n.a)];
        break;
      case NodeKind::E:
        values_[i] = e(n.level, values_[static_cast<std::size_t>(n.a)]);
        break;
      case NodeKind::V:
        values_[i] = v(n.level, values_[static_cast<std::size_t>(n.a)]);
        break;
    }
  }
  return values_[static_cast<std::size_t>(c.output())];
}

DElem evaluate(const Circuit& c, std::span<const DElem> assignment) {
  Evaluator ev;
  return ev.eval(c, assignment);
}

DElem evaluate(const Term& t, const AlgebraSpec& spec, std::span<const DElem> assignment) {
  return evaluate(compile(t, spec, static_cast<int>(assignment.size())), assignment);
}

namespace {

// Iterative printer; shared subterms are printed once per occurrence, so
// the output is the unfolded tree.
void print_node(std::string& out, const TermNode* root) {
  struct Frame {
    const TermNode* node;
    int stage;
  };
  std::vector<Frame> stack{{root, 0}};
  while (!stack.empty()) {
    Frame& f = stack.back();
    const TermNode* n = f.node;
    switch (n->kind) {
      case NodeKind::Var:
        out += "(var " + std::to_string(n->var) + ")";
        stack.pop_back();
        break;
      case NodeKind::Const:
        out += "(const " + n->value.to_literal() + ")";
        stack.pop_back();
        break;
      case NodeKind::Add:
        if (f.stage == 0) {
          out += "(+ ";
          f.stage = 1;
          stack.push_back({n->a.get(), 0});
        } else if (f.stage == 1) {
          out += ' ';
          f.stage = 2;
          stack.push_back({n->b.get(), 0});
        } else {
          out += ')';
          stack.pop_back();
        }
        break;
      case NodeKind::Neg:
        if (f.stage == 0) {
          out += "(- ";
          f.stage = 1;
          stack.push_back({n->a.get(), 0});
        } else {
          out += ')';
          stack.pop_back();
        }
        break;
      case NodeKind::E:
      case NodeKind::V:
        if (f.stage == 0) {
          out += n->kind == NodeKind::E ? "(e " : "(v ";
          out += std::to_string(n->level) + " ";
          f.stage = 1;
          stack.push_back({n->a.get(), 0});
        } else {
          out += ')';
          stack.pop_back();
        }
        break;
    }
  }
}

}  // namespace

std::string print_term(const Term& t) {
  if (!t) throw std::invalid_argument("null term");
  std::string out;
  print_node(out, t.get());
  return out;
}

std::string print_circuit(const Circuit& c) { return print_term(term_of_circuit(c)); }

namespace {

template <typename Leaf>
Term rebuild(const Term& t, Leaf&& leaf) {
  std::unordered_map<const TermNode*, Term> out;
  walk_term(t, [&](const TermNode* n) {
    switch (n->kind) {
      case NodeKind::Var:
        out[n] = leaf(n->var);
        break;
      case NodeKind::Const:
        out[n] = t_const(n->value);
        break;
      case NodeKind::Add:
        out[n] = t_add(out.at(n->a.get()), out.at(n->b.get()));
        break;
      case NodeKind::Neg:
        out[n] = t_neg(out.at(n->a.get()));
        break;
      case NodeKind::E:
        out[n] = t_e(n->level, out.at(n->a.get()));
        break;
      case NodeKind::V:
        out[n] = t_v(n->level, out.at(n->a.get()));
        break;
    }
  });
  return out.at(t.get());
}

}  // namespace

Term subst_vars(const Term& t, std::span<const int> var_map) {
  return rebuild(t, [&](int var) {
    if (var >= static_cast<int>(var_map.size()))
      throw std::invalid_argument("variable index outside the substitution map");
    return t_var(var_map[static_cast<std::size_t>(var)]);
  });
}

Term subst_terms(const Term& t, std::span<const Term> replacements) {
  return rebuild(t, [&](int var) {
    if (var >= static_cast<int>(replacements.size()))
      throw std::invalid_argument("variable index outside the substitution map");
    return replacements[static_cast<std::size_t>(var)];
  });
}

std::uint64_t term_chars(const Term& t) {
  // Same recurrence as term_size but counting printed characters.
  std::unordered_map<const TermNode*, std::uint64_t> chars;
  walk_term(t, [&](const TermNode* n) {
    std::uint64_t s = 0;
    switch (n->kind) {
      case NodeKind::Var:
        s = 6 + std::to_string(n->var).size();
        break;
      case NodeKind::Const:
        s = 8 + n->value.to_literal().size();
        break;
      case NodeKind::Add:
        s = sat_add(4, sat_add(chars.at(n->a.get()), chars.at(n->b.get())));
        break;
      case NodeKind::Neg:
        s = sat_add(4, chars.at(n->a.get()));
        break;
      case NodeKind::E:
      case NodeKind::V:
        s = sat_add(5 + std::to_string(n->level).size(), chars.at(n->a.get()));
        break;
    }
    chars[n] = s;
  });
  return chars.at(t.get());
}

}  // namespace nilsat
