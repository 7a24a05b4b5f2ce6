#include "nilsat/canonical.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace nilsat {

bool LevelForm::is_constant() const {
  if (!vterms.empty()) return false;
  return std::all_of(lambda.begin(), lambda.end(), [](int l) { return l == 0; });
}

std::size_t FormPool::KeyHash::operator()(const Key& k) const {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (std::int64_t x : k)
    h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

FormPtr FormPool::intern(int level, int arity, int c, std::vector<int> lambda,
                         std::vector<VTermEntry> vterms) {
  int p = spec_->prime(level);
  if (c < 0 || c >= p) throw std::logic_error("form constant out of range");
  if (static_cast<int>(lambda.size()) != arity) throw std::logic_error("lambda size mismatch");
  for (int l : lambda)
    if (l < 0 || l >= p) throw std::logic_error("form coefficient out of range");
  std::sort(vterms.begin(), vterms.end(),
            [](const VTermEntry& a, const VTermEntry& b) { return a.inner->id < b.inner->id; });
  for (const VTermEntry& vt : vterms) {
    if (vt.kappa <= 0 || vt.kappa >= p) throw std::logic_error("v-term coefficient out of range");
    if (vt.inner->level != level + 1) throw std::logic_error("v-term level mismatch");
  }

  Key key;
  key.reserve(3 + lambda.size() + 2 * vterms.size());
  key.push_back(level);
  key.push_back(c);
  key.push_back(static_cast<std::int64_t>(lambda.size()));
  for (int l : lambda) key.push_back(l);
  for (const VTermEntry& vt : vterms) {
    key.push_back(vt.kappa);
    key.push_back(static_cast<std::int64_t>(vt.inner->id));
  }

  auto it = pool_.find(key);
  if (it != pool_.end()) return it->second;

  auto form = std::make_shared<LevelForm>();
  form->spec = spec_;
  form->level = level;
  form->arity = arity;
  form->c = c;
  form->lambda = std::move(lambda);
  form->vterms = std::move(vterms);
  form->id = next_id_++;
  pool_.emplace(std::move(key), form);
  return form;
}

FormPtr FormPool::zero(int level, int arity) { return constant(level, arity, 0); }

FormPtr FormPool::constant(int level, int arity, int c) {
  return intern(level, arity, c, std::vector<int>(static_cast<std::size_t>(arity), 0), {});
}

namespace {

// Pointwise sum a + sign_b * b of two sorted v-term lists, dropping entries
// whose coefficient cancels mod p.
std::vector<VTermEntry> merge_vterms(const std::vector<VTermEntry>& a,
                                     const std::vector<VTermEntry>& b, int p, int sign_b) {
  std::vector<VTermEntry> out;
  std::size_t i = 0, j = 0;
  auto push = [&](int kappa, const FormPtr& inner) {
    kappa %= p;
    if (kappa < 0) kappa += p;
    if (kappa != 0) out.push_back({kappa, inner});
  };
  while (i < a.size() || j < b.size()) {
    if (j >= b.size() || (i < a.size() && a[i].inner->id < b[j].inner->id)) {
      push(a[i].kappa, a[i].inner);
      ++i;
    } else if (i >= a.size() || b[j].inner->id < a[i].inner->id) {
      push(sign_b * b[j].kappa, b[j].inner);
      ++j;
    } else {
      push(a[i].kappa + sign_b * b[j].kappa, a[i].inner);
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

CanonicalForm canonicalize(const Circuit& circuit) {
  const AlgebraSpec& spec = circuit.spec();
  int h = spec.height();
  int n = circuit.arity();
  FormPool pool(spec);

  // forms[node][k-1] = canonical level-k component of the node's subcircuit.
  std::vector<std::vector<FormPtr>> forms(circuit.size());
  for (std::size_t idx = 0; idx < circuit.size(); ++idx) {
    const CNode& node = circuit.nodes()[idx];
    std::vector<FormPtr> out(static_cast<std::size_t>(h));
    switch (node.kind) {
      case NodeKind::Var:
        for (int k = 1; k <= h; ++k) {
          std::vector<int> lambda(static_cast<std::size_t>(n), 0);
          lambda[static_cast<std::size_t>(node.var)] = 1;
          out[static_cast<std::size_t>(k - 1)] = pool.intern(k, n, 0, std::move(lambda), {});
        }
        break;
      case NodeKind::Const:
        for (int k = 1; k <= h; ++k)
          out[static_cast<std::size_t>(k - 1)] = pool.constant(k, n, node.value.coord(k));
        break;
      case NodeKind::Add: {
        const auto& fa = forms[static_cast<std::size_t>(node.a)];
        const auto& fb = forms[static_cast<std::size_t>(node.b)];
        for (int k = 1; k <= h; ++k) {
          int p = spec.prime(k);
          const LevelForm& x = *fa[static_cast<std::size_t>(k - 1)];
          const LevelForm& y = *fb[static_cast<std::size_t>(k - 1)];
          std::vector<int> lambda(static_cast<std::size_t>(n));
          for (int i = 0; i < n; ++i) {
            int s = x.lambda[static_cast<std::size_t>(i)] + y.lambda[static_cast<std::size_t>(i)];
            if (s >= p) s -= p;
            lambda[static_cast<std::size_t>(i)] = s;
          }
          out[static_cast<std::size_t>(k - 1)] =
              pool.intern(k, n, (x.c + y.c) % p, std::move(lambda),
                          merge_vterms(x.vterms, y.vterms, p, +1));
        }
        break;
      }
      case NodeKind::Neg: {
        const auto& fa = forms[static_cast<std::size_t>(node.a)];
        for (int k = 1; k <= h; ++k) {
          int p = spec.prime(k);
          const LevelForm& x = *fa[static_cast<std::size_t>(k - 1)];
          std::vector<int> lambda(static_cast<std::size_t>(n));
          for (int i = 0; i < n; ++i) {
            int l = x.lambda[static_cast<std::size_t>(i)];
            lambda[static_cast<std::size_t>(i)] = l == 0 ? 0 : p - l;
          }
          out[static_cast<std::size_t>(k - 1)] =
              pool.intern(k, n, x.c == 0 ? 0 : p - x.c, std::move(lambda),
                          merge_vterms({}, x.vterms, p, -1));
        }
        break;
      }
      case NodeKind::E: {
        const auto& fa = forms[static_cast<std::size_t>(node.a)];
        for (int k = 1; k <= h; ++k)
          out[static_cast<std::size_t>(k - 1)] =
              k == node.level ? fa[static_cast<std::size_t>(k - 1)] : pool.zero(k, n);
        break;
      }
      case NodeKind::V: {
        const auto& fa = forms[static_cast<std::size_t>(node.a)];
        int j = node.level;
        FormPtr inner = fa[static_cast<std::size_t>(j)];  // the level-(j+1) component
        for (int k = 1; k <= h; ++k) out[static_cast<std::size_t>(k - 1)] = pool.zero(k, n);
        if (inner->is_constant()) {
          out[static_cast<std::size_t>(j - 1)] = pool.constant(j, n, inner->c != 0 ? 1 : 0);
        } else {
          out[static_cast<std::size_t>(j - 1)] = pool.intern(
              j, n, 0, std::vector<int>(static_cast<std::size_t>(n), 0), {{1, inner}});
        }
        break;
      }
    }
    forms[idx] = std::move(out);
  }
  return CanonicalForm{&spec, n, forms[static_cast<std::size_t>(circuit.output())]};
}

namespace {

// Shared inner forms are evaluated once per call; without the memo the cost
// would track the unfolded canonical size instead of the stored one.
int eval_form_memo(const LevelForm& form, std::span<const DElem> assignment,
                   std::unordered_map<const LevelForm*, int>& memo) {
  auto it = memo.find(&form);
  if (it != memo.end()) return it->second;
  int p = form.spec->prime(form.level);
  long long acc = form.c;
  for (int i = 0; i < form.arity; ++i) {
    int l = form.lambda[static_cast<std::size_t>(i)];
    if (l != 0)
      acc += static_cast<long long>(l) * assignment[static_cast<std::size_t>(i)].coord(form.level);
  }
  for (const VTermEntry& vt : form.vterms)
    if (eval_form_memo(*vt.inner, assignment, memo) != 0) acc += vt.kappa;
  int val = static_cast<int>(acc % p);
  memo.emplace(&form, val);
  return val;
}

}  // namespace

int eval_level_form(const LevelForm& form, std::span<const DElem> assignment) {
  if (static_cast<int>(assignment.size()) != form.arity)
    throw std::invalid_argument("assignment length does not match form arity");
  std::unordered_map<const LevelForm*, int> memo;
  return eval_form_memo(form, assignment, memo);
}

DElem evaluate_canonical(const CanonicalForm& f, std::span<const DElem> assignment) {
  if (static_cast<int>(assignment.size()) != f.arity)
    throw std::invalid_argument("assignment length does not match arity");
  std::unordered_map<const LevelForm*, int> memo;
  DElem out = f.spec->zero();
  for (int k = 1; k <= f.spec->height(); ++k)
    out = out.with_coord(
        k, eval_form_memo(*f.levels[static_cast<std::size_t>(k - 1)], assignment, memo));
  return out;
}

namespace {

std::uint64_t sat_add_u64(std::uint64_t a, std::uint64_t b) {
  return (std::numeric_limits<std::uint64_t>::max() - a < b)
             ? std::numeric_limits<std::uint64_t>::max()
             : a + b;
}

std::uint64_t form_size(const LevelForm& f,
                        std::unordered_map<const LevelForm*, std::uint64_t>& memo) {
  auto it = memo.find(&f);
  if (it != memo.end()) return it->second;
  std::uint64_t s = 1;
  for (int l : f.lambda)
    if (l != 0) ++s;
  for (const VTermEntry& vt : f.vterms)
    s = sat_add_u64(s, sat_add_u64(1, form_size(*vt.inner, memo)));
  memo[&f] = s;
  return s;
}

}  // namespace

std::uint64_t canonical_size(const CanonicalForm& f) {
  std::unordered_map<const LevelForm*, std::uint64_t> memo;
  std::uint64_t total = 0;
  for (const FormPtr& level : f.levels) total = sat_add_u64(total, form_size(*level, memo));
  return total;
}

namespace {

Term term_of_form_memo(const FormPtr& form, const AlgebraSpec& spec,
                       std::unordered_map<const LevelForm*, Term>& memo) {
  auto it = memo.find(form.get());
  if (it != memo.end()) return it->second;
  int k = form->level;
  Term acc = t_const(spec.unit(k).scaled(form->c));
  for (int i = 0; i < form->arity; ++i) {
    int l = form->lambda[static_cast<std::size_t>(i)];
    if (l != 0) acc = t_add(acc, t_scale(l, t_e(k, t_var(i)), spec));
  }
  for (const VTermEntry& vt : form->vterms) {
    Term inner = term_of_form_memo(vt.inner, spec, memo);
    acc = t_add(acc, t_scale(vt.kappa, t_v(k, inner), spec));
  }
  memo.emplace(form.get(), acc);
  return acc;
}

}  // namespace

Term term_of_level_form(const FormPtr& form, const AlgebraSpec& spec) {
  std::unordered_map<const LevelForm*, Term> memo;
  return term_of_form_memo(form, spec, memo);
}

nlohmann::ordered_json level_form_to_json(const FormPtr& form) {
  nlohmann::ordered_json j;
  j["level"] = form->level;
  j["c"] = form->c;
  j["lambda"] = form->lambda;
  nlohmann::ordered_json vts = nlohmann::ordered_json::array();
  for (const VTermEntry& vt : form->vterms) {
    nlohmann::ordered_json entry;
    entry["kappa"] = vt.kappa;
    entry["inner"] = level_form_to_json(vt.inner);
    vts.push_back(std::move(entry));
  }
  j["vterms"] = std::move(vts);
  return j;
}

nlohmann::ordered_json canonical_to_json(const CanonicalForm& f) {
  nlohmann::ordered_json j;
  j["arity"] = f.arity;
  nlohmann::ordered_json levels = nlohmann::ordered_json::array();
  for (const FormPtr& level : f.levels) levels.push_back(level_form_to_json(level));
  j["levels"] = std::move(levels);
  j["size"] = canonical_size(f);
  return j;
}

}  // namespace nilsat
