#include "nilsat/ccircuit.hpp"

#include <stdexcept>
#include <unordered_map>

namespace nilsat {

CCCircuit::CCCircuit(int inputs, std::vector<int> layer_moduli, std::vector<CCGate> gates,
                     int output)
    : inputs_(inputs),
      layer_moduli_(std::move(layer_moduli)),
      gates_(std::move(gates)),
      output_(output) {
  if (inputs_ < 0) throw std::invalid_argument("negative input count");
  if (layer_moduli_.empty()) throw std::invalid_argument("a circuit needs at least one layer");
  if (output_ < 0 || output_ >= static_cast<int>(gates_.size()))
    throw std::invalid_argument("output gate out of range");
  for (int gi = 0; gi < static_cast<int>(gates_.size()); ++gi) {
    const CCGate& g = gates_[static_cast<std::size_t>(gi)];
    if (g.layer < 1 || g.layer > depth()) throw std::invalid_argument("gate layer out of range");
    if (g.modulus != layer_moduli_[static_cast<std::size_t>(g.layer - 1)])
      throw std::invalid_argument("gate modulus does not match its layer");
    if (static_cast<int>(g.accept.size()) != g.modulus)
      throw std::invalid_argument("accepting set size does not match modulus");
    for (auto [src, times] : g.gate_inputs) {
      if (src < 0 || src >= gi) throw std::invalid_argument("gate inputs must precede the gate");
      if (times < 1) throw std::invalid_argument("wire multiplicity must be positive");
    }
    for (auto [var, times] : g.var_inputs) {
      if (var < 0 || var >= inputs_) throw std::invalid_argument("input wire out of range");
      if (times < 1) throw std::invalid_argument("wire multiplicity must be positive");
    }
  }
}

std::uint64_t CCCircuit::wire_count() const {
  std::uint64_t total = 0;
  for (const CCGate& g : gates_) {
    for (auto [src, times] : g.gate_inputs) total += static_cast<std::uint64_t>(times);
    for (auto [var, times] : g.var_inputs) total += static_cast<std::uint64_t>(times);
  }
  return total;
}

int eval_cc(const CCCircuit& c, std::span<const int> bits) {
  if (static_cast<int>(bits.size()) != c.inputs())
    throw std::invalid_argument("bit count does not match circuit inputs");
  std::vector<int> value(c.gate_count());
  for (std::size_t gi = 0; gi < c.gate_count(); ++gi) {
    const CCGate& g = c.gates()[gi];
    long long sum = 0;
    for (auto [src, times] : g.gate_inputs) sum += static_cast<long long>(value[static_cast<std::size_t>(src)]) * times;
    for (auto [var, times] : g.var_inputs) sum += static_cast<long long>(bits[static_cast<std::size_t>(var)]) * times;
    value[gi] = g.accept[static_cast<std::size_t>(sum % g.modulus)] ? 1 : 0;
  }
  return value[static_cast<std::size_t>(c.output())];
}

namespace {

struct Extractor {
  const AlgebraSpec& spec;
  int j, k, n;
  std::vector<CCGate> gates;
  // A form either folds to a constant bit or becomes a gate.
  struct Built {
    bool constant;
    int bit;   // when constant
    int gate;  // otherwise
  };
  std::unordered_map<const LevelForm*, Built> memo;

  std::unordered_map<const LevelForm*, int> zero_memo;

  // Value of a form at the all-zero assignment; inner v-terms of level >= k
  // see only zeros because the circuit inputs live in e_k D.
  int const_value_at_zero(const LevelForm& f) {
    auto it = zero_memo.find(&f);
    if (it != zero_memo.end()) return it->second;
    long long acc = f.c;
    for (const VTermEntry& vt : f.vterms)
      if (const_value_at_zero(*vt.inner) != 0) acc += vt.kappa;
    int val = static_cast<int>(acc % spec.prime(f.level));
    zero_memo.emplace(&f, val);
    return val;
  }

  struct GateData {
    int c_mod;
    std::vector<std::pair<int, int>> var_inputs;
    std::vector<std::pair<int, int>> gate_inputs;
  };

  GateData gather(const LevelForm& f) {
    int level = f.level;
    int p = spec.prime(level);
    long long c_eff = f.c;
    GateData data;

    if (level == k) {
      // Affine on e_k inputs; v-terms see e^{k+1} = 0 and fold.
      for (int i = 0; i < f.arity; ++i) {
        int l = f.lambda[static_cast<std::size_t>(i)];
        if (l != 0) data.var_inputs.emplace_back(i, l);
      }
      for (const VTermEntry& vt : f.vterms)
        if (const_value_at_zero(*vt.inner) != 0) c_eff += vt.kappa;
    } else {
      // The lambda part reads e_level of e_k-valued inputs, which is zero.
      for (const VTermEntry& vt : f.vterms) {
        Built inner = build(*vt.inner);
        if (inner.constant) {
          if (inner.bit) c_eff += vt.kappa;
        } else {
          data.gate_inputs.emplace_back(inner.gate, vt.kappa);
        }
      }
    }
    data.c_mod = static_cast<int>(c_eff % p);
    return data;
  }

  int emit_gate(int level, GateData data) {
    int p = spec.prime(level);
    CCGate gate;
    gate.layer = level - j;
    gate.modulus = p;
    gate.accept.assign(static_cast<std::size_t>(p), 1);
    gate.accept[static_cast<std::size_t>((p - data.c_mod) % p)] = 0;
    gate.gate_inputs = std::move(data.gate_inputs);
    gate.var_inputs = std::move(data.var_inputs);
    gates.push_back(std::move(gate));
    return static_cast<int>(gates.size()) - 1;
  }

  Built build(const LevelForm& f) {
    auto it = memo.find(&f);
    if (it != memo.end()) return it->second;
    GateData data = gather(f);
    Built out{};
    if (data.var_inputs.empty() && data.gate_inputs.empty()) {
      out.constant = true;
      out.bit = data.c_mod != 0 ? 1 : 0;
    } else {
      out.constant = false;
      out.gate = emit_gate(f.level, data);
    }
    memo.emplace(&f, out);
    return out;
  }
};

}  // namespace

CCCircuit extract_cc(const CanonicalForm& g, int j, int k) {
  const AlgebraSpec& spec = g.algebra();
  int h = spec.height();
  if (j < 0 || k <= j || k > h) throw std::invalid_argument("need 0 <= j < k <= h");

  std::vector<int> moduli;
  for (int level = j + 1; level <= k; ++level) moduli.push_back(spec.prime(level));

  // The output gate is always materialized in the Fact 3.1 shape
  // MOD^{Z \ {-c}}, even when the whole map folded to a constant.
  Extractor ex{spec, j, k, g.arity, {}, {}};
  int output = ex.emit_gate(j + 1, ex.gather(*g.levels[static_cast<std::size_t>(j)]));
  return CCCircuit(g.arity, std::move(moduli), std::move(ex.gates), output);
}

CCCircuit extract_cc(const Circuit& g, int j, int k) { return extract_cc(canonicalize(g), j, k); }

CCCircuit extract_cc(const Term& g, const AlgebraSpec& spec, int j, int k, int arity) {
  return extract_cc(canonicalize(compile(g, spec, arity)), j, k);
}

nlohmann::ordered_json cc_to_json(const CCCircuit& c) {
  nlohmann::ordered_json j;
  j["inputs"] = c.inputs();
  j["depth"] = c.depth();
  j["layer_moduli"] = c.layer_moduli();
  nlohmann::ordered_json gates = nlohmann::ordered_json::array();
  for (const CCGate& g : c.gates()) {
    nlohmann::ordered_json gj;
    gj["layer"] = g.layer;
    gj["modulus"] = g.modulus;
    nlohmann::ordered_json accept = nlohmann::ordered_json::array();
    for (int r = 0; r < g.modulus; ++r)
      if (g.accept[static_cast<std::size_t>(r)]) accept.push_back(r);
    gj["accept"] = std::move(accept);
    nlohmann::ordered_json inputs = nlohmann::ordered_json::array();
    for (auto [src, times] : g.gate_inputs)
      inputs.push_back(nlohmann::ordered_json{{"gate", src}, {"times", times}});
    for (auto [var, times] : g.var_inputs)
      inputs.push_back(nlohmann::ordered_json{{"input", var}, {"times", times}});
    gj["wires"] = std::move(inputs);
    gates.push_back(std::move(gj));
  }
  j["gates"] = std::move(gates);
  j["output"] = c.output();
  j["gate_count"] = c.gate_count();
  j["wire_count"] = c.wire_count();
  return j;
}

}  // namespace nilsat
