#pragma once

// Unbounded fan-in MOD-gate circuits with boolean wires, and the extraction
// of such circuits from the canonical form of an algebra term.
//
// A gate MOD_m^R outputs 1 iff the multiplicity-weighted sum of its input
// bits is in R mod m.  Layers are counted from the output side: a circuit
// extracted for the level pair (j, k) has layer moduli p_{j+1}, ..., p_k and
// therefore depth k - j.
//
// extract_cc(g, j, k) builds the circuit for the boolean map
//
//   beta in {0,1}^n  |->  [ e_{j+1} g(beta_1 * e_k1, ..., beta_n * e_k1) != 0 ]
//
// which for j >= 1 is exactly the v_j e_{j+1} indicator.  j = 0 is allowed
// and tests the e_1-level value instead; for two-valued terms with range
// {0, e_1 1} that is the equation test "g = e_1 1", which is how extracted
// conjunctions become boolean circuits.
//
// At the input level the level-k component of g is affine, so it becomes a
// single gate with the variable wires repeated lambda_i times; deeper
// v-terms become gates fed by their sub-circuits kappa times.  Constant
// sub-forms fold into the gate constant before the accepting set is chosen.

#include <cstdint>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "nilsat/canonical.hpp"

namespace nilsat {

struct CCGate {
  int layer;                                  // 1 = output layer
  int modulus;
  std::vector<std::uint8_t> accept;           // accept[r] != 0 <=> r in R
  std::vector<std::pair<int, int>> gate_inputs;  // (gate index, multiplicity)
  std::vector<std::pair<int, int>> var_inputs;   // (input index, multiplicity)
};

class CCCircuit {
 public:
  CCCircuit(int inputs, std::vector<int> layer_moduli, std::vector<CCGate> gates, int output);

  int inputs() const { return inputs_; }
  int depth() const { return static_cast<int>(layer_moduli_.size()); }
  const std::vector<int>& layer_moduli() const { return layer_moduli_; }
  const std::vector<CCGate>& gates() const { return gates_; }
  int output() const { return output_; }

  std::size_t gate_count() const { return gates_.size(); }
  // Wire count with multiplicities, the paper-style size measure.
  std::uint64_t wire_count() const;

 private:
  int inputs_;
  std::vector<int> layer_moduli_;
  std::vector<CCGate> gates_;  // referenced gates precede their referrers
  int output_;
};

int eval_cc(const CCCircuit& c, std::span<const int> bits);

// j in [0, k), k in [j+1, h].  The input must carry at least `levels`
// j+1..k of the canonical data.
CCCircuit extract_cc(const CanonicalForm& g, int j, int k);
CCCircuit extract_cc(const Circuit& g, int j, int k);
CCCircuit extract_cc(const Term& g, const AlgebraSpec& spec, int j, int k, int arity = -1);

nlohmann::ordered_json cc_to_json(const CCCircuit& c);

}  // namespace nilsat
