#pragma once

#include "mlqls/circuit.hpp"
#include "mlqls/device.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>
#include <vector>

namespace mlqls {

struct SaConfig {
  double gate_weight_decay = 0.9;  // w_g = decay^(two-qubit dependency depth)
  std::int64_t iterations = 0;     // 0: 50 * |Q|^2 moves
  double initial_temp = 0.0;       // 0: calibrated so about half of uphill probe moves pass
  double cooling = 0.0;            // per-move factor; 0: reach 1e-3 * T0 at the last move
  double region_bias = 0.1;        // chance of proposing a target outside the mover's region

  void validate() const {
    if (!(gate_weight_decay > 0.0 && gate_weight_decay < 1.0)) throw InvalidInput("gate_weight_decay must lie in (0,1)");
    if (!(region_bias > 0.0 && region_bias < 1.0)) throw InvalidInput("region_bias must lie in (0,1)");
    if (iterations < 0 || initial_temp < 0.0 || cooling < 0.0 || cooling >= 1.0) {
      throw InvalidInput("bad annealing schedule");
    }
  }
};

/// Weight of each gate in the mapping cost: gates deeper in the circuit
/// influence the initial mapping less.
inline std::vector<double> gate_weights(const Circuit& c, const DependencyDag& dag, double decay) {
  std::vector<double> w(c.size(), 0.0);
  for (GateId g = 0; g < static_cast<GateId>(c.size()); ++g) {
    if (c.gate(g).two_qubit()) w[g] = std::pow(decay, dag.two_qubit_depth(g));
  }
  return w;
}

/// For gate g and a parent g' sharing exactly one qubit, the two qubits they
/// do not share. Returns false when the gates act on the same pair.
inline bool uncommon_qubits(const Gate& g, const Gate& parent, Qubit& a, Qubit& b) {
  Qubit shared = kNoQubit;
  for (Qubit q : g.targets()) {
    if (parent.acts_on(q)) {
      if (shared != kNoQubit) return false;
      shared = q;
    }
  }
  if (shared == kNoQubit) return false;
  a = g.qubits[0] == shared ? g.qubits[1] : g.qubits[0];
  b = parent.qubits[0] == shared ? parent.qubits[1] : parent.qubits[0];
  return a != b;
}

/// The mapping cost as a weighted sum of pairwise physical distances. Both
/// the gate-distance term and the related-qubit term reduce to weights on
/// program-qubit pairs, which makes move deltas local to the moved qubits.
class PairCost {
 public:
  PairCost() = default;

  PairCost(const Circuit& c, const DependencyDag& dag, double decay) : nq_(c.num_qubits()) {
    auto w = gate_weights(c, dag, decay);
    std::map<std::pair<Qubit, Qubit>, double> acc;
    auto add = [&](Qubit a, Qubit b, double weight) {
      if (a > b) std::swap(a, b);
      acc[{a, b}] += weight;
    };
    for (GateId g = 0; g < static_cast<GateId>(c.size()); ++g) {
      const Gate& gate = c.gate(g);
      if (!gate.two_qubit()) continue;
      add(gate.qubits[0], gate.qubits[1], w[g]);
      for (GateId p : dag.parents(g)) {
        Qubit a, b;
        if (uncommon_qubits(gate, c.gate(p), a, b)) add(a, b, w[g]);
      }
    }
    terms_.assign(static_cast<std::size_t>(nq_), {});
    for (auto& [pair, weight] : acc) {
      pairs_.push_back({pair.first, pair.second, weight});
      terms_[pair.first].push_back({pair.second, weight});
      terms_[pair.second].push_back({pair.first, weight});
    }
  }

  struct Term {
    Qubit other;
    double weight;
  };
  struct PairTerm {
    Qubit a, b;
    double weight;
  };

  [[nodiscard]] double evaluate(const Mapping& m, const CouplingGraph& g) const {
    double total = 0.0;
    for (const auto& t : pairs_) total += t.weight * g.dist(m[t.a], m[t.b]);
    return total;
  }

  /// Sum of terms touching `q` or `r` (each counted once) under mapping m.
  [[nodiscard]] double local(const Mapping& m, const CouplingGraph& g, Qubit q, Qubit r) const {
    double s = 0.0;
    for (const Term& t : terms_[q]) s += t.weight * g.dist(m[q], m[t.other]);
    if (r != kNoQubit) {
      for (const Term& t : terms_[r]) {
        if (t.other != q) s += t.weight * g.dist(m[r], m[t.other]);
      }
    }
    return s;
  }

  [[nodiscard]] const std::vector<Term>& terms(Qubit q) const { return terms_[q]; }
  [[nodiscard]] const std::vector<PairTerm>& pairs() const { return pairs_; }
  [[nodiscard]] int num_qubits() const noexcept { return nq_; }

 private:
  int nq_ = 0;
  std::vector<PairTerm> pairs_;
  std::vector<std::vector<Term>> terms_;
};

/// Mapping cost: weighted distance between the targets of every two-qubit
/// gate, plus weighted distance between the uncommon qubits of each gate and
/// its parents.
inline double sa_cost(const Circuit& c, const Mapping& m, const CouplingGraph& g, const SaConfig& cfg = {}) {
  DependencyDag dag(c);
  return PairCost(c, dag, cfg.gate_weight_decay).evaluate(m, g);
}

}  // namespace mlqls
