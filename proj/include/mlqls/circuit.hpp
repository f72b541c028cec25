#pragma once

#include "mlqls/common.hpp"

#include <algorithm>
#include <array>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mlqls {

/// A gate on one or two program qubits. Only placement matters for layout
/// synthesis, so the name is carried verbatim (parameters included) for
/// round-tripping and never interpreted.
struct Gate {
  std::string name;
  std::array<Qubit, 2> qubits{kNoQubit, kNoQubit};
  std::uint8_t arity = 1;

  [[nodiscard]] bool two_qubit() const noexcept { return arity == 2; }
  [[nodiscard]] std::span<const Qubit> targets() const noexcept {
    return {qubits.data(), arity};
  }
  [[nodiscard]] bool acts_on(Qubit q) const noexcept {
    return qubits[0] == q || (arity == 2 && qubits[1] == q);
  }
  friend bool operator==(const Gate&, const Gate&) = default;
};

using Dependency = std::pair<GateId, GateId>;

/// Ordered gate list over `num_qubits` program qubits. Gate ids are list
/// positions. Dependencies are derived from gate order unless the circuit is
/// commutable (no dependencies at all) or carries an explicit dependency list
/// (coarse circuits inherit their finer circuit's dependencies).
class Circuit {
 public:
  Circuit() = default;
  explicit Circuit(int num_qubits, bool commutable = false)
      : num_qubits_(num_qubits), commutable_(commutable) {
    if (num_qubits < 0) throw InvalidInput("negative qubit count");
  }

  GateId add_gate(std::string name, Qubit q) {
    check_qubit(q);
    Gate g{std::move(name), {q, kNoQubit}, 1};
    gates_.push_back(std::move(g));
    return static_cast<GateId>(gates_.size() - 1);
  }

  GateId add_gate(std::string name, Qubit a, Qubit b) {
    check_qubit(a);
    check_qubit(b);
    if (a == b) throw InvalidInput("duplicate operands");
    Gate g{std::move(name), {a, b}, 2};
    gates_.push_back(std::move(g));
    ++num_two_qubit_;
    return static_cast<GateId>(gates_.size() - 1);
  }

  GateId add_gate(const Gate& g) {
    return g.two_qubit() ? add_gate(g.name, g.qubits[0], g.qubits[1]) : add_gate(g.name, g.qubits[0]);
  }

  /// Replaces order-derived dependencies. Each pair must point forward in the
  /// gate list, which keeps list order topological.
  void set_dependencies(std::vector<Dependency> deps) {
    for (auto [from, to] : deps) {
      if (from < 0 || to >= static_cast<GateId>(gates_.size()) || from >= to) {
        throw InvalidInput("dependency must point forward in the gate list");
      }
    }
    std::sort(deps.begin(), deps.end());
    deps.erase(std::unique(deps.begin(), deps.end()), deps.end());
    explicit_deps_ = std::move(deps);
    has_explicit_deps_ = true;
  }

  [[nodiscard]] int num_qubits() const noexcept { return num_qubits_; }
  [[nodiscard]] bool commutable() const noexcept { return commutable_; }
  void set_commutable(bool c) noexcept { commutable_ = c; }
  [[nodiscard]] const std::vector<Gate>& gates() const noexcept { return gates_; }
  [[nodiscard]] const Gate& gate(GateId id) const { return gates_.at(static_cast<std::size_t>(id)); }
  [[nodiscard]] std::size_t size() const noexcept { return gates_.size(); }
  [[nodiscard]] bool empty() const noexcept { return gates_.empty(); }
  [[nodiscard]] std::size_t num_two_qubit_gates() const noexcept { return num_two_qubit_; }
  [[nodiscard]] bool has_explicit_dependencies() const noexcept { return has_explicit_deps_; }
  [[nodiscard]] const std::vector<Dependency>& explicit_dependencies() const noexcept {
    return explicit_deps_;
  }

 private:
  void check_qubit(Qubit q) const {
    if (q < 0 || q >= num_qubits_) {
      throw InvalidInput("qubit index " + std::to_string(q) + " out of range");
    }
  }

  int num_qubits_ = 0;
  bool commutable_ = false;
  std::vector<Gate> gates_;
  std::size_t num_two_qubit_ = 0;
  bool has_explicit_deps_ = false;
  std::vector<Dependency> explicit_deps_;
};

/// Gate order reversed; gate i of the result is gate size()-1-i of `c`.
inline Circuit reversed(const Circuit& c) {
  Circuit r(c.num_qubits(), c.commutable());
  const auto n = static_cast<GateId>(c.size());
  for (GateId i = n - 1; i >= 0; --i) r.add_gate(c.gate(i));
  if (c.has_explicit_dependencies()) {
    std::vector<Dependency> deps;
    deps.reserve(c.explicit_dependencies().size());
    for (auto [from, to] : c.explicit_dependencies()) deps.emplace_back(n - 1 - to, n - 1 - from);
    r.set_dependencies(std::move(deps));
  }
  return r;
}

/// Dependency DAG over all gates, plus the two-qubit-only Parent/Child views
/// used by the cost functions.
class DependencyDag {
 public:
  DependencyDag() = default;

  explicit DependencyDag(const Circuit& c) {
    const std::size_t n = c.size();
    preds_.assign(n, {});
    succs_.assign(n, {});
    parents_.assign(n, {});
    children_.assign(n, {});
    two_qubit_depth_.assign(n, 0);
    if (c.commutable()) return;

    if (c.has_explicit_dependencies()) {
      for (auto [from, to] : c.explicit_dependencies()) add_edge(from, to);
      for (GateId g = 0; g < static_cast<GateId>(n); ++g) {
        const Gate& gate = c.gate(g);
        if (!gate.two_qubit()) continue;
        for (Qubit q : gate.targets()) {
          GateId best = -1;
          for (GateId p : preds_[g]) {
            if (c.gate(p).two_qubit() && c.gate(p).acts_on(q)) best = std::max(best, p);
          }
          if (best >= 0) link_parent(best, g);
        }
      }
    } else {
      std::vector<GateId> last_any(static_cast<std::size_t>(c.num_qubits()), -1);
      std::vector<GateId> last_two(static_cast<std::size_t>(c.num_qubits()), -1);
      for (GateId g = 0; g < static_cast<GateId>(n); ++g) {
        const Gate& gate = c.gate(g);
        for (Qubit q : gate.targets()) {
          if (last_any[q] >= 0) add_edge(last_any[q], g);
          if (gate.two_qubit() && last_two[q] >= 0) link_parent(last_two[q], g);
        }
        for (Qubit q : gate.targets()) {
          last_any[q] = g;
          if (gate.two_qubit()) last_two[q] = g;
        }
      }
    }

    // Longest chain of two-qubit gates strictly before each gate.
    std::vector<int> through(n, 0);
    for (GateId g = 0; g < static_cast<GateId>(n); ++g) {
      int d = 0;
      for (GateId p : preds_[g]) d = std::max(d, through[p]);
      two_qubit_depth_[g] = d;
      through[g] = d + (c.gate(g).two_qubit() ? 1 : 0);
    }
  }

  [[nodiscard]] std::size_t size() const noexcept { return preds_.size(); }
  [[nodiscard]] std::span<const GateId> preds(GateId g) const { return preds_.at(g); }
  [[nodiscard]] std::span<const GateId> succs(GateId g) const { return succs_.at(g); }
  /// The last earlier two-qubit gate on each target qubit of `g`.
  [[nodiscard]] std::span<const GateId> parents(GateId g) const { return parents_.at(g); }
  /// The next later two-qubit gate on each target qubit of `g`.
  [[nodiscard]] std::span<const GateId> children(GateId g) const { return children_.at(g); }
  /// Number of two-qubit gates on the longest dependency path ending just before `g`.
  [[nodiscard]] int two_qubit_depth(GateId g) const { return two_qubit_depth_.at(g); }
  [[nodiscard]] std::size_t num_edges() const noexcept { return num_edges_; }

  [[nodiscard]] std::vector<Dependency> edges() const {
    std::vector<Dependency> out;
    out.reserve(num_edges_);
    for (GateId g = 0; g < static_cast<GateId>(succs_.size()); ++g) {
      for (GateId s : succs_[g]) out.emplace_back(g, s);
    }
    return out;
  }

  /// Number of gates on the longest dependency chain.
  [[nodiscard]] int longest_chain() const {
    std::vector<int> len(preds_.size(), 1);
    int best = 0;
    for (std::size_t g = 0; g < preds_.size(); ++g) {
      for (GateId p : preds_[g]) len[g] = std::max(len[g], len[p] + 1);
      best = std::max(best, len[g]);
    }
    return best;
  }

 private:
  void add_edge(GateId from, GateId to) {
    auto& s = succs_[from];
    if (std::find(s.begin(), s.end(), to) != s.end()) return;
    s.push_back(to);
    preds_[to].push_back(from);
    ++num_edges_;
  }
  void link_parent(GateId parent, GateId child) {
    auto& p = parents_[child];
    if (std::find(p.begin(), p.end(), parent) != p.end()) return;
    p.push_back(parent);
    children_[parent].push_back(child);
  }

  std::vector<std::vector<GateId>> preds_, succs_, parents_, children_;
  std::vector<int> two_qubit_depth_;
  std::size_t num_edges_ = 0;
};

inline DependencyDag build_dag(const Circuit& c) { return DependencyDag(c); }

struct Subcircuit {
  Circuit circuit;
  std::vector<GateId> original;  // gate of the source circuit behind each kept gate
};

/// The gates with `keep` set, in their original order, with qubits renamed
/// through `relabel` when given. Dependencies that passed through dropped
/// gates are kept as direct dependencies on the nearest kept ancestors.
inline Subcircuit subcircuit(const Circuit& c, const std::vector<char>& keep, const std::vector<Qubit>* relabel,
                             int num_qubits) {
  Subcircuit out{Circuit(num_qubits, c.commutable()), {}};
  std::vector<GateId> new_id(c.size(), -1);
  for (GateId g = 0; g < static_cast<GateId>(c.size()); ++g) {
    if (!keep[g]) continue;
    Gate gate = c.gate(g);
    if (relabel) {
      for (std::size_t k = 0; k < gate.arity; ++k) gate.qubits[k] = (*relabel)[gate.qubits[k]];
    }
    new_id[g] = out.circuit.add_gate(gate);
    out.original.push_back(g);
  }
  if (c.commutable()) return out;

  DependencyDag dag(c);
  std::vector<std::vector<GateId>> nearest(c.size());
  std::vector<Dependency> deps;
  for (GateId g = 0; g < static_cast<GateId>(c.size()); ++g) {
    std::vector<GateId> from;
    for (GateId p : dag.preds(g)) from.insert(from.end(), nearest[p].begin(), nearest[p].end());
    std::sort(from.begin(), from.end());
    from.erase(std::unique(from.begin(), from.end()), from.end());
    if (keep[g]) {
      for (GateId f : from) deps.emplace_back(f, new_id[g]);
      nearest[g] = {new_id[g]};
    } else {
      nearest[g] = std::move(from);
    }
  }
  out.circuit.set_dependencies(std::move(deps));
  return out;
}

}  // namespace mlqls
