#pragma once

#include "mlqls/circuit.hpp"
#include "mlqls/device.hpp"
#include "mlqls/solution.hpp"
#include "mlqls/srefine/cost.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <set>
#include <utility>
#include <vector>

namespace mlqls {

struct InitialMapperOptions {
  double units_per_second = 1e6;      // search nodes charged per budget second
  std::uint64_t query_node_cap = 20000;  // a query that exceeds this is treated as UNSAT
  double gate_weight_decay = 0.9;
};

struct InitialMapperResult {
  Mapping mapping;
  int accepted = 0;    // distinct interacting pairs whose constraint was kept by the search
  int considered = 0;  // distinct interacting pairs
  bool all_accepted = false;
};

namespace detail {

// Backtracking search for an injective placement of the program qubits in
// `vars` such that every accepted program edge lands on a device edge.
class Embedder {
 public:
  Embedder(const CouplingGraph& g, int nq)
      : g_(g), adj_(static_cast<std::size_t>(nq)), pos_(static_cast<std::size_t>(nq), kNoQubit),
        occ_(static_cast<std::size_t>(g.num_physical()), kNoQubit) {}

  void add_edge(Qubit a, Qubit b) {
    adj_[a].push_back(b);
    adj_[b].push_back(a);
  }
  void remove_edge(Qubit a, Qubit b) {
    adj_[a].erase(std::find(adj_[a].begin(), adj_[a].end(), b));
    adj_[b].erase(std::find(adj_[b].begin(), adj_[b].end(), a));
  }
  [[nodiscard]] bool active(Qubit q) const { return !adj_[q].empty(); }

  /// Finds a placement of every active qubit, preferring `hint` positions.
  /// Returns false on UNSAT or when `cap` nodes are spent.
  bool solve(const Mapping& hint, std::uint64_t cap, std::uint64_t& nodes, Mapping& out) {
    vars_.clear();
    for (Qubit q = 0; q < static_cast<Qubit>(adj_.size()); ++q) {
      if (active(q)) vars_.push_back(q);
    }
    std::fill(pos_.begin(), pos_.end(), kNoQubit);
    std::fill(occ_.begin(), occ_.end(), kNoQubit);
    hint_ = &hint;
    cap_ = cap;
    nodes_ = 0;
    bool ok = recurse(0);
    nodes = nodes_;
    if (ok) {
      out.assign(pos_.begin(), pos_.end());
    }
    return ok;
  }

 private:
  // Candidate sites of an unplaced qubit given the current partial placement.
  void domain(Qubit v, std::vector<PhysQubit>& dom) const {
    dom.clear();
    const int need = static_cast<int>(adj_[v].size());
    Qubit anchor = kNoQubit;
    for (Qubit u : adj_[v]) {
      if (pos_[u] != kNoQubit) {
        anchor = u;
        break;
      }
    }
    auto fits = [&](PhysQubit p) {
      if (occ_[p] != kNoQubit || g_.degree(p) < need) return false;
      for (Qubit u : adj_[v]) {
        if (pos_[u] != kNoQubit && !g_.adjacent(pos_[u], p)) return false;
      }
      return true;
    };
    if (anchor != kNoQubit) {
      for (PhysQubit p : g_.neighbors(pos_[anchor])) {
        if (fits(p)) dom.push_back(p);
      }
    } else {
      for (PhysQubit p = 0; p < g_.num_physical(); ++p) {
        if (fits(p)) dom.push_back(p);
      }
    }
  }

  bool recurse(std::size_t placed) {
    if (placed == vars_.size()) return true;
    // Most constrained unplaced qubit; qubits touching placed ones first.
    Qubit best = kNoQubit;
    std::size_t best_size = std::numeric_limits<std::size_t>::max();
    bool best_anchored = false;
    std::vector<PhysQubit> dom, best_dom;
    for (Qubit v : vars_) {
      if (pos_[v] != kNoQubit) continue;
      bool anchored = std::any_of(adj_[v].begin(), adj_[v].end(), [&](Qubit u) { return pos_[u] != kNoQubit; });
      if (best != kNoQubit && best_anchored && !anchored) continue;
      domain(v, dom);
      if (dom.empty()) return false;
      bool better = best == kNoQubit || (anchored && !best_anchored) ||
                    (anchored == best_anchored &&
                     (anchored ? dom.size() < best_size : adj_[v].size() > adj_[best].size()));
      if (better) {
        best = v;
        best_size = dom.size();
        best_anchored = anchored;
        best_dom.swap(dom);
      }
    }
    PhysQubit preferred = (*hint_)[best];
    auto it = std::find(best_dom.begin(), best_dom.end(), preferred);
    if (it != best_dom.end()) std::rotate(best_dom.begin(), it, it + 1);
    for (PhysQubit p : best_dom) {
      if (++nodes_ > cap_) return false;
      pos_[best] = p;
      occ_[p] = best;
      if (recurse(placed + 1)) return true;
      pos_[best] = kNoQubit;
      occ_[p] = kNoQubit;
      if (nodes_ > cap_) return false;
    }
    return false;
  }

  const CouplingGraph& g_;
  std::vector<std::vector<Qubit>> adj_;
  std::vector<Qubit> vars_;
  Mapping pos_;
  std::vector<Qubit> occ_;
  const Mapping* hint_ = nullptr;
  std::uint64_t cap_ = 0, nodes_ = 0;
};

// Places the qubits left at kNoQubit, each at the free site with the lowest
// weighted distance to its already placed partners.
inline Mapping complete_mapping(Mapping m, const PairCost& cost, const CouplingGraph& g) {
  const int np = g.num_physical();
  std::vector<Qubit> occ(static_cast<std::size_t>(np), kNoQubit);
  for (Qubit q = 0; q < static_cast<Qubit>(m.size()); ++q) {
    if (m[q] != kNoQubit) occ[m[q]] = q;
  }
  while (true) {
    Qubit pick = kNoQubit;
    double pick_w = -1.0;
    for (Qubit q = 0; q < static_cast<Qubit>(m.size()); ++q) {
      if (m[q] != kNoQubit) continue;
      double w = 0.0;
      for (const auto& t : cost.terms(q)) {
        if (m[t.other] != kNoQubit) w += t.weight;
      }
      if (w > pick_w) {
        pick_w = w;
        pick = q;
      }
    }
    if (pick == kNoQubit) break;
    PhysQubit site = kNoQubit;
    double site_cost = std::numeric_limits<double>::infinity();
    for (PhysQubit p = 0; p < np; ++p) {
      if (occ[p] != kNoQubit) continue;
      double s = 0.0;
      for (const auto& t : cost.terms(pick)) {
        if (m[t.other] != kNoQubit) s += t.weight * g.dist(p, m[t.other]);
      }
      if (s < site_cost) {
        site_cost = s;
        site = p;
      }
    }
    m[pick] = site;
    occ[site] = pick;
  }
  return m;
}

}  // namespace detail

/// Incremental embedding of the interaction graph. Distinct interacting
/// pairs are added in random order; each addition asks for a placement in
/// which every kept pair sits on a device edge. A pair whose addition makes
/// the query unsatisfiable (or exceeds the per-query node cap) is dropped.
/// Across all satisfiable steps the completed mapping of lowest mapping cost
/// is kept, with mappings that satisfy every pair ranked first. The empty
/// constraint set is always satisfiable, so a mapping is always produced.
inline std::optional<InitialMapperResult> initial_mapper(const Circuit& c, const CouplingGraph& g,
                                                         double budget_seconds, Rng& rng,
                                                         const InitialMapperOptions& opt = {}) {
  const int nq = c.num_qubits();
  const int np = g.num_physical();
  if (nq > np) throw InvalidInput("more program qubits than physical qubits");

  std::set<std::pair<Qubit, Qubit>> unique;
  for (const Gate& gate : c.gates()) {
    if (gate.two_qubit()) unique.insert(std::minmax(gate.qubits[0], gate.qubits[1]));
  }
  std::vector<std::pair<Qubit, Qubit>> order(unique.begin(), unique.end());
  std::shuffle(order.begin(), order.end(), rng);

  DependencyDag dag(c);
  PairCost cost(c, dag, opt.gate_weight_decay);
  WorkBudget budget(budget_seconds, opt.units_per_second);
  detail::Embedder emb(g, nq);

  InitialMapperResult best;
  best.considered = static_cast<int>(order.size());
  double best_cost = std::numeric_limits<double>::infinity();
  bool best_full = false;
  bool have = false;

  Mapping current(static_cast<std::size_t>(nq), kNoQubit);
  std::vector<Qubit> occ(static_cast<std::size_t>(np), kNoQubit);
  int accepted = 0;

  auto consider = [&](int processed) {
    Mapping full = detail::complete_mapping(current, cost, g);
    double v = cost.evaluate(full, g);
    bool is_full = accepted == processed && processed == best.considered;
    if (!have || (is_full && !best_full) || (is_full == best_full && v < best_cost - 1e-12)) {
      have = true;
      best_full = is_full;
      best_cost = v;
      best.mapping = std::move(full);
    }
  };

  auto place = [&](Qubit q, PhysQubit p) {
    current[q] = p;
    occ[p] = q;
  };

  if (order.empty()) {
    consider(0);
    best.all_accepted = true;
    return best;
  }

  int processed = 0;
  for (const auto& [a, b] : order) {
    if (budget.exhausted()) break;
    ++processed;
    const PhysQubit pa = current[a], pb = current[b];
    bool ok = false;
    if (pa != kNoQubit && pb != kNoQubit) {
      ok = g.adjacent(pa, pb);
    } else if (pa != kNoQubit || pb != kNoQubit) {
      // Extend from the placed endpoint to a free neighbour.
      Qubit fixed = pa != kNoQubit ? a : b, other = pa != kNoQubit ? b : a;
      for (PhysQubit n : g.neighbors(current[fixed])) {
        if (occ[n] == kNoQubit) {
          place(other, n);
          ok = true;
          break;
        }
      }
    } else {
      for (const Edge& e : g.edges()) {
        if (occ[e.first] == kNoQubit && occ[e.second] == kNoQubit) {
          place(a, e.first);
          place(b, e.second);
          ok = true;
          break;
        }
      }
    }
    budget.charge(1);
    if (ok) {
      emb.add_edge(a, b);
      ++accepted;
      consider(processed);
      continue;
    }

    emb.add_edge(a, b);
    std::uint64_t nodes = 0;
    Mapping found;
    bool sat = emb.solve(current, opt.query_node_cap, nodes, found);
    budget.charge(nodes);
    if (sat) {
      ++accepted;
      current = std::move(found);
      std::fill(occ.begin(), occ.end(), kNoQubit);
      for (Qubit q = 0; q < nq; ++q) {
        if (current[q] != kNoQubit) occ[current[q]] = q;
      }
      consider(processed);
    } else {
      emb.remove_edge(a, b);
    }
  }
  if (!have) {
    // Nothing was accepted; the empty constraint set is trivially satisfied.
    consider(processed);
  }
  best.accepted = accepted;
  best.all_accepted = best_full;
  return best;
}

}  // namespace mlqls
