#pragma once

#include "mlqls/circuit.hpp"
#include "mlqls/device.hpp"
#include "mlqls/region.hpp"
#include "mlqls/solution.hpp"
#include "mlqls/srefine/cost.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <unordered_set>
#include <vector>

namespace mlqls {

struct AStarConfig {
  double alpha = 0.5;  // lookahead (one-hop-ready) distance weight
  double beta = 0.5;   // related-qubit distance weight
  double gamma = 0.1;  // per unexecuted two-qubit gate
  std::size_t state_threshold = 100;  // trim the open list when it grows past this
  std::size_t trim_keep = 50;         // states kept after trimming
  double region_escape_prob = 0.1;    // chance to expand a SWAP leaving a qubit's region
  std::size_t max_expansions = 0;     // 0: 4000 + 400 * |G2|; past it the search turns greedy

  void validate() const {
    if (alpha < 0 || beta < 0 || gamma < 0) throw InvalidInput("A* weights must be non-negative");
    if (trim_keep < 1 || state_threshold < trim_keep) throw InvalidInput("A* requires s >= k >= 1");
    if (region_escape_prob < 0.0 || region_escape_prob > 1.0) throw InvalidInput("region_escape_prob must lie in [0,1]");
  }
};

/// Circuit-side data shared by every search over one circuit.
class RoutingProblem {
 public:
  RoutingProblem(const Circuit& c, const CouplingGraph& g) : circuit_(&c), graph_(&g), dag_(c) {
    if (c.num_qubits() > g.num_physical()) throw InvalidInput("more program qubits than physical qubits");
    for (GateId id = 0; id < static_cast<GateId>(c.size()); ++id) {
      if (dag_.preds(id).empty()) roots_.push_back(id);
    }
  }

  [[nodiscard]] const Circuit& circuit() const noexcept { return *circuit_; }
  [[nodiscard]] const CouplingGraph& graph() const noexcept { return *graph_; }
  [[nodiscard]] const DependencyDag& dag() const noexcept { return dag_; }
  [[nodiscard]] const std::vector<GateId>& roots() const noexcept { return roots_; }
  [[nodiscard]] int num_two_qubit() const noexcept { return static_cast<int>(circuit_->num_two_qubit_gates()); }

 private:
  const Circuit* circuit_;
  const CouplingGraph* graph_;
  DependencyDag dag_;
  std::vector<GateId> roots_;
};

/// Progress through the circuit under a current layout. `ready` holds the
/// two-qubit gates whose predecessors are all executed but whose targets are
/// not adjacent; every other executable gate has already been executed.
struct RouteState {
  Mapping layout;
  std::vector<Qubit> occupant;
  std::vector<std::uint64_t> done;
  std::vector<GateId> ready;
  int executed = 0;
  int executed_two = 0;

  [[nodiscard]] bool is_done(GateId g) const { return (done[g >> 6] >> (g & 63)) & 1ULL; }
  void mark(GateId g) { done[g >> 6] |= 1ULL << (g & 63); }

  [[nodiscard]] std::uint64_t hash() const {
    std::uint64_t h = 1469598103934665603ULL;
    for (PhysQubit p : layout) h = (h ^ static_cast<std::uint64_t>(p + 1)) * 1099511628211ULL;
    for (std::uint64_t w : done) h = splitmix64(h ^ w);
    return h;
  }
};

/// Executes every gate that became executable. Executed gates are appended
/// to `out` when given.
inline void execute_ready(const RoutingProblem& prob, RouteState& st, std::vector<GateId>* out) {
  const Circuit& c = prob.circuit();
  const CouplingGraph& g = prob.graph();
  const DependencyDag& dag = prob.dag();
  std::vector<GateId> pending;
  pending.swap(st.ready);
  std::sort(pending.begin(), pending.end(), std::greater<>());
  while (!pending.empty()) {
    GateId id = pending.back();
    pending.pop_back();
    const Gate& gate = c.gate(id);
    if (gate.two_qubit() && !g.adjacent(st.layout[gate.qubits[0]], st.layout[gate.qubits[1]])) {
      st.ready.push_back(id);
      continue;
    }
    st.mark(id);
    ++st.executed;
    if (gate.two_qubit()) ++st.executed_two;
    if (out) out->push_back(id);
    for (GateId s : dag.succs(id)) {
      bool all = true;
      for (GateId p : dag.preds(s)) {
        if (!st.is_done(p)) {
          all = false;
          break;
        }
      }
      if (all) pending.push_back(s);
    }
  }
  std::sort(st.ready.begin(), st.ready.end());
}

inline RouteState initial_route_state(const RoutingProblem& prob, const Mapping& m0, std::vector<GateId>* out) {
  const int np = prob.graph().num_physical();
  if (!is_valid_mapping(m0, prob.circuit().num_qubits(), np)) throw InvalidInput("initial mapping is not injective");
  RouteState st;
  st.layout = m0;
  st.occupant = inverse_mapping(m0, np);
  st.done.assign((prob.circuit().size() + 63) / 64, 0);
  st.ready = prob.roots();
  execute_ready(prob, st, out);
  return st;
}

inline void swap_sites(RouteState& st, PhysQubit a, PhysQubit b) {
  Qubit qa = st.occupant[a], qb = st.occupant[b];
  st.occupant[a] = qb;
  st.occupant[b] = qa;
  if (qa != kNoQubit) st.layout[qa] = b;
  if (qb != kNoQubit) st.layout[qb] = a;
}

/// Lookahead cost of a search state. Each distance term is normalised by
/// its gate count times |Q| and contributes 0 when its gate set is empty.
/// `unexecuted` counts every two-qubit gate not yet executed, ready ones
/// included.
inline double heuristic_h(const RoutingProblem& prob, const Mapping& layout, std::span<const GateId> ready,
                          int unexecuted, const AStarConfig& cfg) {
  const Circuit& c = prob.circuit();
  const CouplingGraph& g = prob.graph();
  const DependencyDag& dag = prob.dag();
  const double nq = std::max(1, c.num_qubits());
  auto d = [&](Qubit a, Qubit b) { return static_cast<double>(g.dist(layout[a], layout[b])); };

  double h = cfg.gamma * unexecuted;
  if (ready.empty()) return h;

  double ready_sum = 0.0;
  std::vector<GateId> one_hop;
  for (GateId id : ready) {
    const Gate& gate = c.gate(id);
    ready_sum += d(gate.qubits[0], gate.qubits[1]);
    for (GateId ch : dag.children(id)) {
      if (std::find(one_hop.begin(), one_hop.end(), ch) == one_hop.end()) one_hop.push_back(ch);
    }
  }
  h += ready_sum / (static_cast<double>(ready.size()) * nq);
  if (one_hop.empty()) return h;

  double hop_sum = 0.0, related_sum = 0.0;
  for (GateId id : one_hop) {
    const Gate& gate = c.gate(id);
    hop_sum += d(gate.qubits[0], gate.qubits[1]);
    for (GateId p : dag.parents(id)) {
      Qubit a, b;
      if (uncommon_qubits(gate, c.gate(p), a, b)) related_sum += d(a, b);
    }
  }
  const double norm = static_cast<double>(one_hop.size()) * nq;
  return h + cfg.alpha * hop_sum / norm + cfg.beta * related_sum / norm;
}

inline double heuristic_h(const RoutingProblem& prob, const RouteState& st, const AStarConfig& cfg) {
  return heuristic_h(prob, st.layout, st.ready, prob.num_two_qubit() - st.executed_two, cfg);
}

struct RouteResult {
  QlsSolution solution;
  std::size_t expansions = 0;
};

/// Replays `path` from `m0`, grouping gates into blocks. SWAPs with no gate
/// executed in between share one gap.
inline QlsSolution schedule_swaps(const RoutingProblem& prob, const Mapping& m0, std::span<const Edge> path) {
  QlsSolution sol;
  sol.gate_block.assign(prob.circuit().size(), -1);
  std::vector<GateId> executed;
  RouteState st = initial_route_state(prob, m0, &executed);
  sol.block_mappings.push_back(st.layout);
  for (GateId id : executed) sol.gate_block[id] = 0;

  std::vector<Edge> pending;
  for (const Edge& e : path) {
    executed.clear();
    swap_sites(st, e.first, e.second);
    pending.push_back(e);
    execute_ready(prob, st, &executed);
    if (executed.empty()) continue;
    const int gap = sol.num_blocks() - 1;
    for (const Edge& s : pending) sol.swaps.push_back({s.first, s.second, gap});
    pending.clear();
    sol.block_mappings.push_back(st.layout);
    for (GateId id : executed) sol.gate_block[id] = sol.num_blocks() - 1;
  }
  if (!pending.empty()) {
    const int gap = sol.num_blocks() - 1;
    for (const Edge& s : pending) sol.swaps.push_back({s.first, s.second, gap});
    sol.block_mappings.push_back(st.layout);
  }
  if (st.executed != static_cast<int>(prob.circuit().size())) {
    throw Error("SWAP path leaves gates unexecuted");
  }
  return sol;
}

namespace detail {

struct OpenEntry {
  std::unique_ptr<RouteState> state;
  double f = 0.0;
  int g = 0;
  int link = -1;
  std::uint64_t seq = 0;
  bool progressed = true;  // arriving SWAP executed at least one gate
};

// Heap order: the top is the entry with the lowest f, then the most executed
// gates, then the earliest created.
struct WorseEntry {
  bool operator()(const OpenEntry& a, const OpenEntry& b) const {
    if (a.f != b.f) return a.f > b.f;
    if (a.state->executed != b.state->executed) return a.state->executed < b.state->executed;
    return a.seq > b.seq;
  }
};

struct PathLink {
  int parent;
  Edge swap;
};

}  // namespace detail

/// A*-based SWAP insertion. Starting from `m0`, executes all executable
/// gates, then searches over SWAP sequences (g = SWAPs so far, h as in
/// heuristic_h) until every gate is executed. Candidate SWAPs move a qubit of
/// a ready gate closer to its target without moving the displaced qubit away
/// from its own target. SWAPs that move a qubit out of its region are
/// expanded only with probability `region_escape_prob`. When the open list
/// exceeds `state_threshold` only the `trim_keep` best states are retained.
inline RouteResult astar_insert(const RoutingProblem& prob, const Mapping& m0, const MappingRegion* regions,
                                const AStarConfig& cfg, Rng& rng) {
  cfg.validate();
  const Circuit& c = prob.circuit();
  const CouplingGraph& g = prob.graph();
  const int total = static_cast<int>(c.size());

  RouteState root = initial_route_state(prob, m0, nullptr);
  RouteResult result;
  if (root.executed == total) {
    result.solution = schedule_swaps(prob, m0, {});
    return result;
  }

  const std::size_t max_expansions =
      cfg.max_expansions > 0 ? cfg.max_expansions : 4000 + 400 * static_cast<std::size_t>(prob.num_two_qubit());

  std::vector<detail::PathLink> links;
  std::vector<detail::OpenEntry> open;
  std::unordered_set<std::uint64_t> seen;
  std::uint64_t seq = 0;
  detail::WorseEntry worse;

  auto push = [&](std::unique_ptr<RouteState> st, int g_cost, double h, int parent_link, Edge swap,
                  bool progressed) {
    links.push_back({parent_link, swap});
    detail::OpenEntry e;
    e.state = std::move(st);
    e.g = g_cost;
    e.f = g_cost + h;
    e.link = static_cast<int>(links.size()) - 1;
    e.seq = seq++;
    e.progressed = progressed;
    open.push_back(std::move(e));
    std::push_heap(open.begin(), open.end(), worse);
  };

  auto trim = [&](std::size_t keep) {
    std::sort(open.begin(), open.end(), [&](const auto& a, const auto& b) { return worse(b, a); });
    open.resize(keep);
    std::make_heap(open.begin(), open.end(), worse);
  };

  seen.insert(root.hash());
  double h0 = heuristic_h(prob, root, cfg);
  push(std::make_unique<RouteState>(std::move(root)), 0, h0, -1, {kNoQubit, kNoQubit}, true);

  std::vector<int> nearest(static_cast<std::size_t>(c.num_qubits()));
  std::vector<int> target(static_cast<std::size_t>(c.num_qubits()));
  std::vector<char> edge_used(g.num_edges(), 0);
  std::vector<int> edge_list;

  struct Candidate {
    PhysQubit a, b;
  };
  std::vector<Candidate> cands;

  while (!open.empty()) {
    std::pop_heap(open.begin(), open.end(), worse);
    detail::OpenEntry cur = std::move(open.back());
    open.pop_back();
    const RouteState& st = *cur.state;

    if (st.executed == total) {
      std::vector<Edge> path;
      for (int l = cur.link; l >= 0 && links[l].parent >= 0; l = links[l].parent) path.push_back(links[l].swap);
      std::reverse(path.begin(), path.end());
      result.solution = schedule_swaps(prob, m0, path);
      return result;
    }
    ++result.expansions;
    const bool greedy = result.expansions > max_expansions;

    // Nearest ready-gate partner of every qubit that has one.
    std::fill(target.begin(), target.end(), kNoQubit);
    std::fill(nearest.begin(), nearest.end(), std::numeric_limits<int>::max());
    for (GateId id : st.ready) {
      const Gate& gate = c.gate(id);
      int dd = g.dist(st.layout[gate.qubits[0]], st.layout[gate.qubits[1]]);
      for (int k = 0; k < 2; ++k) {
        Qubit x = gate.qubits[k], t = gate.qubits[1 - k];
        if (dd < nearest[x]) {
          nearest[x] = dd;
          target[x] = t;
        }
      }
    }

    auto collect = [&](bool prune) {
      cands.clear();
      edge_list.clear();
      for (GateId id : st.ready) {
        const Gate& gate = c.gate(id);
        for (Qubit x : gate.targets()) {
          if (prune && target[x] == kNoQubit) continue;
          PhysQubit px = st.layout[x];
          for (PhysQubit n : g.neighbors(px)) {
            int eid = g.edge_id(px, n);
            if (edge_used[eid]) continue;
            if (prune) {
              Qubit t = target[x];
              if (g.dist(n, st.layout[t]) >= g.dist(px, st.layout[t])) continue;
              Qubit y = st.occupant[n];
              if (y != kNoQubit && target[y] != kNoQubit &&
                  g.dist(px, st.layout[target[y]]) > g.dist(n, st.layout[target[y]])) {
                continue;
              }
              if (!cur.progressed && links[cur.link].swap == Edge{std::min(px, n), std::max(px, n)}) continue;
            }
            edge_used[eid] = 1;
            edge_list.push_back(eid);
            cands.push_back({std::min(px, n), std::max(px, n)});
          }
        }
      }
      for (int eid : edge_list) edge_used[eid] = 0;
    };

    collect(true);
    std::size_t pushed = 0;
    double best_forced_f = std::numeric_limits<double>::infinity();
    std::unique_ptr<RouteState> best_forced;
    Edge best_forced_swap{};
    bool best_forced_progress = false;
    double best_forced_h = 0.0;

    auto make_child = [&](const Candidate& cd, bool& progressed) {
      auto child = std::make_unique<RouteState>(st);
      swap_sites(*child, cd.a, cd.b);
      int before = child->executed;
      execute_ready(prob, *child, nullptr);
      progressed = child->executed > before;
      return child;
    };

    for (const Candidate& cd : cands) {
      bool escape = false;
      if (regions) {
        Qubit qa = st.occupant[cd.a], qb = st.occupant[cd.b];
        escape = (qa != kNoQubit && !regions->contains(qa, cd.b)) || (qb != kNoQubit && !regions->contains(qb, cd.a));
      }
      bool progressed = false;
      auto child = make_child(cd, progressed);
      double h = heuristic_h(prob, *child, cfg);
      if (escape && uniform_real(rng) >= cfg.region_escape_prob) {
        if (cur.g + 1 + h < best_forced_f) {
          best_forced_f = cur.g + 1 + h;
          best_forced = std::move(child);
          best_forced_swap = {cd.a, cd.b};
          best_forced_progress = progressed;
          best_forced_h = h;
        }
        continue;
      }
      if (!seen.insert(child->hash()).second) continue;
      push(std::move(child), cur.g + 1, h, cur.link, {cd.a, cd.b}, progressed);
      ++pushed;
    }

    if (pushed == 0 && open.empty()) {
      // Safety valve: nothing left to explore, force the cheapest SWAP.
      if (!best_forced) {
        collect(false);
        for (const Candidate& cd : cands) {
          bool progressed = false;
          auto child = make_child(cd, progressed);
          double h = heuristic_h(prob, *child, cfg);
          if (cur.g + 1 + h < best_forced_f) {
            best_forced_f = cur.g + 1 + h;
            best_forced = std::move(child);
            best_forced_swap = {cd.a, cd.b};
            best_forced_progress = progressed;
            best_forced_h = h;
          }
        }
      }
      if (!best_forced) throw Error("A* search cannot make progress");
      seen.insert(best_forced->hash());
      push(std::move(best_forced), cur.g + 1, best_forced_h, cur.link, best_forced_swap, best_forced_progress);
    }

    if (greedy) {
      if (open.size() > 1) trim(1);
    } else if (open.size() > cfg.state_threshold) {
      trim(cfg.trim_keep);
    }
  }
  throw Error("A* search exhausted its open list");
}

inline QlsSolution astar_insert(const Circuit& c, const CouplingGraph& g, const Mapping& m0,
                                const MappingRegion* regions, const AStarConfig& cfg, Rng& rng) {
  RoutingProblem prob(c, g);
  return astar_insert(prob, m0, regions, cfg, rng).solution;
}

}  // namespace mlqls
