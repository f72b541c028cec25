#pragma once

#include "mlqls/circuit.hpp"
#include "mlqls/device.hpp"
#include "mlqls/solution.hpp"
#include "mlqls/srefine/annealing.hpp"
#include "mlqls/srefine/forward_backward.hpp"
#include "mlqls/verify.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace mlqls {

struct ExactConfig {
  int max_qubits = 16;
  int max_gates = 50;                         // after merging redundant repeats; at most 64
  double post_first_solution_budget = 100.0;  // seconds of search once a feasible solution is known
  double overall_budget = 0.0;                // seconds; 0: no extra cap
  double units_per_second = 5e5;              // search nodes per budget second
  std::optional<Mapping> hint;                // starting mapping for the upper bound
  bool symmetry_breaking = true;
  int upper_bound_starts = 3;                 // annealed starts routed for the upper bound
  std::uint64_t seed = 1;

  void validate() const {
    if (max_qubits < 1 || max_gates < 1 || max_gates > 64) throw InvalidInput("exact limits must lie in [1,64]");
    if (post_first_solution_budget <= 0.0 || overall_budget < 0.0) throw InvalidInput("exact budgets must be positive");
  }
};

struct ExactResult {
  QlsSolution solution;
  bool timed_out = false;
  bool proven_optimal = false;
  int lower_bound = 0;
  std::uint64_t nodes = 0;
};

namespace detail {

// Two-qubit skeleton of a circuit: single-qubit gates removed and repeats of
// a pair that always execute together with an earlier gate merged into it.
struct ReducedCircuit {
  Circuit circuit;                 // qubits renamed to 0..k-1
  std::vector<Qubit> original_qubit;
};

inline std::pair<Qubit, Qubit> sorted_pair(const Gate& g) {
  return {std::min(g.qubits[0], g.qubits[1]), std::max(g.qubits[0], g.qubits[1])};
}

inline ReducedCircuit reduce_for_exact(const Circuit& c) {
  std::vector<char> keep(c.size(), 0);
  for (GateId g = 0; g < static_cast<GateId>(c.size()); ++g) keep[g] = c.gate(g).two_qubit();
  Subcircuit two = subcircuit(c, keep, nullptr, c.num_qubits());
  const Circuit& t = two.circuit;
  const std::size_t n = t.size();

  std::vector<char> keep2(n, 1);
  if (t.commutable()) {
    std::vector<std::pair<Qubit, Qubit>> seen;
    for (GateId g = 0; g < static_cast<GateId>(n); ++g) {
      auto key = sorted_pair(t.gate(g));
      if (std::find(seen.begin(), seen.end(), key) != seen.end()) {
        keep2[g] = 0;
      } else {
        seen.push_back(key);
      }
    }
  } else {
    DependencyDag dag(t);
    const std::size_t words = (n + 63) / 64;
    std::vector<std::vector<std::uint64_t>> anc(n, std::vector<std::uint64_t>(words, 0));
    for (GateId g = 0; g < static_cast<GateId>(n); ++g) {
      for (GateId p : dag.preds(g)) {
        anc[g][p >> 6] |= 1ULL << (p & 63);
        for (std::size_t w = 0; w < words; ++w) anc[g][w] |= anc[p][w];
      }
    }
    auto same_pair = [&](GateId a, GateId b) {
      return sorted_pair(t.gate(a)) == sorted_pair(t.gate(b));
    };
    for (GateId g = 0; g < static_cast<GateId>(n); ++g) {
      for (GateId i : dag.preds(g)) {
        if (!same_pair(i, g)) continue;
        bool implied = std::all_of(dag.preds(g).begin(), dag.preds(g).end(), [&](GateId p) {
          return p == i || ((anc[i][p >> 6] >> (p & 63)) & 1ULL);
        });
        if (implied) {
          keep2[g] = 0;
          break;
        }
      }
    }
  }

  std::vector<Qubit> relabel(static_cast<std::size_t>(c.num_qubits()), kNoQubit);
  ReducedCircuit out;
  for (GateId g = 0; g < static_cast<GateId>(n); ++g) {
    if (!keep2[g]) continue;
    for (Qubit q : t.gate(g).targets()) {
      if (relabel[q] == kNoQubit) {
        relabel[q] = static_cast<Qubit>(out.original_qubit.size());
        out.original_qubit.push_back(q);
      }
    }
  }
  for (Qubit& q : relabel) {
    if (q == kNoQubit) q = 0;  // qubit without gates; never referenced
  }
  out.circuit = subcircuit(t, keep2, &relabel, static_cast<int>(out.original_qubit.size())).circuit;
  return out;
}

// Depth-first branch and bound with iterative deepening on the SWAP count.
// Qubits are placed lazily: a qubit gets a site only when its first gate is
// ready. This is exact because the content of sites nobody has claimed yet
// is never constrained. Qubits whose gates are all executed become anonymous
// occupants: they still move with SWAPs but their identity no longer matters.
class ExactSearch {
 public:
  ExactSearch(const Circuit& r, const CouplingGraph& g, const std::optional<std::vector<int>>& orbits,
              WorkBudget& budget)
      : r_(r), g_(g), budget_(budget), k_(r.num_qubits()), n_(static_cast<int>(r.size())) {
    full_ = n_ == 64 ? ~0ULL : ((1ULL << n_) - 1);
    DependencyDag dag(r);
    pred_.assign(n_, 0);
    qubit_gates_.assign(k_, 0);
    for (GateId id = 0; id < n_; ++id) {
      for (GateId p : dag.preds(id)) pred_[id] |= 1ULL << p;
      for (Qubit q : r.gate(id).targets()) qubit_gates_[q] |= 1ULL << id;
    }
    if (orbits) {
      for (PhysQubit p = 0; p < g.num_physical(); ++p) {
        if ((*orbits)[p] == p) reps_.push_back(p);
      }
    }
  }

  struct State {
    std::vector<int> pos;  // site, or kUnplaced / kRetired
    std::vector<int> occ;  // placed qubit on each site, kFreeSite or kRetiredSite
    std::uint64_t done = 0;
  };
  struct Event {
    bool place;
    int a, b;  // swap endpoints, or (qubit, site)
  };

  static constexpr int kUnplaced = -1;
  static constexpr int kRetired = -2;
  static constexpr int kFreeSite = -1;
  static constexpr int kRetiredSite = -3;

  State root() const {
    State s;
    s.pos.assign(k_, kUnplaced);
    s.occ.assign(g_.num_physical(), kFreeSite);
    return s;
  }

  void close(State& s) const {
    bool changed = true;
    while (changed) {
      changed = false;
      for (GateId id = 0; id < n_; ++id) {
        const std::uint64_t bit = 1ULL << id;
        if ((s.done & bit) || (pred_[id] & ~s.done)) continue;
        const Gate& gate = r_.gate(id);
        int pa = s.pos[gate.qubits[0]], pb = s.pos[gate.qubits[1]];
        if (pa >= 0 && pb >= 0 && g_.adjacent(pa, pb)) {
          s.done |= bit;
          changed = true;
        }
      }
    }
    for (Qubit q = 0; q < k_; ++q) {
      if (s.pos[q] >= 0 && (qubit_gates_[q] & ~s.done) == 0) {
        s.occ[s.pos[q]] = kRetiredSite;
        s.pos[q] = kRetired;
      }
    }
  }

  /// Admissible: a SWAP shortens one gate's distance by at most one and moves
  /// two qubits, so it serves at most two gates of a qubit-disjoint set.
  int lower_bound(const State& s) const {
    int best_single = 0;
    std::vector<std::pair<int, GateId>> open;
    for (GateId id = 0; id < n_; ++id) {
      if (s.done & (1ULL << id)) continue;
      const Gate& gate = r_.gate(id);
      int pa = s.pos[gate.qubits[0]], pb = s.pos[gate.qubits[1]];
      if (pa < 0 || pb < 0) continue;
      int d = g_.dist(pa, pb) - 1;
      best_single = std::max(best_single, d);
      if (d > 0) open.emplace_back(-d, id);
    }
    std::sort(open.begin(), open.end());
    std::uint64_t used = 0;
    int sum = 0;
    for (auto [nd, id] : open) {
      const Gate& gate = r_.gate(id);
      std::uint64_t m = (1ULL << gate.qubits[0]) | (1ULL << gate.qubits[1]);
      if (used & m) continue;
      used |= m;
      sum -= nd;
    }
    return std::max(best_single, (sum + 1) / 2);
  }

  /// Returns true when a solution with at most `limit` SWAPs exists; the
  /// event path is then in `path()`.
  bool run(int limit) {
    limit_ = limit;
    table_.clear();
    path_.clear();
    State s = root();
    close(s);
    return dfs(s, 0, -1, true, true);
  }

  [[nodiscard]] const std::vector<Event>& path() const noexcept { return path_; }
  [[nodiscard]] bool aborted() const noexcept { return aborted_; }
  [[nodiscard]] std::uint64_t nodes() const noexcept { return nodes_; }

 private:
  std::string key(const State& s) const {
    const int np = g_.num_physical();
    std::string k(static_cast<std::size_t>(np) * 2 + 8, '\0');
    for (int i = 0; i < np; ++i) {
      auto v = static_cast<std::uint16_t>(s.occ[i] + 3);
      k[2 * i] = static_cast<char>(v & 0xff);
      k[2 * i + 1] = static_cast<char>(v >> 8);
    }
    for (int b = 0; b < 8; ++b) k[2 * np + b] = static_cast<char>((s.done >> (8 * b)) & 0xff);
    return k;
  }

  bool dfs(const State& s, int g, int last_edge, bool progressed, bool may_reorder) {
    if (s.done == full_) return true;
    if (aborted_) return false;
    if (g + lower_bound(s) > limit_) return false;
    {
      auto [it, inserted] = table_.try_emplace(key(s), g);
      if (!inserted) {
        if (it->second <= g) return false;
        it->second = g;
      }
    }
    ++nodes_;
    if (budget_.charge(1)) {
      aborted_ = true;
      return false;
    }

    // Place the first unplaced qubit of the earliest ready gate.
    for (GateId id = 0; id < n_; ++id) {
      if ((s.done >> id) & 1ULL || (pred_[id] & ~s.done)) continue;
      const Gate& gate = r_.gate(id);
      Qubit q = s.pos[gate.qubits[0]] == kUnplaced ? gate.qubits[0]
                : s.pos[gate.qubits[1]] == kUnplaced ? gate.qubits[1]
                                                     : kNoQubit;
      if (q == kNoQubit) continue;
      Qubit partner = gate.qubits[0] == q ? gate.qubits[1] : gate.qubits[0];
      std::vector<int> sites;
      const bool nothing_placed = std::none_of(s.pos.begin(), s.pos.end(), [](int p) { return p != kUnplaced; });
      if (nothing_placed && !reps_.empty()) {
        sites = reps_;
      } else {
        for (PhysQubit p = 0; p < g_.num_physical(); ++p) {
          if (s.occ[p] == kFreeSite) sites.push_back(p);
        }
        if (s.pos[partner] >= 0) {
          const int at = s.pos[partner];
          std::stable_sort(sites.begin(), sites.end(), [&](int a, int b) { return g_.dist(a, at) < g_.dist(b, at); });
        }
      }
      for (int p : sites) {
        State child = s;
        child.pos[q] = p;
        child.occ[p] = q;
        close(child);
        path_.push_back({true, q, p});
        if (dfs(child, g, last_edge, progressed || child.done != s.done, false)) {
          return true;
        }
        path_.pop_back();
        if (aborted_) return false;
      }
      return false;
    }

    if (g >= limit_) return false;
    struct Child {
      int f;
      int executed;
      int edge;
      State state;
    };
    std::vector<Child> children;
    const auto& edges = g_.edges();
    for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
      auto [u, v] = edges[e];
      if (s.occ[u] < 0 && s.occ[v] < 0) continue;
      if (!progressed && last_edge >= 0) {
        if (e == last_edge) continue;
        auto [lu, lv] = edges[last_edge];
        bool disjoint = u != lu && u != lv && v != lu && v != lv;
        if (may_reorder && disjoint && e < last_edge) continue;
      }
      State child = s;
      int qu = child.occ[u], qv = child.occ[v];
      child.occ[u] = qv;
      child.occ[v] = qu;
      if (qu >= 0) child.pos[qu] = v;
      if (qv >= 0) child.pos[qv] = u;
      close(child);
      int f = g + 1 + lower_bound(child);
      if (f > limit_) continue;
      children.push_back({f, std::popcount(child.done), e, std::move(child)});
    }
    std::stable_sort(children.begin(), children.end(), [](const Child& a, const Child& b) {
      if (a.f != b.f) return a.f < b.f;
      return a.executed > b.executed;
    });
    for (Child& ch : children) {
      auto [u, v] = edges[ch.edge];
      path_.push_back({false, u, v});
      if (dfs(ch.state, g + 1, ch.edge, ch.state.done != s.done, true)) return true;
      path_.pop_back();
      if (aborted_) return false;
    }
    return false;
  }

  const Circuit& r_;
  const CouplingGraph& g_;
  WorkBudget& budget_;
  int k_, n_;
  std::uint64_t full_ = 0;
  std::vector<std::uint64_t> pred_, qubit_gates_;
  std::vector<int> reps_;
  int limit_ = 0;
  std::unordered_map<std::string, int> table_;
  std::vector<Event> path_;
  bool aborted_ = false;
  std::uint64_t nodes_ = 0;
};

}  // namespace detail

/// Number of two-qubit gates the exact solver has to handle: repeats of a
/// pair that always execute together with an earlier gate are not counted.
inline int effective_two_qubit_gates(const Circuit& c) {
  return static_cast<int>(detail::reduce_for_exact(c).circuit.size());
}

/// Whether `c` is within the exact solver's limits, counting only qubits
/// that take part in two-qubit gates.
inline bool exact_fits(const Circuit& c, int max_qubits, int max_gates) {
  detail::ReducedCircuit red = detail::reduce_for_exact(c);
  return red.circuit.num_qubits() <= max_qubits && static_cast<int>(red.circuit.size()) <= max_gates;
}

/// Minimum-SWAP block-based layout synthesis. A routed heuristic solution
/// gives the first upper bound; the search then proves or improves it,
/// raising the SWAP budget one at a time, so the first solution it finds is
/// optimal. If the budget runs out the best known solution is returned with
/// `timed_out` set.
inline ExactResult solve_exact(const Circuit& c, const CouplingGraph& g, const ExactConfig& cfg = {}) {
  cfg.validate();
  if (c.num_qubits() > g.num_physical()) throw InvalidInput("more program qubits than physical qubits");
  detail::ReducedCircuit red = detail::reduce_for_exact(c);
  const int k = red.circuit.num_qubits();
  if (k > cfg.max_qubits || static_cast<int>(red.circuit.size()) > cfg.max_gates) {
    throw InstanceTooLarge("exact solver limited to " + std::to_string(cfg.max_qubits) + " qubits and " +
                           std::to_string(cfg.max_gates) + " gates; got " + std::to_string(k) + " and " +
                           std::to_string(red.circuit.size()));
  }

  RoutingProblem prob(c, g);
  ExactResult res;
  Rng rng = make_rng(cfg.seed, 0x5eed);

  // Upper bound.
  std::vector<Mapping> starts;
  if (cfg.hint && is_valid_mapping(*cfg.hint, c.num_qubits(), g.num_physical())) starts.push_back(*cfg.hint);
  {
    DependencyDag dag(c);
    PairCost cost(c, dag, 0.9);
    for (int i = 0; i < cfg.upper_bound_starts; ++i) {
      Mapping m = identity_mapping(g.num_physical());
      std::shuffle(m.begin(), m.end(), rng);
      m.resize(static_cast<std::size_t>(c.num_qubits()));
      starts.push_back(sa_initial_mapping(cost, g, m, nullptr, SaConfig{}, rng));
    }
  }
  if (starts.empty()) starts.push_back(identity_mapping(c.num_qubits()));
  bool have = false;
  for (const Mapping& m0 : starts) {
    QlsSolution sol = forward_backward(c, g, m0, nullptr, ForwardBackwardConfig{}, rng).solution;
    if (!have || sol.swap_count() < res.solution.swap_count()) {
      res.solution = std::move(sol);
      have = true;
    }
  }

  double seconds = cfg.post_first_solution_budget;
  if (cfg.overall_budget > 0.0) seconds = std::min(seconds, cfg.overall_budget);
  WorkBudget budget(seconds, cfg.units_per_second);

  std::optional<std::vector<int>> orbits;
  if (cfg.symmetry_breaking) orbits = automorphism_orbits(g, 200000);
  detail::ExactSearch search(red.circuit, g, orbits, budget);

  res.proven_optimal = true;
  for (int limit = 0; limit < res.solution.swap_count(); ++limit) {
    res.lower_bound = limit;
    if (search.run(limit)) {
      // Recover initial sites by tracking where each site's content started.
      std::vector<int> origin(static_cast<std::size_t>(g.num_physical()));
      std::iota(origin.begin(), origin.end(), 0);
      Mapping m0(static_cast<std::size_t>(c.num_qubits()), kNoQubit);
      std::vector<char> taken(static_cast<std::size_t>(g.num_physical()), 0);
      std::vector<Edge> swaps;
      for (const auto& ev : search.path()) {
        if (ev.place) {
          m0[red.original_qubit[ev.a]] = origin[ev.b];
          taken[origin[ev.b]] = 1;
        } else {
          std::swap(origin[ev.a], origin[ev.b]);
          swaps.emplace_back(ev.a, ev.b);
        }
      }
      PhysQubit next = 0;
      for (Qubit q = 0; q < c.num_qubits(); ++q) {
        if (m0[q] != kNoQubit) continue;
        while (taken[next]) ++next;
        m0[q] = next;
        taken[next] = 1;
      }
      res.solution = schedule_swaps(prob, m0, swaps);
      res.lower_bound = res.solution.swap_count();
      break;
    }
    if (search.aborted()) {
      res.timed_out = true;
      res.proven_optimal = false;
      break;
    }
  }
  if (res.proven_optimal) res.lower_bound = res.solution.swap_count();
  res.nodes = search.nodes();

  VerifyReport report = verify(c, g, res.solution);
  if (!report.ok()) throw Error("internal error: exact solution fails verification: " + report.summary());
  res.solution.depth = asap_depth(c, g, res.solution);
  return res;
}

}  // namespace mlqls
