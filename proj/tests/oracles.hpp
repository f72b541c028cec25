#pragma once

// Test-side reference implementations. Nothing here calls into the library
// beyond its plain data types, so the checks do not share code with what
// they check.

#include "mlqls/circuit.hpp"
#include "mlqls/device.hpp"
#include "mlqls/solution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace oracle {

using namespace mlqls;

/// Replays a solution on the device: blocks run in order, each gate needs its
/// order predecessors in the same or an earlier block and adjacent operands,
/// and the SWAPs of a gap must carry the occupants of one block to the next.
inline bool replay_ok(const Circuit& c, const CouplingGraph& g, const QlsSolution& sol) {
  const int nq = c.num_qubits(), np = g.num_physical();
  const int nb = static_cast<int>(sol.block_mappings.size());
  if (nb == 0 || sol.gate_block.size() != c.size()) return false;
  auto edge = [&](int a, int b) {
    for (auto [x, y] : g.edges()) {
      if ((x == a && y == b) || (x == b && y == a)) return true;
    }
    return false;
  };
  std::vector<std::vector<int>> occupant(static_cast<std::size_t>(nb), std::vector<int>(np, -1));
  for (int b = 0; b < nb; ++b) {
    const auto& m = sol.block_mappings[b];
    if (static_cast<int>(m.size()) != nq) return false;
    for (int q = 0; q < nq; ++q) {
      if (m[q] < 0 || m[q] >= np || occupant[b][m[q]] != -1) return false;
      occupant[b][m[q]] = q;
    }
  }
  for (std::size_t i = 0; i < c.size(); ++i) {
    int b = sol.gate_block[i];
    if (b < 0 || b >= nb) return false;
    const Gate& gi = c.gate(static_cast<GateId>(i));
    if (!c.commutable()) {
      for (std::size_t j = 0; j < i; ++j) {
        const Gate& gj = c.gate(static_cast<GateId>(j));
        bool share = false;
        for (int k = 0; k < gi.arity; ++k) {
          for (int l = 0; l < gj.arity; ++l) share = share || gi.qubits[k] == gj.qubits[l];
        }
        if (share && sol.gate_block[j] > b) return false;
      }
    }
    if (gi.arity == 2 && !edge(sol.block_mappings[b][gi.qubits[0]], sol.block_mappings[b][gi.qubits[1]])) {
      return false;
    }
  }
  std::vector<int> occ = occupant[0];
  int gap = 0;
  std::size_t k = 0;
  for (; gap + 1 < nb; ++gap) {
    for (; k < sol.swaps.size() && sol.swaps[k].gap == gap; ++k) {
      const Swap& s = sol.swaps[k];
      if (s.a < 0 || s.b < 0 || s.a >= np || s.b >= np || !edge(s.a, s.b)) return false;
      std::swap(occ[s.a], occ[s.b]);
    }
    if (occ != occupant[gap + 1]) return false;
  }
  return k == sol.swaps.size();
}

/// Maximum bipartite matching size by trying every assignment.
inline int brute_force_matching(const std::vector<std::vector<int>>& allowed, int num_right) {
  int best = 0;
  std::vector<char> used(static_cast<std::size_t>(num_right), 0);
  std::function<void(std::size_t, int)> go = [&](std::size_t i, int size) {
    if (i == allowed.size()) {
      best = std::max(best, size);
      return;
    }
    go(i + 1, size);
    for (int p : allowed[i]) {
      if (used[p]) continue;
      used[p] = 1;
      go(i + 1, size + 1);
      used[p] = 0;
    }
  };
  go(0, 0);
  return best;
}

/// Eq.-by-hand mapping cost: gate distances plus distances between the
/// uncommon qubits of each gate and its latest two-qubit predecessors,
/// every term weighted by decay^(two-qubit depth).
inline double reference_cost(const Circuit& c, const Mapping& m, const CouplingGraph& g, double decay) {
  const int n = static_cast<int>(c.size());
  std::vector<int> depth(n, 0);
  std::vector<std::vector<int>> parents(n);
  for (int i = 0; i < n; ++i) {
    const Gate& gi = c.gate(i);
    if (gi.arity != 2) continue;
    for (int t = 0; t < 2; ++t) {
      int last = -1;
      for (int j = i - 1; j >= 0 && last < 0 && !c.commutable(); --j) {
        const Gate& gj = c.gate(j);
        if (gj.arity == 2 && (gj.qubits[0] == gi.qubits[t] || gj.qubits[1] == gi.qubits[t])) last = j;
      }
      if (last >= 0 && std::find(parents[i].begin(), parents[i].end(), last) == parents[i].end()) {
        parents[i].push_back(last);
        depth[i] = std::max(depth[i], depth[last] + 1);
      }
    }
  }
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const Gate& gi = c.gate(i);
    if (gi.arity != 2) continue;
    double w = std::pow(decay, depth[i]);
    total += w * g.dist(m[gi.qubits[0]], m[gi.qubits[1]]);
    for (int p : parents[i]) {
      const Gate& gp = c.gate(p);
      std::vector<Qubit> a{gi.qubits[0], gi.qubits[1]}, b{gp.qubits[0], gp.qubits[1]};
      std::vector<Qubit> only_a, only_b;
      for (Qubit q : a) {
        if (std::find(b.begin(), b.end(), q) == b.end()) only_a.push_back(q);
      }
      for (Qubit q : b) {
        if (std::find(a.begin(), a.end(), q) == a.end()) only_b.push_back(q);
      }
      if (only_a.size() == 1 && only_b.size() == 1) total += w * g.dist(m[only_a[0]], m[only_b[0]]);
    }
  }
  return total;
}

/// Random circuit with `two` two-qubit gates and up to `one` single-qubit
/// gates scattered between them.
inline Circuit random_circuit(int nq, int two, int one, std::mt19937_64& rng, bool commutable = false) {
  Circuit c(nq, commutable);
  std::uniform_int_distribution<int> q(0, nq - 1);
  std::vector<int> kinds(static_cast<std::size_t>(two), 2);
  kinds.insert(kinds.end(), static_cast<std::size_t>(one), 1);
  std::shuffle(kinds.begin(), kinds.end(), rng);
  for (int k : kinds) {
    if (k == 1) {
      c.add_gate("h", q(rng));
    } else {
      int a = q(rng), b = q(rng);
      while (b == a) b = q(rng);
      c.add_gate("cx", a, b);
    }
  }
  return c;
}

/// One random edit of a solution: drop, add, move or re-aim a SWAP, permute
/// or shift one block's mapping, or move a gate to another block.
inline QlsSolution mutate(const QlsSolution& in, const CouplingGraph& g, std::mt19937_64& rng) {
  QlsSolution s = in;
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  const int nb = static_cast<int>(s.block_mappings.size());
  for (;;) {
    switch (rng() % 7) {
      case 0:
        if (s.swaps.empty()) continue;
        s.swaps.erase(s.swaps.begin() + static_cast<std::ptrdiff_t>(pick(s.swaps.size())));
        return s;
      case 1: {
        if (nb < 2) continue;
        auto [a, b] = g.edges()[pick(g.num_edges())];
        int gap = static_cast<int>(pick(static_cast<std::size_t>(nb - 1)));
        auto at = std::find_if(s.swaps.begin(), s.swaps.end(), [&](const Swap& w) { return w.gap > gap; });
        s.swaps.insert(at, Swap{a, b, gap});
        return s;
      }
      case 2: {
        if (s.swaps.empty()) continue;
        auto [a, b] = g.edges()[pick(g.num_edges())];
        Swap& w = s.swaps[pick(s.swaps.size())];
        if (w.a == a && w.b == b) continue;
        w.a = a;
        w.b = b;
        return s;
      }
      case 3: {
        auto& m = s.block_mappings[pick(static_cast<std::size_t>(nb))];
        if (m.size() < 2) continue;
        std::size_t i = pick(m.size()), j = pick(m.size());
        if (i == j) continue;
        std::swap(m[i], m[j]);
        return s;
      }
      case 4: {
        auto& m = s.block_mappings[pick(static_cast<std::size_t>(nb))];
        if (m.empty()) continue;
        m[pick(m.size())] = static_cast<PhysQubit>(pick(static_cast<std::size_t>(g.num_physical())));
        return s;
      }
      case 5: {
        if (nb < 2 || s.gate_block.empty()) continue;
        int& b = s.gate_block[pick(s.gate_block.size())];
        int nbk = static_cast<int>(pick(static_cast<std::size_t>(nb)));
        if (nbk == b) continue;
        b = nbk;
        return s;
      }
      case 6: {
        if (s.swaps.empty() || nb < 3) continue;
        Swap& w = s.swaps[pick(s.swaps.size())];
        int gap = static_cast<int>(pick(static_cast<std::size_t>(nb - 1)));
        if (gap == w.gap) continue;
        Swap moved = w;
        moved.gap = gap;
        s.swaps.erase(s.swaps.begin() + (&w - s.swaps.data()));
        auto at = std::find_if(s.swaps.begin(), s.swaps.end(), [&](const Swap& x) { return x.gap > gap; });
        s.swaps.insert(at, moved);
        return s;
      }
    }
  }
}

/// The worked example on IBM Ourense: three qubits, five gates, one SWAP.
struct Triangle {
  Circuit circuit{3};
  CouplingGraph device = make_ourense();
  QlsSolution solution;

  Triangle() {
    circuit.add_gate("cx", 0, 1);
    circuit.add_gate("h", 2);
    circuit.add_gate("cx", 1, 2);
    circuit.add_gate("h", 0);
    circuit.add_gate("cx", 0, 2);
    solution.block_mappings = {{3, 1, 2}, {1, 3, 2}};
    solution.gate_block = {0, 0, 0, 0, 1};
    solution.swaps = {{1, 3, 0}};
  }
};

}  // namespace oracle
