#pragma once

#include "mlqls/device.hpp"
#include "mlqls/region.hpp"

#include <limits>
#include <queue>
#include <vector>

namespace mlqls {

/// Maximum-cardinality bipartite matching (Hopcroft-Karp). `adj[l]` lists
/// right vertices of left vertex l. Returns the right partner of each left
/// vertex, or -1.
inline std::vector<int> hopcroft_karp(const std::vector<std::vector<int>>& adj, int num_right) {
  const int nl = static_cast<int>(adj.size());
  constexpr int kInf = std::numeric_limits<int>::max();
  std::vector<int> match_l(nl, -1), match_r(num_right, -1), layer(nl);

  auto bfs = [&]() {
    std::queue<int> q;
    bool reachable_free = false;
    for (int l = 0; l < nl; ++l) {
      if (match_l[l] < 0) {
        layer[l] = 0;
        q.push(l);
      } else {
        layer[l] = kInf;
      }
    }
    while (!q.empty()) {
      int l = q.front();
      q.pop();
      for (int r : adj[l]) {
        int next = match_r[r];
        if (next < 0) {
          reachable_free = true;
        } else if (layer[next] == kInf) {
          layer[next] = layer[l] + 1;
          q.push(next);
        }
      }
    }
    return reachable_free;
  };

  auto dfs = [&](auto&& self, int l) -> bool {
    for (int r : adj[l]) {
      int next = match_r[r];
      if (next < 0 || (layer[next] == layer[l] + 1 && self(self, next))) {
        match_l[l] = r;
        match_r[r] = l;
        return true;
      }
    }
    layer[l] = kInf;
    return false;
  };

  while (bfs()) {
    for (int l = 0; l < nl; ++l) {
      if (match_l[l] < 0) dfs(dfs, l);
    }
  }
  return match_l;
}

/// Starting mapping for refinement: a maximum matching of program qubits to
/// sites in their regions. Qubits left unmatched take the free site closest
/// to their region.
inline Mapping initial_matching(const MappingRegion& regions, const CouplingGraph& g) {
  const int nq = regions.num_qubits();
  const int np = g.num_physical();
  if (nq > np) throw InvalidInput("more program qubits than physical qubits");
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(nq));
  for (Qubit q = 0; q < nq; ++q) adj[q].assign(regions.sites(q).begin(), regions.sites(q).end());

  Mapping m = hopcroft_karp(adj, np);
  std::vector<char> used(static_cast<std::size_t>(np), 0);
  for (PhysQubit p : m) {
    if (p >= 0) used[p] = 1;
  }
  for (Qubit q = 0; q < nq; ++q) {
    if (m[q] >= 0) continue;
    PhysQubit best = kNoQubit;
    int best_d = std::numeric_limits<int>::max();
    for (PhysQubit p = 0; p < np; ++p) {
      if (used[p]) continue;
      int d = std::numeric_limits<int>::max();
      for (PhysQubit s : regions.sites(q)) d = std::min(d, g.dist(s, p));
      if (regions.sites(q).empty()) d = 0;
      if (d < best_d) {
        best_d = d;
        best = p;
      }
    }
    m[q] = best;
    used[best] = 1;
  }
  return m;
}

}  // namespace mlqls
