#pragma once

#include "mlqls/circuit.hpp"
#include "mlqls/device.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <vector>

namespace mlqls {

/// Minimum SWAP count by breadth-first search over (layout, executed set)
/// states, starting from every injective initial mapping at once. Shares no
/// code with the solvers: dependencies are recomputed from the gate list and
/// the only pruning is duplicate-state detection. Returns none when more
/// than `max_swaps` SWAPs would be needed.
inline std::optional<int> optimal_oracle(const Circuit& c, const CouplingGraph& g, int max_swaps,
                                         int max_physical = 6, int max_gates = 16) {
  const int np = g.num_physical();
  const int nq = c.num_qubits();
  const int n = static_cast<int>(c.size());
  if (np > max_physical || n > max_gates || n > 63) throw InstanceTooLarge("oracle instance too large");
  if (nq > np) throw InvalidInput("more program qubits than physical qubits");

  std::vector<std::uint64_t> need(static_cast<std::size_t>(n), 0);
  if (!c.commutable()) {
    if (c.has_explicit_dependencies()) {
      for (auto [a, b] : c.explicit_dependencies()) need[b] |= 1ULL << a;
    } else {
      for (int j = 0; j < n; ++j) {
        for (int i = 0; i < j; ++i) {
          bool share = false;
          for (Qubit q : c.gate(j).targets()) share = share || c.gate(i).acts_on(q);
          if (share) need[j] |= 1ULL << i;
        }
      }
    }
  }
  const std::uint64_t all = (1ULL << n) - 1;

  using Layout = std::vector<int>;  // program qubit -> site
  auto run_gates = [&](const Layout& m, std::uint64_t done) {
    for (bool progress = true; progress;) {
      progress = false;
      for (int i = 0; i < n; ++i) {
        if ((done >> i) & 1ULL) continue;
        if ((need[i] & done) != need[i]) continue;
        const Gate& gate = c.gate(i);
        if (gate.two_qubit()) {
          int a = m[gate.qubits[0]], b = m[gate.qubits[1]];
          if (std::find(g.neighbors(a).begin(), g.neighbors(a).end(), b) == g.neighbors(a).end()) continue;
        }
        done |= 1ULL << i;
        progress = true;
      }
    }
    return done;
  };

  std::map<std::pair<Layout, std::uint64_t>, int> seen;
  std::vector<std::pair<Layout, std::uint64_t>> frontier;

  std::vector<int> sites(static_cast<std::size_t>(np));
  std::iota(sites.begin(), sites.end(), 0);
  std::map<Layout, char> starts;
  do {
    Layout m(sites.begin(), sites.begin() + nq);
    if (starts.emplace(m, 1).second) {
      std::uint64_t done = run_gates(m, 0);
      if (done == all) return 0;
      if (seen.emplace(std::make_pair(m, done), 0).second) frontier.emplace_back(m, done);
    }
  } while (std::next_permutation(sites.begin(), sites.end()));

  for (int depth = 1; depth <= max_swaps; ++depth) {
    std::vector<std::pair<Layout, std::uint64_t>> next;
    for (const auto& [m, done] : frontier) {
      for (const auto& [a, b] : g.edges()) {
        Layout m2 = m;
        for (int& p : m2) {
          if (p == a) {
            p = b;
          } else if (p == b) {
            p = a;
          }
        }
        std::uint64_t d2 = run_gates(m2, done);
        if (d2 == all) return depth;
        if (seen.emplace(std::make_pair(m2, d2), depth).second) next.emplace_back(std::move(m2), d2);
      }
    }
    frontier = std::move(next);
    if (frontier.empty()) break;
  }
  return std::nullopt;
}

}  // namespace mlqls
