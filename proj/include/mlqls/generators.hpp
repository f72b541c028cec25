#pragma once

#include "mlqls/circuit.hpp"
#include "mlqls/device.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <vector>

namespace mlqls {

struct QuekoInstance {
  Circuit circuit;
  Mapping witness;  // zero-SWAP mapping that achieves the construction depth
};

/// Circuit with a known zero-SWAP solution of depth `depth`. A random
/// permutation places program qubits on the device; each layer holds
/// disjoint gates on device edges (two-qubit fill controlled by `density`,
/// the fraction of qubits covered) plus single-qubit fill. A backbone gate
/// per layer shares a qubit with the previous layer's backbone, so the
/// dependency chain is exactly `depth` long.
inline QuekoInstance gen_queko(const CouplingGraph& g, int depth, double density, std::uint64_t seed,
                               double single_density = 0.1) {
  if (depth < 1) throw InvalidInput("QUEKO depth must be >= 1");
  if (density < 0.0 || density > 1.0 || single_density < 0.0 || single_density > 1.0) {
    throw InvalidInput("QUEKO densities must lie in [0, 1]");
  }
  if (g.num_edges() == 0) throw InvalidInput("QUEKO needs a device with edges");
  Rng rng = make_rng(seed, 0x9e0c0);
  const int np = g.num_physical();

  std::vector<PhysQubit> perm(static_cast<std::size_t>(np));
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  Mapping witness = perm;  // program q sits on perm[q]
  std::vector<Qubit> owner(static_cast<std::size_t>(np));
  for (Qubit q = 0; q < np; ++q) owner[perm[q]] = q;

  Circuit c(np);
  std::vector<Edge> edges = g.edges();
  const auto target_pairs = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(density * np / 2.0)));
  Edge backbone{-1, -1};

  for (int layer = 0; layer < depth; ++layer) {
    std::vector<char> busy(static_cast<std::size_t>(np), 0);
    auto place = [&](PhysQubit a, PhysQubit b) {
      busy[a] = busy[b] = 1;
      c.add_gate("cx", owner[a], owner[b]);
    };
    if (layer == 0) {
      backbone = edges[uniform_index(rng, edges.size())];
    } else {
      PhysQubit p = uniform_index(rng, 2) == 0 ? backbone.first : backbone.second;
      auto nb = g.neighbors(p);
      backbone = {p, nb[uniform_index(rng, nb.size())]};
    }
    place(backbone.first, backbone.second);
    std::size_t placed = 1;

    std::shuffle(edges.begin(), edges.end(), rng);
    for (auto [a, b] : edges) {
      if (placed >= target_pairs) break;
      if (busy[a] || busy[b]) continue;
      place(a, b);
      ++placed;
    }
    for (PhysQubit p = 0; p < np; ++p) {
      if (!busy[p] && uniform_real(rng) < single_density) c.add_gate("h", owner[p]);
    }
  }
  return {std::move(c), std::move(witness)};
}

/// QAOA phase-splitting layer for a random 3-regular graph: one commutable
/// two-qubit gate per edge. The graph comes from the configuration model,
/// resampled until it has no self-loops or multi-edges.
inline Circuit gen_qaoa(int num_qubits, std::uint64_t seed) {
  if (num_qubits < 4) throw InvalidInput("QAOA needs at least 4 qubits");
  if (num_qubits % 2 != 0) throw InvalidInput("no 3-regular graph on an odd number of vertices");
  Rng rng = make_rng(seed, 0x9a0a);
  std::vector<Qubit> stubs;
  stubs.reserve(static_cast<std::size_t>(3 * num_qubits));
  for (Qubit q = 0; q < num_qubits; ++q) stubs.insert(stubs.end(), 3, q);

  for (int attempt = 0; attempt < 100000; ++attempt) {
    std::shuffle(stubs.begin(), stubs.end(), rng);
    std::set<std::pair<Qubit, Qubit>> seen;
    std::vector<std::pair<Qubit, Qubit>> edges;
    bool simple = true;
    for (std::size_t i = 0; i < stubs.size(); i += 2) {
      Qubit a = std::min(stubs[i], stubs[i + 1]), b = std::max(stubs[i], stubs[i + 1]);
      if (a == b || !seen.insert({a, b}).second) {
        simple = false;
        break;
      }
      edges.emplace_back(a, b);
    }
    if (!simple) continue;
    Circuit c(num_qubits, /*commutable=*/true);
    for (auto [a, b] : edges) c.add_gate("rzz(0.5)", a, b);
    return c;
  }
  throw Error("failed to sample a simple 3-regular graph");
}

enum class ChainKind { ghz, wstate };

/// Nearest-neighbour chain circuits in the style of GHZ/cat and W-state
/// preparation: every two-qubit gate acts on (i, i+1).
inline Circuit gen_chain(ChainKind kind, int num_qubits) {
  if (num_qubits < 2) throw InvalidInput("chain needs at least 2 qubits");
  Circuit c(num_qubits);
  if (kind == ChainKind::ghz) {
    c.add_gate("h", 0);
    for (Qubit i = 0; i + 1 < num_qubits; ++i) c.add_gate("cx", i, i + 1);
  } else {
    c.add_gate("x", 0);
    for (Qubit i = 0; i + 1 < num_qubits; ++i) {
      c.add_gate("ry(0.7853981633974483)", i + 1);
      c.add_gate("cz", i, i + 1);
      c.add_gate("ry(-0.7853981633974483)", i + 1);
      c.add_gate("cx", i + 1, i);
    }
  }
  return c;
}

}  // namespace mlqls
