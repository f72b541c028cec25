#pragma once

#include "mlqls/circuit.hpp"
#include "mlqls/device.hpp"
#include "mlqls/json_io.hpp"
#include "mlqls/region.hpp"
#include "mlqls/solution.hpp"
#include "mlqls/srefine/cost.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>
#include <vector>

namespace mlqls {

enum class ClusterKind { program, physical };

/// Partition of fine indices into coarse cells.
struct ClusterMap {
  ClusterKind kind = ClusterKind::program;
  std::vector<int> fine_to_coarse;
  std::vector<std::vector<int>> coarse_to_fine;

  [[nodiscard]] int num_fine() const noexcept { return static_cast<int>(fine_to_coarse.size()); }
  [[nodiscard]] int num_coarse() const noexcept { return static_cast<int>(coarse_to_fine.size()); }

  /// Renumbers cells by their smallest member and rebuilds the inverse.
  void normalize() {
    const int nc = 1 + (fine_to_coarse.empty() ? -1 : *std::max_element(fine_to_coarse.begin(), fine_to_coarse.end()));
    std::vector<int> first(static_cast<std::size_t>(nc), -1);
    for (int f = 0; f < num_fine(); ++f) {
      if (first[fine_to_coarse[f]] < 0) first[fine_to_coarse[f]] = f;
    }
    std::vector<int> order;
    for (int k = 0; k < nc; ++k) {
      if (first[k] >= 0) order.push_back(k);
    }
    std::sort(order.begin(), order.end(), [&](int a, int b) { return first[a] < first[b]; });
    std::vector<int> rename(static_cast<std::size_t>(nc), -1);
    for (int i = 0; i < static_cast<int>(order.size()); ++i) rename[order[i]] = i;
    coarse_to_fine.assign(order.size(), {});
    for (int f = 0; f < num_fine(); ++f) {
      fine_to_coarse[f] = rename[fine_to_coarse[f]];
      coarse_to_fine[fine_to_coarse[f]].push_back(f);
    }
  }
};

/// Number of two-qubit gates on each program-qubit pair (symmetric, row-major).
/// With `decay` in (0,1) each gate counts with its depth weight instead.
inline std::vector<double> affinity(const Circuit& c, double decay = 0.0) {
  const int n = c.num_qubits();
  std::vector<double> a(static_cast<std::size_t>(n) * n, 0.0);
  std::vector<double> w;
  if (decay > 0.0) {
    DependencyDag dag(c);
    w = gate_weights(c, dag, decay);
  }
  for (GateId g = 0; g < static_cast<GateId>(c.size()); ++g) {
    const Gate& gate = c.gate(g);
    if (!gate.two_qubit()) continue;
    double v = w.empty() ? 1.0 : w[g];
    a[static_cast<std::size_t>(gate.qubits[0]) * n + gate.qubits[1]] += v;
    a[static_cast<std::size_t>(gate.qubits[1]) * n + gate.qubits[0]] += v;
  }
  return a;
}

struct ClusterOptions {
  double affinity_decay = 0.0;  // 0: plain gate counts
};

/// Pairs program qubits in descending affinity (ties: lower index pair
/// first), accepting a pair only when both are unclustered and mapped to
/// adjacent physical qubits by `m`. Remaining singletons join the smallest
/// physically adjacent cell of size at most 2; qubits that take part in
/// two-qubit gates are placed before idle ones.
inline ClusterMap cluster_program(const Circuit& c, const Mapping& m, const CouplingGraph& g,
                                  const ClusterOptions& opt = {}) {
  const int n = c.num_qubits();
  if (!is_valid_mapping(m, n, g.num_physical())) throw InvalidInput("clustering needs a valid mapping");
  auto a = affinity(c, opt.affinity_decay);

  std::vector<std::tuple<double, Qubit, Qubit>> pairs;
  for (Qubit q = 0; q < n; ++q) {
    for (Qubit r = q + 1; r < n; ++r) {
      double v = a[static_cast<std::size_t>(q) * n + r];
      if (v > 0) pairs.emplace_back(v, q, r);
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const auto& x, const auto& y) {
    if (std::get<0>(x) != std::get<0>(y)) return std::get<0>(x) > std::get<0>(y);
    return std::tie(std::get<1>(x), std::get<2>(x)) < std::tie(std::get<1>(y), std::get<2>(y));
  });

  std::vector<int> cell(static_cast<std::size_t>(n), -1);
  std::vector<int> size;
  for (const auto& [v, q, r] : pairs) {
    if (cell[q] < 0 && cell[r] < 0 && g.adjacent(m[q], m[r])) {
      cell[q] = cell[r] = static_cast<int>(size.size());
      size.push_back(2);
    }
  }

  std::vector<char> active(static_cast<std::size_t>(n), 0);
  for (const Gate& gate : c.gates()) {
    if (gate.two_qubit()) active[gate.qubits[0]] = active[gate.qubits[1]] = 1;
  }
  std::vector<Qubit> leftovers;
  for (int pass = 1; pass >= 0; --pass) {
    for (Qubit q = 0; q < n; ++q) {
      if (cell[q] < 0 && active[q] == pass) leftovers.push_back(q);
    }
  }
  const auto occupant = inverse_mapping(m, g.num_physical());
  for (Qubit q : leftovers) {
    if (cell[q] >= 0) continue;
    int best = -1, best_size = 3;
    Qubit partner = kNoQubit;
    for (PhysQubit p : g.neighbors(m[q])) {
      Qubit r = occupant[p];
      if (r == kNoQubit) continue;
      int sz = cell[r] < 0 ? 1 : size[cell[r]];
      if (sz < best_size) {
        best_size = sz;
        best = cell[r];
        partner = cell[r] < 0 ? r : kNoQubit;
      }
    }
    if (partner != kNoQubit) {
      cell[q] = cell[partner] = static_cast<int>(size.size());
      size.push_back(2);
    } else if (best >= 0) {
      cell[q] = best;
      ++size[best];
    } else {
      cell[q] = static_cast<int>(size.size());
      size.push_back(1);
    }
  }

  ClusterMap cm;
  cm.kind = ClusterKind::program;
  cm.fine_to_coarse = std::move(cell);
  cm.normalize();
  return cm;
}

namespace detail {

inline bool cell_connected(const CouplingGraph& g, const std::vector<int>& sites) {
  if (sites.size() <= 1) return true;
  std::vector<char> seen(sites.size(), 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    std::size_t i = stack.back();
    stack.pop_back();
    for (std::size_t j = 0; j < sites.size(); ++j) {
      if (!seen[j] && g.adjacent(sites[i], sites[j])) {
        seen[j] = 1;
        ++count;
        stack.push_back(j);
      }
    }
  }
  return count == sites.size();
}

}  // namespace detail

/// Device clustering induced by a program clustering: the images of each
/// program cell form one physical cell. Every other physical qubit pairs
/// with an unclustered neighbour if it has one, else joins the smallest
/// neighbouring cell. Throws if a program cell's image is not connected.
inline ClusterMap cluster_physical(const CouplingGraph& g, const ClusterMap& prog, const Mapping& m) {
  const int np = g.num_physical();
  std::vector<int> cell(static_cast<std::size_t>(np), -1);
  std::vector<int> size;
  for (int k = 0; k < prog.num_coarse(); ++k) {
    std::vector<int> sites;
    for (int q : prog.coarse_to_fine[k]) sites.push_back(m[q]);
    if (!detail::cell_connected(g, sites)) {
      throw Error("inconsistent clustering: co-clustered qubits are not mapped to connected sites");
    }
    for (int p : sites) cell[p] = k;
    size.push_back(static_cast<int>(sites.size()));
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (PhysQubit p = 0; p < np; ++p) {
      if (cell[p] >= 0) continue;
      PhysQubit mate = kNoQubit;
      int best = -1;
      for (PhysQubit n : g.neighbors(p)) {
        if (cell[n] < 0) {
          mate = n;
          break;
        }
        if (best < 0 || size[cell[n]] < size[best]) best = cell[n];
      }
      if (mate != kNoQubit) {
        cell[p] = cell[mate] = static_cast<int>(size.size());
        size.push_back(2);
      } else if (best >= 0) {
        cell[p] = best;
        ++size[best];
      } else {
        continue;  // isolated vertex, handled below
      }
      changed = true;
    }
  }
  for (PhysQubit p = 0; p < np; ++p) {
    if (cell[p] < 0) {
      cell[p] = static_cast<int>(size.size());
      size.push_back(1);
    }
  }

  // Keep program cell k as physical cell k so the induced mapping stays readable.
  ClusterMap cm;
  cm.kind = ClusterKind::physical;
  cm.fine_to_coarse = std::move(cell);
  cm.coarse_to_fine.assign(size.size(), {});
  for (PhysQubit p = 0; p < np; ++p) cm.coarse_to_fine[cm.fine_to_coarse[p]].push_back(p);
  return cm;
}

struct CoarseProblem {
  Circuit circuit;
  CouplingGraph graph;
  std::vector<GateId> fine_gate;  // fine gate behind each coarse gate
};

/// Coarser circuit and device. Two cells are adjacent when some fine edge
/// joins them. Gates inside one program cell and single-qubit gates are
/// dropped; the rest keep their order, and dependencies through dropped
/// gates carry over to the nearest surviving gates.
inline CoarseProblem coarsen(const Circuit& c, const CouplingGraph& g, const ClusterMap& prog, const ClusterMap& phys) {
  std::vector<Edge> edges;
  for (const Edge& e : g.edges()) {
    int a = phys.fine_to_coarse[e.first], b = phys.fine_to_coarse[e.second];
    if (a != b) edges.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::vector<char> keep(c.size(), 0);
  for (GateId id = 0; id < static_cast<GateId>(c.size()); ++id) {
    const Gate& gate = c.gate(id);
    keep[id] = gate.two_qubit() && prog.fine_to_coarse[gate.qubits[0]] != prog.fine_to_coarse[gate.qubits[1]];
  }
  std::vector<Qubit> relabel(prog.fine_to_coarse.begin(), prog.fine_to_coarse.end());
  Subcircuit sub = subcircuit(c, keep, &relabel, prog.num_coarse());
  return {std::move(sub.circuit), CouplingGraph(phys.num_coarse(), edges, g.name() + "/coarse"),
          std::move(sub.original)};
}

/// Coarse mapping implied by a fine one.
inline Mapping induced_mapping(const Mapping& m, const ClusterMap& prog, const ClusterMap& phys) {
  Mapping out(static_cast<std::size_t>(prog.num_coarse()), kNoQubit);
  for (int k = 0; k < prog.num_coarse(); ++k) out[k] = phys.fine_to_coarse[m[prog.coarse_to_fine[k].front()]];
  return out;
}

struct InterpolateOptions {
  bool all_blocks = false;  // use every block's mapping instead of the first
};

/// Regions for the finer level: each fine qubit may use the fine sites of
/// the cell its coarse qubit occupies, plus their one-hop neighbours.
inline MappingRegion interpolate(const QlsSolution& coarse, const ClusterMap& prog, const ClusterMap& phys,
                                 const CouplingGraph& fine, const InterpolateOptions& opt = {}) {
  MappingRegion r(prog.num_fine(), fine.num_physical());
  const int nb = opt.all_blocks ? coarse.num_blocks() : 1;
  for (int b = 0; b < nb; ++b) {
    const Mapping& cm = coarse.block_mappings[b];
    for (Qubit q = 0; q < prog.num_fine(); ++q) {
      for (int p : phys.coarse_to_fine[cm[prog.fine_to_coarse[q]]]) {
        r.add(q, p);
        for (PhysQubit n : fine.neighbors(p)) r.add(q, n);
      }
    }
  }
  return r;
}

/// One level of the hierarchy. Level 0 is the input problem; level i > 0
/// was produced from level i-1 by `prog` and `phys`.
struct Level {
  Circuit circuit;
  CouplingGraph graph;
  ClusterMap prog, phys;
  std::vector<GateId> fine_gate;
};

struct LevelHierarchy {
  std::vector<Level> levels;

  [[nodiscard]] int depth() const noexcept { return static_cast<int>(levels.size()); }
};

inline json cluster_map_to_json(const ClusterMap& cm) {
  return json{{"kind", cm.kind == ClusterKind::program ? "program" : "physical"}, {"cells", cm.coarse_to_fine}};
}

inline json hierarchy_to_json(const LevelHierarchy& h) {
  json levels = json::array();
  for (std::size_t i = 0; i < h.levels.size(); ++i) {
    const Level& l = h.levels[i];
    json j{{"level", i},
           {"num_qubits", l.circuit.num_qubits()},
           {"num_gates", l.circuit.size()},
           {"num_two_qubit_gates", l.circuit.num_two_qubit_gates()},
           {"device", device_to_json(l.graph)}};
    if (i > 0) {
      j["program_clusters"] = cluster_map_to_json(l.prog);
      j["physical_clusters"] = cluster_map_to_json(l.phys);
    }
    levels.push_back(std::move(j));
  }
  return json{{"levels", levels}};
}

}  // namespace mlqls
