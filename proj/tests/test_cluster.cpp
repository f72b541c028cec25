#include "oracles.hpp"

#include <gtest/gtest.h>

#include "mlqls/cluster.hpp"
#include "mlqls/generators.hpp"
#include "mlqls/srefine/srefine.hpp"

using namespace mlqls;

namespace {

std::vector<std::vector<char>> closure(const Circuit& c) {
  const int n = static_cast<int>(c.size());
  DependencyDag dag(c);
  std::vector<std::vector<char>> r(n, std::vector<char>(n, 0));
  for (int g = 0; g < n; ++g) {
    for (GateId p : dag.preds(g)) {
      r[p][g] = 1;
      for (int k = 0; k < n; ++k) {
        if (r[k][p]) r[k][g] = 1;
      }
    }
  }
  return r;
}

bool connected(const CouplingGraph& g) {
  for (int p = 0; p < g.num_physical(); ++p) {
    if (g.dist(0, p) < 0) return false;
  }
  return true;
}

struct Case {
  Circuit circuit;
  CouplingGraph graph;
  Mapping mapping;
};

// Instances with valid mappings: QUEKO witnesses, and QAOA or random
// circuits under srefine solutions.
std::vector<Case> cases() {
  std::vector<Case> out;
  for (std::uint64_t s = 1; s <= 4; ++s) {
    CouplingGraph g = make_grid(4);
    auto q = gen_queko(g, 6, 0.5, s);
    out.push_back({q.circuit, g, q.witness});
  }
  SrefineConfig cfg;
  cfg.budget_scale = 0.001;
  cfg.threads = 1;
  std::mt19937_64 rng(4);
  for (std::uint64_t s = 1; s <= 4; ++s) {
    CouplingGraph g = make_grid(5);
    Circuit c = s % 2 ? gen_qaoa(24, s) : oracle::random_circuit(20, 40, 10, rng);
    Rng r = make_rng(s);
    Mapping m = srefine_run(c, g, nullptr, cfg, r).solution.initial_mapping();
    out.push_back({c, g, m});
  }
  return out;
}

}  // namespace

TEST(Affinity, Counts) {
  Circuit c(3);
  c.add_gate("cx", 0, 1);
  c.add_gate("cx", 1, 0);
  auto a = affinity(c);
  EXPECT_EQ(a[0 * 3 + 1], 2.0);
  EXPECT_EQ(a[1 * 3 + 0], 2.0);

  Circuit none(3);
  none.add_gate("h", 0);
  for (double v : affinity(none)) EXPECT_EQ(v, 0.0);

  Circuit ch(3);
  ch.add_gate("cx", 0, 1);
  ch.add_gate("cx", 1, 2);
  auto b = affinity(ch);
  EXPECT_EQ(b[1], 1.0);
  EXPECT_EQ(b[5], 1.0);
  EXPECT_EQ(b[2], 0.0);
}

TEST(Cluster, PairsByAffinityAndAdjacency) {
  Circuit c(4);
  for (int i = 0; i < 3; ++i) {
    c.add_gate("cx", 0, 1);
    c.add_gate("cx", 2, 3);
  }
  c.add_gate("cx", 1, 2);
  CouplingGraph g = make_path(4);
  Mapping m = identity_mapping(4);
  ClusterMap prog = cluster_program(c, m, g);
  EXPECT_EQ(prog.coarse_to_fine, (std::vector<std::vector<int>>{{0, 1}, {2, 3}}));
  ClusterMap phys = cluster_physical(g, prog, m);
  EXPECT_EQ(phys.coarse_to_fine, (std::vector<std::vector<int>>{{0, 1}, {2, 3}}));
}

TEST(Cluster, SingleQubit) {
  Circuit c(1);
  c.add_gate("h", 0);
  CouplingGraph g = make_path(2);
  ClusterMap prog = cluster_program(c, {0}, g);
  EXPECT_EQ(prog.num_coarse(), 1);
  ClusterMap phys = cluster_physical(g, prog, {0});
  EXPECT_EQ(phys.num_fine(), 2);
}

TEST(Cluster, NonAdjacentPairRejected) {
  Circuit c(2);
  c.add_gate("cx", 0, 1);
  CouplingGraph g = make_path(3);
  ClusterMap prog = cluster_program(c, {0, 2}, g);
  EXPECT_EQ(prog.num_coarse(), 2);
}

TEST(Cluster, SparesAbsorbed) {
  Circuit c(2);
  c.add_gate("cx", 0, 1);
  CouplingGraph g = make_grid(3);
  Mapping m{4, 5};
  ClusterMap prog = cluster_program(c, m, g);
  ClusterMap phys = cluster_physical(g, prog, m);
  ASSERT_EQ(phys.num_fine(), 9);
  std::vector<int> seen(9, 0);
  for (const auto& cell : phys.coarse_to_fine) {
    EXPECT_LE(cell.size(), 3u);
    for (int p : cell) ++seen[p];
  }
  for (int s : seen) EXPECT_EQ(s, 1);
  EXPECT_EQ(phys.fine_to_coarse[4], phys.fine_to_coarse[5]);
}

TEST(Cluster, InconsistentMappingThrows) {
  ClusterMap prog;
  prog.fine_to_coarse = {0, 0};
  prog.normalize();
  EXPECT_THROW(cluster_physical(make_path(3), prog, {0, 2}), Error);
}

TEST(Coarsen, Examples) {
  Circuit c(4);
  c.add_gate("cx", 0, 1);
  c.add_gate("cx", 0, 2);
  ClusterMap prog;
  prog.fine_to_coarse = {0, 0, 1, 1};
  prog.normalize();
  ClusterMap phys;
  phys.kind = ClusterKind::physical;
  phys.fine_to_coarse = {0, 0, 1, 1};
  phys.normalize();
  CoarseProblem cp = coarsen(c, make_grid(2), prog, phys);
  ASSERT_EQ(cp.circuit.size(), 1u);
  EXPECT_EQ(cp.circuit.gate(0).qubits[0], 0);
  EXPECT_EQ(cp.circuit.gate(0).qubits[1], 1);
  EXPECT_EQ(cp.fine_gate, std::vector<GateId>{1});
  EXPECT_EQ(cp.graph.num_physical(), 2);
  EXPECT_EQ(cp.graph.edges(), (std::vector<Edge>{{0, 1}}));
}

TEST(Interpolate, Examples) {
  // Coarse device of one vertex: every region is the whole device.
  Circuit c(2);
  c.add_gate("cx", 0, 1);
  CouplingGraph g = make_path(2);
  ClusterMap prog;
  prog.fine_to_coarse = {0, 0};
  prog.normalize();
  ClusterMap phys = prog;
  phys.kind = ClusterKind::physical;
  QlsSolution coarse;
  coarse.block_mappings = {{0}};
  coarse.gate_block = {};
  MappingRegion r = interpolate(coarse, prog, phys, g);
  for (Qubit q = 0; q < 2; ++q) EXPECT_EQ(std::vector<PhysQubit>(r.sites(q).begin(), r.sites(q).end()), (std::vector<PhysQubit>{0, 1}));

  // Region = own cell plus one hop.
  CouplingGraph p6 = make_path(6);
  ClusterMap pr;
  pr.fine_to_coarse = {0, 0, 1, 1, 2, 2};
  pr.normalize();
  ClusterMap ph = pr;
  ph.kind = ClusterKind::physical;
  QlsSolution cs;
  cs.block_mappings = {{1, 0, 2}};
  MappingRegion r2 = interpolate(cs, pr, ph, p6);
  EXPECT_EQ(std::vector<PhysQubit>(r2.sites(0).begin(), r2.sites(0).end()), (std::vector<PhysQubit>{1, 2, 3, 4}));
  EXPECT_EQ(std::vector<PhysQubit>(r2.sites(2).begin(), r2.sites(2).end()), (std::vector<PhysQubit>{0, 1, 2}));
}

TEST(ClusterProperties, PartitionCompressionConsistency) {
  for (const Case& k : cases()) {
    const int n = k.circuit.num_qubits();
    ClusterMap prog = cluster_program(k.circuit, k.mapping, k.graph);
    ClusterMap phys = cluster_physical(k.graph, prog, k.mapping);
    // Partition, sizes.
    std::vector<int> count(n, 0);
    for (const auto& cell : prog.coarse_to_fine) {
      EXPECT_GE(cell.size(), 1u);
      EXPECT_LE(cell.size(), 3u);
      for (int q : cell) ++count[q];
    }
    for (int v : count) EXPECT_EQ(v, 1);
    for (int q = 0; q < n; ++q) EXPECT_EQ(prog.coarse_to_fine[prog.fine_to_coarse[q]].size() > 0, true);
    // Compression.
    EXPECT_GE(prog.num_coarse(), (n + 2) / 3);
    EXPECT_LE(prog.num_coarse(), (n + 1) / 2 + 1);
    // Consistency: the physical cell of m(q) is determined by q's program cell.
    for (int q = 0; q < n; ++q) {
      for (int r = 0; r < n; ++r) {
        if (prog.fine_to_coarse[q] == prog.fine_to_coarse[r]) {
          EXPECT_EQ(phys.fine_to_coarse[k.mapping[q]], phys.fine_to_coarse[k.mapping[r]]);
        }
      }
    }
    // Image cells are connected subgraphs, so co-clustered qubits can always interact within it.
    for (const auto& cell : phys.coarse_to_fine) EXPECT_TRUE(detail::cell_connected(k.graph, cell));
  }
}

TEST(ClusterProperties, CoarseProblemIsQuotient) {
  for (const Case& k : cases()) {
    ClusterMap prog = cluster_program(k.circuit, k.mapping, k.graph);
    ClusterMap phys = cluster_physical(k.graph, prog, k.mapping);
    CoarseProblem cp = coarsen(k.circuit, k.graph, prog, phys);
    EXPECT_TRUE(connected(cp.graph));
    EXPECT_LE(cp.circuit.num_qubits(), k.circuit.num_qubits());
    // Coarse edges are exactly the crossing fine edges.
    for (int a = 0; a < cp.graph.num_physical(); ++a) {
      for (int b = a + 1; b < cp.graph.num_physical(); ++b) {
        bool crossing = false;
        for (auto [x, y] : k.graph.edges()) {
          int cx = phys.fine_to_coarse[x], cy = phys.fine_to_coarse[y];
          crossing = crossing || (cx == a && cy == b) || (cx == b && cy == a);
        }
        EXPECT_EQ(cp.graph.adjacent(a, b), crossing);
      }
    }
    // Gates: surviving = two-qubit across cells; relabelled by program cell.
    std::vector<GateId> expect;
    for (GateId g = 0; g < static_cast<GateId>(k.circuit.size()); ++g) {
      const Gate& gate = k.circuit.gate(g);
      if (gate.two_qubit() && prog.fine_to_coarse[gate.qubits[0]] != prog.fine_to_coarse[gate.qubits[1]]) {
        expect.push_back(g);
      }
    }
    ASSERT_EQ(cp.fine_gate, expect);
    for (std::size_t i = 0; i < expect.size(); ++i) {
      const Gate& fg = k.circuit.gate(expect[i]);
      const Gate& cg = cp.circuit.gate(static_cast<GateId>(i));
      EXPECT_EQ(cg.qubits[0], prog.fine_to_coarse[fg.qubits[0]]);
      EXPECT_EQ(cg.qubits[1], prog.fine_to_coarse[fg.qubits[1]]);
    }
    // Dependencies: reachability among surviving gates is preserved exactly.
    if (k.circuit.commutable()) {
      EXPECT_EQ(DependencyDag(cp.circuit).num_edges(), 0u);
      continue;
    }
    auto fine = closure(k.circuit);
    auto coarse = closure(cp.circuit);
    for (std::size_t i = 0; i < expect.size(); ++i) {
      for (std::size_t j = 0; j < expect.size(); ++j) {
        EXPECT_EQ(coarse[i][j], fine[expect[i]][expect[j]]);
      }
    }
    for (auto [a, b] : DependencyDag(cp.circuit).edges()) EXPECT_LT(a, b);
  }
}

TEST(ClusterProperties, RegionsMonotone) {
  SrefineConfig cfg;
  cfg.budget_scale = 0.001;
  cfg.threads = 1;
  for (const Case& k : cases()) {
    ClusterMap prog = cluster_program(k.circuit, k.mapping, k.graph);
    ClusterMap phys = cluster_physical(k.graph, prog, k.mapping);
    CoarseProblem cp = coarsen(k.circuit, k.graph, prog, phys);
    Rng r = make_rng(3);
    QlsSolution coarse = srefine_run(cp.circuit, cp.graph, nullptr, cfg, r).solution;
    for (bool all : {false, true}) {
      MappingRegion reg = interpolate(coarse, prog, phys, k.graph, {all});
      for (Qubit q = 0; q < k.circuit.num_qubits(); ++q) {
        EXPECT_FALSE(reg.sites(q).empty());
        for (int p : phys.coarse_to_fine[coarse.initial_mapping()[prog.fine_to_coarse[q]]]) {
          EXPECT_TRUE(reg.contains(q, p));
          for (PhysQubit nb : k.graph.neighbors(p)) EXPECT_TRUE(reg.contains(q, nb));
        }
      }
    }
  }
}

TEST(ClusterProperties, InducedMappingIsValid) {
  for (const Case& k : cases()) {
    ClusterMap prog = cluster_program(k.circuit, k.mapping, k.graph);
    ClusterMap phys = cluster_physical(k.graph, prog, k.mapping);
    Mapping im = induced_mapping(k.mapping, prog, phys);
    EXPECT_TRUE(is_valid_mapping(im, prog.num_coarse(), phys.num_coarse()));
  }
}
