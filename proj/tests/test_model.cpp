#include "oracles.hpp"

#include <gtest/gtest.h>

#include "mlqls/generators.hpp"
#include "mlqls/json_io.hpp"
#include "mlqls/qasm.hpp"
#include "mlqls/verify.hpp"

#include <deque>
#include <map>
#include <random>

using namespace mlqls;

TEST(Qasm, ParsesGatesInFileOrder) {
  Circuit c = parse_qasm("OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[2];\nh q[0];\ncx q[0],q[1];\n");
  ASSERT_EQ(c.num_qubits(), 2);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_FALSE(c.gate(0).two_qubit());
  EXPECT_EQ(c.gate(0).qubits[0], 0);
  EXPECT_TRUE(c.gate(1).two_qubit());
  EXPECT_EQ(c.gate(1).qubits[0], 0);
  EXPECT_EQ(c.gate(1).qubits[1], 1);
}

TEST(Qasm, EmptyBody) {
  Circuit c = parse_qasm("OPENQASM 2.0;\nqreg q[3];\n");
  EXPECT_EQ(c.num_qubits(), 3);
  EXPECT_TRUE(c.empty());
}

TEST(Qasm, DuplicateOperands) {
  try {
    parse_qasm("qreg q[2];\ncx q[0],q[0];\n");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("duplicate operands"), std::string::npos);
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(Qasm, RejectsUnsupported) {
  EXPECT_THROW(parse_qasm("qreg q[2];\nqreg r[2];\n"), ParseError);
  EXPECT_THROW(parse_qasm("qreg q[3];\nccx q[0],q[1],q[2];\n"), ParseError);
  EXPECT_THROW(parse_qasm("qreg q[2];\ncreg c[2];\nmeasure q[0] -> c[0];\nh q[1];\n"), ParseError);
  EXPECT_THROW(parse_qasm("qreg q[2];\nif(c==1) x q[0];\n"), ParseError);
  EXPECT_THROW(parse_qasm("qreg q[2];\nh q[5];\n"), ParseError);
  EXPECT_THROW(parse_qasm("qreg q[2];\nh q[0]\n"), ParseError);
}

TEST(Qasm, TrailingMeasurementsAccepted) {
  Circuit c = parse_qasm("qreg q[2];\ncreg c[2];\ncx q[0],q[1];\nmeasure q[0] -> c[0];\nmeasure q[1] -> c[1];\n");
  EXPECT_EQ(c.size(), 1u);
}

TEST(Qasm, RoundTripRandom) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 50; ++t) {
    Circuit c = oracle::random_circuit(2 + t % 6, t % 9, t % 5, rng);
    Circuit back = parse_qasm(to_qasm(c));
    EXPECT_EQ(back.num_qubits(), c.num_qubits());
    EXPECT_EQ(back.gates(), c.gates());
    Circuit again = parse_qasm(to_qasm(back));
    EXPECT_EQ(again.gates(), c.gates());
  }
}

TEST(Json, CircuitDeviceRoundTrip) {
  std::mt19937_64 rng(3);
  Circuit c = oracle::random_circuit(5, 8, 3, rng);
  Circuit back = circuit_from_json(circuit_to_json(c));
  EXPECT_EQ(back.gates(), c.gates());
  CouplingGraph g = make_ourense();
  CouplingGraph g2 = device_from_json(device_to_json(g));
  EXPECT_EQ(g2.edges(), g.edges());
  EXPECT_EQ(g2.num_physical(), 5);
}

TEST(Dag, SharedQubitOrdersGates) {
  Circuit c(3);
  c.add_gate("cx", 0, 1);
  c.add_gate("cx", 0, 2);
  auto e = build_dag(c).edges();
  ASSERT_EQ(e.size(), 1u);
  EXPECT_EQ(e[0], Dependency(0, 1));
}

TEST(Dag, CommutableHasNoEdges) {
  Circuit c(3, true);
  c.add_gate("cx", 0, 1);
  c.add_gate("cx", 0, 2);
  EXPECT_EQ(build_dag(c).num_edges(), 0u);
}

TEST(Dag, DisjointSupports) {
  Circuit c(4);
  c.add_gate("cx", 0, 1);
  c.add_gate("cx", 2, 3);
  EXPECT_EQ(build_dag(c).num_edges(), 0u);
}

TEST(Dag, ChainsPerQubitAndParents) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 40; ++t) {
    Circuit c = oracle::random_circuit(5, 12, 6, rng);
    DependencyDag dag(c);
    // Edges point forward, so list order is a topological order.
    for (auto [a, b] : dag.edges()) {
      EXPECT_LT(a, b);
      bool share = false;
      for (Qubit q : c.gate(a).targets()) share = share || c.gate(b).acts_on(q);
      EXPECT_TRUE(share) << a << "->" << b;
    }
    // Gates sharing a qubit are ordered through DAG reachability, and every
    // edge joins gates that share one.
    const int n = static_cast<int>(c.size());
    std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
    for (int g = 0; g < n; ++g) {
      for (GateId p : dag.preds(g)) {
        reach[p][g] = 1;
        for (int k = 0; k < n; ++k) {
          if (reach[k][p]) reach[k][g] = 1;
        }
      }
    }
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        bool share = false;
        for (Qubit q : c.gate(i).targets()) share = share || c.gate(j).acts_on(q);
        if (share) {
          EXPECT_TRUE(reach[i][j]) << i << "->" << j;
        }
      }
    }
    // Parent(g): the latest earlier two-qubit gate on each target.
    for (int g = 0; g < n; ++g) {
      if (!c.gate(g).two_qubit()) continue;
      std::set<GateId> expect;
      for (Qubit q : c.gate(g).targets()) {
        for (int j = g - 1; j >= 0; --j) {
          if (c.gate(j).two_qubit() && c.gate(j).acts_on(q)) {
            expect.insert(j);
            break;
          }
        }
      }
      std::set<GateId> got(dag.parents(g).begin(), dag.parents(g).end());
      EXPECT_EQ(got, expect);
    }
  }
}

TEST(Device, Distances) {
  CouplingGraph g2 = make_grid(2);
  EXPECT_EQ(g2.dist(0, 3), 2);
  EXPECT_EQ(g2.dist(1, 1), 0);
  CouplingGraph p3 = make_path(3);
  EXPECT_EQ(p3.dist(0, 2), 2);
  EXPECT_THROW(CouplingGraph(3, {{0, 1}}), InvalidInput);
  EXPECT_THROW(CouplingGraph(2, {{0, 0}}), InvalidInput);
}

TEST(Device, Library) {
  CouplingGraph g6 = make_grid(6);
  EXPECT_EQ(g6.num_physical(), 36);
  EXPECT_EQ(g6.num_edges(), 60u);
  EXPECT_EQ(make_device("eagle").num_physical(), 127);
  EXPECT_EQ(make_device("sycamore").num_physical(), 54);
  EXPECT_EQ(make_device("grid:3x4").num_edges(), 17u);
  EXPECT_THROW(make_device("torus:4"), InvalidInput);
  EXPECT_THROW(make_device("grid:1"), InvalidInput);
  // Heavy-hex: degrees at most 3, and grid row-major numbering.
  for (PhysQubit p = 0; p < 127; ++p) EXPECT_LE(make_eagle127().degree(p), 3);
  EXPECT_TRUE(g6.adjacent(0, 1));
  EXPECT_TRUE(g6.adjacent(0, 6));
}

namespace {

std::vector<int> bfs_row(const CouplingGraph& g, int s) {
  std::vector<int> d(g.num_physical(), -1);
  std::deque<int> q{s};
  d[s] = 0;
  while (!q.empty()) {
    int u = q.front();
    q.pop_front();
    for (auto [a, b] : g.edges()) {
      int v = a == u ? b : b == u ? a : -1;
      if (v >= 0 && d[v] < 0) {
        d[v] = d[u] + 1;
        q.push_back(v);
      }
    }
  }
  return d;
}

}  // namespace

TEST(Device, DistanceMatrixOnRandomGraphs) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 100; ++t) {
    int n = 2 + static_cast<int>(rng() % 12);
    std::vector<Edge> edges;
    for (int v = 1; v < n; ++v) edges.emplace_back(static_cast<int>(rng() % v), v);  // spanning tree
    int extra = static_cast<int>(rng() % (n + 1));
    for (int k = 0; k < extra; ++k) {
      int a = static_cast<int>(rng() % n), b = static_cast<int>(rng() % n);
      if (a != b) edges.emplace_back(a, b);
    }
    CouplingGraph g(n, edges);
    for (int a = 0; a < n; ++a) {
      auto row = bfs_row(g, a);
      for (int b = 0; b < n; ++b) {
        EXPECT_EQ(g.dist(a, b), row[b]);
        EXPECT_EQ(g.dist(a, b), g.dist(b, a));
        EXPECT_EQ(g.dist(a, b) == 1, g.adjacent(a, b));
        for (int c = 0; c < n; ++c) EXPECT_LE(g.dist(a, c), g.dist(a, b) + g.dist(b, c));
      }
    }
  }
}

TEST(Generators, QuekoWitnessVerifies) {
  for (const char* dev : {"grid:4", "grid:5", "sycamore"}) {
    CouplingGraph g = make_device(dev);
    for (int depth : {1, 5, 10}) {
      for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        QuekoInstance inst = gen_queko(g, depth, 0.5, seed);
        QlsSolution sol = single_block_solution(inst.circuit, inst.witness);
        ASSERT_TRUE(verify(inst.circuit, g, sol).ok());
        EXPECT_EQ(asap_depth(inst.circuit, g, sol), depth);
        EXPECT_EQ(sol.swap_count(), 0);
      }
    }
  }
}

TEST(Generators, QuekoDepthOneIsOneLayer) {
  CouplingGraph g = make_grid(4);
  QuekoInstance inst = gen_queko(g, 1, 0.5, 9);
  std::set<Qubit> used;
  for (const Gate& gate : inst.circuit.gates()) {
    if (!gate.two_qubit()) continue;
    for (Qubit q : gate.targets()) EXPECT_TRUE(used.insert(q).second);
  }
  EXPECT_GE(inst.circuit.num_two_qubit_gates(), 1u);
}

TEST(Generators, QuekoSeedSensitivity) {
  CouplingGraph g = make_grid(4);
  auto a = gen_queko(g, 10, 0.5, 1), b = gen_queko(g, 10, 0.5, 2), a2 = gen_queko(g, 10, 0.5, 1);
  EXPECT_NE(a.circuit.gates(), b.circuit.gates());
  EXPECT_EQ(a.circuit.gates(), a2.circuit.gates());
  EXPECT_EQ(a.witness, a2.witness);
}

TEST(Generators, Qaoa) {
  EXPECT_EQ(gen_qaoa(4, 1).size(), 6u);
  EXPECT_THROW(gen_qaoa(5, 1), InvalidInput);
  for (int n : {4, 10, 24, 60}) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      Circuit c = gen_qaoa(n, seed);
      EXPECT_TRUE(c.commutable());
      // Handshake lemma: 3n/2 edges on a 3-regular graph.
      EXPECT_EQ(2 * c.size(), 3u * n);
      std::vector<int> deg(n, 0);
      std::set<std::pair<int, int>> pairs;
      for (const Gate& gate : c.gates()) {
        ASSERT_TRUE(gate.two_qubit());
        ++deg[gate.qubits[0]];
        ++deg[gate.qubits[1]];
        EXPECT_TRUE(pairs.insert(std::minmax(gate.qubits[0], gate.qubits[1])).second);
      }
      for (int d : deg) EXPECT_EQ(d, 3);
    }
  }
  EXPECT_EQ(gen_qaoa(24, 3).size(), 36u);
}

TEST(Generators, Chains) {
  for (auto kind : {ChainKind::ghz, ChainKind::wstate}) {
    Circuit c = gen_chain(kind, 9);
    EXPECT_EQ(c.num_qubits(), 9);
    for (const Gate& gate : c.gates()) {
      if (gate.two_qubit()) {
        EXPECT_EQ(std::abs(gate.qubits[0] - gate.qubits[1]), 1);
      }
    }
  }
}

TEST(Circuit, Invariants) {
  Circuit c(2);
  EXPECT_THROW(c.add_gate("h", 2), InvalidInput);
  EXPECT_THROW(c.add_gate("cx", 1, 1), InvalidInput);
  c.add_gate("cx", 0, 1);
  EXPECT_THROW(c.set_dependencies({{0, 0}}), InvalidInput);
}
