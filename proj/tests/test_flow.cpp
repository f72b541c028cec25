#include "oracles.hpp"

#include <gtest/gtest.h>

#include "mlqls/flow.hpp"
#include "mlqls/generators.hpp"

#include <cmath>

using namespace mlqls;

namespace {

// n qubits, `gates` two-qubit gates sweeping neighbouring pairs, so no gate
// repeats the pair of the gate before it on either qubit.
Circuit sweep(int n, int gates) {
  Circuit c(n);
  for (int i = 0; i < gates; ++i) c.add_gate("cx", i % (n - 1), i % (n - 1) + 1);
  return c;
}

LevelHierarchy trajectory(std::initializer_list<int> sizes) {
  LevelHierarchy h;
  for (int n : sizes) h.levels.push_back({sweep(n, 60), make_path(n), {}, {}, {}});
  return h;
}

FlowConfig quick(std::uint64_t seed = 1) {
  FlowConfig cfg;
  cfg.seed = seed;
  cfg.budget_scale = 0.002;
  cfg.srefine.threads = 1;
  return cfg;
}

}  // namespace

TEST(CompressionGuard, Examples) {
  FlowConfig cfg;
  EXPECT_TRUE(compression_guard(trajectory({16, 15, 15}), cfg));
  EXPECT_FALSE(compression_guard(trajectory({64, 32}), cfg));
  EXPECT_FALSE(compression_guard(trajectory({64}), cfg));
  // Nothing to compress: the only level already fits the exact solver.
  LevelHierarchy small;
  small.levels.push_back({sweep(6, 10), make_path(6), {}, {}, {}});
  EXPECT_TRUE(compression_guard(small, cfg));
  // Level cap: 64 qubits allow 2 + log2(64/16) = 4 levels.
  EXPECT_TRUE(compression_guard(trajectory({64, 56, 49, 43}), cfg));
  EXPECT_FALSE(compression_guard(trajectory({64, 56, 49}), cfg));
}

TEST(FlowConfig, Validation) {
  FlowConfig cfg;
  cfg.coarsest_qubit_limit = 1;
  EXPECT_THROW(cfg.validate(), InvalidInput);
  cfg = {};
  cfg.num_vcycles = -1;
  EXPECT_THROW(cfg.validate(), InvalidInput);
  EXPECT_THROW(run_mlqls(sweep(5, 4), make_path(4), quick()), InvalidInput);
}

TEST(Flow, SmallInstanceDegenerates) {
  oracle::Triangle f;
  FlowResult r = run_mlqls(f.circuit, f.device, quick());
  EXPECT_EQ(r.levels.depth(), 1);
  ASSERT_EQ(r.stages.size(), 3u);
  EXPECT_EQ(r.stages[1].name, "coarsest-exact");
  EXPECT_EQ(r.stages[2].name, "refine");
  EXPECT_EQ(r.final.swap_count(), 1);
  EXPECT_LE(r.final.swap_count(), r.initial.swap_count());
}

TEST(Flow, QuekoGrid4ZeroSwaps) {
  CouplingGraph g = make_grid(4);
  for (std::uint64_t s = 1; s <= 3; ++s) {
    auto q = gen_queko(g, 5, 0.5, s);
    FlowResult r = run_mlqls(q.circuit, g, quick(s));
    EXPECT_EQ(r.final.swap_count(), 0);
    EXPECT_TRUE(verify(q.circuit, g, r.final).ok());
  }
}

TEST(Flow, Invariants) {
  struct Inst {
    Circuit c;
    CouplingGraph g;
  };
  std::mt19937_64 rng(12);
  std::vector<Inst> insts{{gen_qaoa(24, 1), make_grid(5)},
                          {gen_qaoa(40, 2), make_grid(7)},
                          {oracle::random_circuit(20, 50, 10, rng), make_grid(5)},
                          {gen_queko(make_grid(5), 10, 0.5, 4).circuit, make_grid(5)}};
  for (const Inst& in : insts) {
    for (int cycles : {1, 2}) {
      FlowConfig cfg = quick(3);
      cfg.num_vcycles = cycles;
      FlowResult r = run_mlqls(in.c, in.g, cfg);
      // Best-keeping.
      EXPECT_LE(r.final.swap_count(), r.initial.swap_count());
      for (const StageStats& s : r.stages) {
        if (s.level == 0) {
          EXPECT_LE(r.final.swap_count(), s.swaps);
        }
      }
      EXPECT_TRUE(verify(in.c, in.g, r.final).ok());
      // Hierarchy shape.
      const int n0 = in.c.num_qubits();
      const int cap = static_cast<int>(std::ceil(std::log2(std::max(1.0, n0 / 16.0)))) + 2;
      EXPECT_LE(r.levels.depth(), cap);
      for (int i = 1; i < r.levels.depth(); ++i) {
        const Level& fine = r.levels.levels[i - 1];
        const Level& coarse = r.levels.levels[i];
        EXPECT_LE(coarse.circuit.num_qubits(), fine.circuit.num_qubits());
        CoarseProblem again = coarsen(fine.circuit, fine.graph, coarse.prog, coarse.phys);
        EXPECT_EQ(again.circuit.gates(), coarse.circuit.gates());
        EXPECT_EQ(again.graph.edges(), coarse.graph.edges());
      }
      // Every stage of the last cycle verifies on its own level.
      for (const StageStats& s : r.stages) {
        if (s.cycle != cycles) continue;
        const Level& lv = r.levels.levels[s.level];
        EXPECT_TRUE(verify(lv.circuit, lv.graph, s.solution).ok()) << s.name << " level " << s.level;
        EXPECT_EQ(s.swaps, s.solution.swap_count());
      }
    }
  }
}

TEST(Flow, DeterministicPerSeed) {
  CouplingGraph g = make_grid(5);
  Circuit c = gen_qaoa(24, 7);
  FlowConfig a = quick(5), b = quick(5);
  b.srefine.threads = 3;
  std::string ja = flow_result_to_json(run_mlqls(c, g, a), false).dump();
  std::string jb = flow_result_to_json(run_mlqls(c, g, b), false).dump();
  EXPECT_EQ(ja, jb);
  EXPECT_EQ(ja.find("seconds"), std::string::npos);
}
