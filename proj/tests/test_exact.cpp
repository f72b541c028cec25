#include "oracles.hpp"

#include <gtest/gtest.h>

#include "mlqls/exact.hpp"
#include "mlqls/generators.hpp"
#include "mlqls/oracle.hpp"

using namespace mlqls;

namespace {

ExactConfig quick() {
  ExactConfig cfg;
  cfg.post_first_solution_budget = 5.0;
  return cfg;
}

}  // namespace

TEST(Oracle, Examples) {
  Circuit inplace(3);
  inplace.add_gate("cx", 0, 1);
  inplace.add_gate("cx", 1, 2);
  EXPECT_EQ(optimal_oracle(inplace, make_path(3), 3), 0);

  Circuit tri(3);
  tri.add_gate("cx", 0, 1);
  tri.add_gate("cx", 1, 2);
  tri.add_gate("cx", 0, 2);
  EXPECT_EQ(optimal_oracle(tri, make_path(3), 3), 1);
  EXPECT_EQ(optimal_oracle(tri, make_path(3), 0), std::nullopt);

  oracle::Triangle f;
  EXPECT_EQ(optimal_oracle(f.circuit, f.device, 4), 1);
  EXPECT_THROW(optimal_oracle(f.circuit, make_grid(3), 2), InstanceTooLarge);
}

TEST(Exact, EmbeddableNeedsNoSwap) {
  CouplingGraph g = make_grid(3);
  auto q = gen_queko(g, 4, 0.5, 2);
  ExactResult r = solve_exact(q.circuit, g, quick());
  EXPECT_EQ(r.solution.swap_count(), 0);
  EXPECT_EQ(r.solution.num_blocks(), 1);
  EXPECT_TRUE(r.proven_optimal);
  EXPECT_TRUE(verify(q.circuit, g, r.solution).ok());
}

TEST(Exact, WorkedExample) {
  oracle::Triangle f;
  ExactResult r = solve_exact(f.circuit, f.device, quick());
  EXPECT_EQ(r.solution.swap_count(), 1);
  EXPECT_TRUE(r.proven_optimal);
  EXPECT_TRUE(verify(f.circuit, f.device, r.solution).ok());
}

TEST(Exact, MatchesOracleOnPath4) {
  std::mt19937_64 rng(1234);
  CouplingGraph g = make_path(4);
  for (int t = 0; t < 30; ++t) {
    Circuit c = oracle::random_circuit(4, 6, t % 3, rng);
    auto best = optimal_oracle(c, g, 8);
    ASSERT_TRUE(best.has_value());
    ExactResult r = solve_exact(c, g, quick());
    EXPECT_EQ(r.solution.swap_count(), *best) << "instance " << t;
    EXPECT_TRUE(r.proven_optimal);
    EXPECT_TRUE(verify(c, g, r.solution).ok());
  }
}

TEST(Exact, MatchesOracleWithSpareSites) {
  std::mt19937_64 rng(77);
  for (const CouplingGraph& g : {make_ourense(), make_path(5), make_grid(2, 3)}) {
    for (int t = 0; t < 10; ++t) {
      Circuit c = oracle::random_circuit(3 + t % 2, 6, 2, rng, t % 4 == 0);
      auto best = optimal_oracle(c, g, 8);
      ASSERT_TRUE(best.has_value());
      ExactResult r = solve_exact(c, g, quick());
      EXPECT_EQ(r.solution.swap_count(), *best) << g.name() << " instance " << t;
      EXPECT_TRUE(verify(c, g, r.solution).ok());
    }
  }
}

TEST(Exact, Monotone) {
  std::mt19937_64 rng(8);
  CouplingGraph g = make_path(5);
  for (int t = 0; t < 8; ++t) {
    Circuit full = oracle::random_circuit(5, 8, 0, rng);
    int prev = 0;
    for (std::size_t k = 1; k <= full.size(); ++k) {
      Circuit prefix(5);
      for (std::size_t i = 0; i < k; ++i) prefix.add_gate(full.gate(static_cast<GateId>(i)));
      int s = solve_exact(prefix, g, quick()).solution.swap_count();
      EXPECT_GE(s, prev);
      prev = s;
    }
  }
}

TEST(Exact, Deterministic) {
  std::mt19937_64 rng(5);
  CouplingGraph g = make_grid(3);
  Circuit c = oracle::random_circuit(7, 12, 3, rng);
  ExactResult a = solve_exact(c, g, quick()), b = solve_exact(c, g, quick());
  ASSERT_TRUE(a.proven_optimal);
  EXPECT_EQ(a.solution, b.solution);
}

TEST(Exact, LimitsAndBudget) {
  Circuit big(17);
  for (Qubit q = 0; q < 16; ++q) big.add_gate("cx", q, q + 1);
  EXPECT_THROW(solve_exact(big, make_grid(5), quick()), InstanceTooLarge);
  ExactConfig bad;
  bad.post_first_solution_budget = 0.0;
  EXPECT_THROW(bad.validate(), InvalidInput);

  // A tiny budget still returns a verified solution.
  Circuit c = gen_qaoa(12, 2);
  ExactConfig tight;
  tight.post_first_solution_budget = 1e-4;
  tight.units_per_second = 1e3;
  CouplingGraph g = make_grid(4);
  ExactResult r = solve_exact(c, g, tight);
  EXPECT_TRUE(verify(c, g, r.solution).ok());
  EXPECT_LE(r.lower_bound, r.solution.swap_count());
}

TEST(Exact, QaoaCoarseSizedInstances) {
  CouplingGraph g = make_grid(4);
  for (int n : {8, 10, 12}) {
    Circuit c = gen_qaoa(n, 1);
    ExactConfig cfg;
    cfg.post_first_solution_budget = 2.0;
    ExactResult r = solve_exact(c, g, cfg);
    EXPECT_TRUE(verify(c, g, r.solution).ok());
    EXPECT_LE(r.lower_bound, r.solution.swap_count());
  }
}
