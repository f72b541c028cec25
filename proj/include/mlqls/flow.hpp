#pragma once

#include "mlqls/cluster.hpp"
#include "mlqls/exact.hpp"
#include "mlqls/json_io.hpp"
#include "mlqls/srefine/srefine.hpp"
#include "mlqls/verify.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace mlqls {

struct FlowConfig {
  int coarsest_qubit_limit = 16;
  int coarsest_gate_limit = 50;
  int num_vcycles = 1;
  std::uint64_t seed = 1;
  double budget_scale = 0.01;  // scales the InitialMapper and exact time limits
  double min_shrink = 0.1;     // coarsening stops once a level shrinks by less than this
  SrefineConfig srefine;
  ExactConfig exact;
  ClusterOptions cluster;
  InterpolateOptions interpolate;

  void validate() const {
    if (coarsest_qubit_limit < 2 || coarsest_gate_limit < 2) throw InvalidInput("coarsest limits must be >= 2");
    if (coarsest_gate_limit > 64) throw InvalidInput("coarsest gate limit must be <= 64");
    if (num_vcycles < 0) throw InvalidInput("num_vcycles must be >= 0");
    if (budget_scale <= 0.0) throw InvalidInput("budget_scale must be positive");
    srefine.validate();
  }
};

struct StageStats {
  std::string name;  // "initial", "coarsest-exact", "coarsest-srefine", "refine"
  int cycle = 0;
  int level = 0;
  int num_qubits = 0;
  int num_gates = 0;
  int swaps = 0;
  int depth = 0;
  double seconds = 0.0;
  bool proven_optimal = false;
  QlsSolution solution;  // for the stage's own circuit and graph
};

struct FlowResult {
  QlsSolution initial;
  QlsSolution final;
  LevelHierarchy levels;  // hierarchy of the last V cycle
  std::vector<StageStats> stages;
  double seconds = 0.0;
};

/// Whether coarsening should stop: the top level is small enough for the
/// exact solver, has at most two qubits, the hierarchy is already as deep as
/// a halving rate would need, or the last level shrank by less than
/// `min_shrink`.
inline bool compression_guard(const LevelHierarchy& h, const FlowConfig& cfg) {
  if (h.levels.empty()) return true;
  const Level& top = h.levels.back();
  if (top.circuit.num_qubits() <= 2) return true;
  if (exact_fits(top.circuit, cfg.coarsest_qubit_limit, cfg.coarsest_gate_limit)) return true;
  const int n0 = h.levels.front().circuit.num_qubits();
  const double ratio = static_cast<double>(n0) / cfg.coarsest_qubit_limit;
  const int max_levels = 2 + (ratio > 1.0 ? static_cast<int>(std::ceil(std::log2(ratio))) : 0);
  if (h.depth() >= max_levels) return true;
  if (h.depth() >= 2) {
    const int prev = h.levels[h.levels.size() - 2].circuit.num_qubits();
    if (top.circuit.num_qubits() > (1.0 - cfg.min_shrink) * prev) return true;
  }
  return false;
}

namespace detail {

inline bool better(const QlsSolution& a, const QlsSolution& b) {
  if (a.swap_count() != b.swap_count()) return a.swap_count() < b.swap_count();
  return a.depth.value_or(0) < b.depth.value_or(0);
}

}  // namespace detail

/// Two-stage flow. Stage one is standalone srefine. Each V cycle clusters
/// the problem around the previous solution until the coarsest level
/// fits the exact solver (or coarsening stalls), solves it exactly (or with
/// srefine when still too large), then interpolates regions and refines
/// level by level back to the input. The result is the best verified
/// solution over all stages, by SWAP count and then depth.
inline FlowResult run_mlqls(const Circuit& c, const CouplingGraph& g, const FlowConfig& cfg_in = {}) {
  cfg_in.validate();
  if (c.num_qubits() > g.num_physical()) throw InvalidInput("more program qubits than physical qubits");
  Stopwatch total;
  FlowConfig cfg = cfg_in;
  cfg.srefine.budget_scale = cfg.budget_scale;
  cfg.exact.max_qubits = cfg.coarsest_qubit_limit;
  cfg.exact.max_gates = cfg.coarsest_gate_limit;
  cfg.exact.post_first_solution_budget = 100.0 * cfg.budget_scale;
  cfg.exact.seed = cfg.seed;

  Rng rng = make_rng(cfg.seed);
  FlowResult res;

  auto record = [&](const std::string& name, int cycle, int level, const Circuit& circ, const QlsSolution& sol,
                    double secs, bool optimal) {
    res.stages.push_back({name, cycle, level, circ.num_qubits(), static_cast<int>(circ.size()), sol.swap_count(),
                          sol.depth.value_or(0), secs, optimal, sol});
  };

  {
    Stopwatch sw;
    res.initial = srefine_run(c, g, nullptr, cfg.srefine, rng).solution;
    record("initial", 0, 0, c, res.initial, sw.seconds(), false);
  }
  QlsSolution best = res.initial;
  QlsSolution guide_sol = res.initial;  // later cycles cluster around the previous cycle's result

  for (int cycle = 1; cycle <= cfg.num_vcycles; ++cycle) {
    LevelHierarchy h;
    h.levels.push_back({c, g, {}, {}, {}});
    std::vector<Mapping> guide{guide_sol.initial_mapping()};
    while (!compression_guard(h, cfg)) {
      const Level& top = h.levels.back();
      ClusterMap prog = cluster_program(top.circuit, guide.back(), top.graph, cfg.cluster);
      ClusterMap phys = cluster_physical(top.graph, prog, guide.back());
      if (prog.num_coarse() >= top.circuit.num_qubits()) break;
      CoarseProblem coarse = coarsen(top.circuit, top.graph, prog, phys);
      Mapping induced = induced_mapping(guide.back(), prog, phys);
      h.levels.push_back({std::move(coarse.circuit), std::move(coarse.graph), std::move(prog), std::move(phys),
                          std::move(coarse.fine_gate)});
      guide.push_back(std::move(induced));
    }

    const int top = h.depth() - 1;
    QlsSolution sol;
    {
      const Level& lv = h.levels[top];
      Stopwatch sw;
      if (exact_fits(lv.circuit, cfg.coarsest_qubit_limit, cfg.coarsest_gate_limit)) {
        ExactConfig ec = cfg.exact;
        ec.hint = guide[top];
        ExactResult er = solve_exact(lv.circuit, lv.graph, ec);
        sol = std::move(er.solution);
        record("coarsest-exact", cycle, top, lv.circuit, sol, sw.seconds(), er.proven_optimal);
      } else {
        sol = srefine_run(lv.circuit, lv.graph, nullptr, cfg.srefine, rng).solution;
        record("coarsest-srefine", cycle, top, lv.circuit, sol, sw.seconds(), false);
      }
    }
    if (top == 0 && detail::better(sol, best)) best = sol;

    for (int level = top - 1; level >= 0; --level) {
      const Level& fine = h.levels[level];
      const Level& coarse = h.levels[level + 1];
      Stopwatch sw;
      MappingRegion regions = interpolate(sol, coarse.prog, coarse.phys, fine.graph, cfg.interpolate);
      sol = srefine_run(fine.circuit, fine.graph, &regions, cfg.srefine, rng).solution;
      record("refine", cycle, level, fine.circuit, sol, sw.seconds(), false);
    }
    if (top == 0) {
      // Nothing to coarsen: refine once around the exact solution.
      Stopwatch sw;
      ClusterMap id_prog, id_phys;
      id_prog.kind = ClusterKind::program;
      id_phys.kind = ClusterKind::physical;
      for (Qubit q = 0; q < c.num_qubits(); ++q) id_prog.fine_to_coarse.push_back(q);
      for (PhysQubit p = 0; p < g.num_physical(); ++p) id_phys.fine_to_coarse.push_back(p);
      id_prog.normalize();
      id_phys.normalize();
      MappingRegion regions = interpolate(sol, id_prog, id_phys, g, cfg.interpolate);
      sol = srefine_run(c, g, &regions, cfg.srefine, rng).solution;
      record("refine", cycle, 0, c, sol, sw.seconds(), false);
    }
    if (detail::better(sol, best)) best = sol;
    guide_sol = std::move(sol);
    res.levels = std::move(h);
  }

  VerifyReport report = verify(c, g, best);
  if (!report.ok()) throw Error("internal error: flow result fails verification: " + report.summary());
  if (!best.depth) best.depth = asap_depth(c, g, best);
  res.final = std::move(best);
  res.seconds = total.seconds();
  return res;
}

/// FlowResult as JSON. Timing fields are left out when `timing` is false so
/// that equal runs serialize identically.
inline json flow_result_to_json(const FlowResult& r, bool timing = true) {
  json stages = json::array();
  for (const StageStats& s : r.stages) {
    json j{{"name", s.name},       {"cycle", s.cycle}, {"level", s.level}, {"num_qubits", s.num_qubits},
           {"num_gates", s.num_gates}, {"swaps", s.swaps}, {"depth", s.depth}, {"proven_optimal", s.proven_optimal}};
    if (timing) j["seconds"] = s.seconds;
    stages.push_back(std::move(j));
  }
  json out{{"initial", {{"swaps", r.initial.swap_count()}, {"depth", r.initial.depth.value_or(0)}}},
           {"final", {{"swaps", r.final.swap_count()}, {"depth", r.final.depth.value_or(0)}}},
           {"stages", stages},
           {"hierarchy", hierarchy_to_json(r.levels)},
           {"solution", solution_to_json(r.final)}};
  if (timing) out["seconds"] = r.seconds;
  return out;
}

}  // namespace mlqls
