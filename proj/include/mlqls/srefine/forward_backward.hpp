#pragma once

#include "mlqls/srefine/astar.hpp"
#include "mlqls/verify.hpp"

namespace mlqls {

struct ForwardBackwardConfig {
  AStarConfig astar;
  int max_passes = 10;
};

struct ForwardBackwardResult {
  QlsSolution solution;
  int passes = 0;
};

/// Alternates routing the circuit forward and in reverse, each pass starting
/// from the final mapping of the previous one. Stops once a pass fails to
/// improve on the one before it and returns the best forward-orientation
/// solution seen.
inline ForwardBackwardResult forward_backward(const Circuit& c, const CouplingGraph& g, const Mapping& m0,
                                              const MappingRegion* regions, const ForwardBackwardConfig& cfg,
                                              Rng& rng) {
  if (cfg.max_passes < 1) throw InvalidInput("forward-backward needs at least one pass");
  const Circuit rc = reversed(c);
  RoutingProblem fwd(c, g), bwd(rc, g);

  ForwardBackwardResult out;
  out.solution = astar_insert(fwd, m0, regions, cfg.astar, rng).solution;
  out.passes = 1;
  int previous = out.solution.swap_count();
  Mapping start = out.solution.final_mapping();

  for (int pass = 1; pass < cfg.max_passes; ++pass) {
    const bool backward = pass % 2 == 1;
    QlsSolution sol = astar_insert(backward ? bwd : fwd, start, regions, cfg.astar, rng).solution;
    ++out.passes;
    start = sol.final_mapping();
    const int swaps = sol.swap_count();
    QlsSolution forward_sol = backward ? reversed(sol) : std::move(sol);
    if (swaps < out.solution.swap_count()) out.solution = std::move(forward_sol);
    if (swaps >= previous) break;
    previous = swaps;
  }
  return out;
}

}  // namespace mlqls
