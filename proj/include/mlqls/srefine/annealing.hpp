#pragma once

#include "mlqls/region.hpp"
#include "mlqls/solution.hpp"
#include "mlqls/srefine/cost.hpp"

#include <cmath>
#include <vector>

namespace mlqls {

namespace detail {

struct SaMove {
  Qubit q;
  PhysQubit to;
};

inline SaMove propose(const std::vector<Qubit>& movable, int np, const MappingRegion* regions,
                      double region_bias, Rng& rng) {
  Qubit q = movable[uniform_index(rng, movable.size())];
  PhysQubit to;
  if (regions && !regions->sites(q).empty() && uniform_real(rng) >= region_bias) {
    auto s = regions->sites(q);
    to = s[uniform_index(rng, s.size())];
  } else {
    to = static_cast<PhysQubit>(uniform_index(rng, static_cast<std::size_t>(np)));
  }
  return {q, to};
}

}  // namespace detail

/// Simulated annealing over injective mappings. A move relocates one qubit;
/// if the target site is occupied the two qubits exchange positions. With
/// regions, targets are drawn from the mover's region except with
/// probability `region_bias`. Returns the best mapping seen, so the result
/// never costs more than `start`.
inline Mapping sa_initial_mapping(const PairCost& cost, const CouplingGraph& g, const Mapping& start,
                                  const MappingRegion* regions, const SaConfig& cfg, Rng& rng) {
  cfg.validate();
  const int nq = static_cast<int>(start.size());
  const int np = g.num_physical();
  if (!is_valid_mapping(start, nq, np)) throw InvalidInput("annealing start is not an injective mapping");

  std::vector<Qubit> movable;
  for (Qubit q = 0; q < nq; ++q) {
    if (!cost.terms(q).empty()) movable.push_back(q);
  }
  if (movable.empty() || np < 2) return start;

  Mapping m = start;
  std::vector<Qubit> occ = inverse_mapping(m, np);
  double current = cost.evaluate(m, g);
  double best_cost = current;
  Mapping best = m;

  // Applies the move in place and returns its cost delta.
  auto apply = [&](const detail::SaMove& mv) {
    Qubit r = occ[mv.to];
    PhysQubit from = m[mv.q];
    double before = cost.local(m, g, mv.q, r);
    m[mv.q] = mv.to;
    occ[mv.to] = mv.q;
    occ[from] = r;
    if (r != kNoQubit) m[r] = from;
    return cost.local(m, g, mv.q, r) - before;
  };
  auto undo = [&](const detail::SaMove& mv, PhysQubit from) {
    Qubit r = occ[from];
    m[mv.q] = from;
    occ[from] = mv.q;
    occ[mv.to] = r;
    if (r != kNoQubit) m[r] = mv.to;
  };

  const std::int64_t iterations =
      cfg.iterations > 0 ? cfg.iterations : std::max<std::int64_t>(100, 50LL * nq * nq);

  double temp = cfg.initial_temp;
  if (temp <= 0.0) {
    double uphill = 0.0;
    int count = 0;
    for (int i = 0; i < 100; ++i) {
      auto mv = detail::propose(movable, np, regions, cfg.region_bias, rng);
      if (mv.to == m[mv.q]) continue;
      PhysQubit from = m[mv.q];
      double d = apply(mv);
      undo(mv, from);
      if (d > 0) {
        uphill += d;
        ++count;
      }
    }
    temp = count > 0 ? (uphill / count) / std::log(2.0) : 1.0;
  }
  const double cooling = cfg.cooling > 0.0 ? cfg.cooling : std::exp(std::log(1e-3) / static_cast<double>(iterations));

  for (std::int64_t it = 0; it < iterations; ++it, temp *= cooling) {
    auto mv = detail::propose(movable, np, regions, cfg.region_bias, rng);
    if (mv.to == m[mv.q]) continue;
    PhysQubit from = m[mv.q];
    double d = apply(mv);
    if (d <= 0.0 || uniform_real(rng) < std::exp(-d / temp)) {
      current += d;
      if (current < best_cost - 1e-12) {
        best_cost = current;
        best = m;
      }
    } else {
      undo(mv, from);
    }
  }
  return best;
}

inline Mapping sa_initial_mapping(const Circuit& c, const CouplingGraph& g, const Mapping& start,
                                  const MappingRegion* regions, const SaConfig& cfg, Rng& rng) {
  DependencyDag dag(c);
  PairCost cost(c, dag, cfg.gate_weight_decay);
  return sa_initial_mapping(cost, g, start, regions, cfg, rng);
}

}  // namespace mlqls
