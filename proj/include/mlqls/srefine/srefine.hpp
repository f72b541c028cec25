#pragma once

#include "mlqls/srefine/annealing.hpp"
#include "mlqls/srefine/forward_backward.hpp"
#include "mlqls/srefine/initial_mapper.hpp"
#include "mlqls/srefine/matching.hpp"
#include "mlqls/verify.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <thread>
#include <vector>

namespace mlqls {

struct SrefineConfig {
  SaConfig sa;
  ForwardBackwardConfig fb;
  InitialMapperOptions mapper;
  int num_candidates = 5;
  double budget_scale = 0.01;           // applied to the InitialMapper time limits
  double mapper_first_seconds = 1000.0;
  double mapper_later_seconds = 100.0;
  int mapper_qubit_limit = 100;         // InitialMapper runs only below this many qubits
  unsigned threads = 0;                 // 0: thread_cap()

  void validate() const {
    sa.validate();
    fb.astar.validate();
    if (num_candidates < 1) throw InvalidInput("need at least one candidate");
    if (budget_scale <= 0.0) throw InvalidInput("budget_scale must be positive");
  }
};

struct SrefineResult {
  QlsSolution solution;
  int best_candidate = 0;
  std::vector<int> candidate_swaps;
  int mapper_full_embeddings = 0;  // candidates whose InitialMapper kept every pair
};

namespace detail {

inline Mapping random_mapping(int nq, int np, Rng& rng) {
  std::vector<PhysQubit> sites(static_cast<std::size_t>(np));
  std::iota(sites.begin(), sites.end(), 0);
  std::shuffle(sites.begin(), sites.end(), rng);
  sites.resize(static_cast<std::size_t>(nq));
  return sites;
}

struct CandidateOutcome {
  QlsSolution solution;
  bool full_embedding = false;
};

inline CandidateOutcome run_candidate(const Circuit& c, const CouplingGraph& g, const PairCost& cost,
                                      const MappingRegion* regions, const Mapping* matched,
                                      const SrefineConfig& cfg, int index, Rng& rng) {
  const int nq = c.num_qubits();
  std::vector<Mapping> starts;
  CandidateOutcome out;
  if (regions) {
    if (index == 0) starts.push_back(*matched);
    starts.push_back(sa_initial_mapping(cost, g, *matched, regions, cfg.sa, rng));
  } else if (nq < cfg.mapper_qubit_limit) {
    double seconds = (index == 0 ? cfg.mapper_first_seconds : cfg.mapper_later_seconds) * cfg.budget_scale;
    auto mapped = initial_mapper(c, g, seconds, rng, cfg.mapper);
    Mapping base = mapped ? mapped->mapping : random_mapping(nq, g.num_physical(), rng);
    if (mapped && mapped->all_accepted) {
      out.full_embedding = true;
      starts.push_back(base);
    } else {
      starts.push_back(base);
      starts.push_back(sa_initial_mapping(cost, g, base, nullptr, cfg.sa, rng));
    }
  } else {
    starts.push_back(sa_initial_mapping(cost, g, random_mapping(nq, g.num_physical(), rng), nullptr, cfg.sa, rng));
  }

  bool have = false;
  for (const Mapping& m0 : starts) {
    QlsSolution sol = forward_backward(c, g, m0, regions, cfg.fb, rng).solution;
    if (!have || sol.swap_count() < out.solution.swap_count()) {
      out.solution = std::move(sol);
      have = true;
    }
  }
  return out;
}

}  // namespace detail

/// Scalable synthesis. Without regions every candidate starts from an
/// InitialMapper embedding (below `mapper_qubit_limit` qubits) or a random
/// mapping, improved by annealing. With regions candidates start from a
/// region matching and anneal within the regions. Each start is routed by
/// forward/backward A* passes. Candidates use independent RNG streams; the
/// result is the candidate with the fewest SWAPs, lowest index on ties.
inline SrefineResult srefine_run(const Circuit& c, const CouplingGraph& g, const MappingRegion* regions,
                                 const SrefineConfig& cfg, Rng& rng) {
  cfg.validate();
  if (c.num_qubits() > g.num_physical()) throw InvalidInput("more program qubits than physical qubits");
  if (regions && (regions->num_qubits() != c.num_qubits() || regions->num_physical() != g.num_physical())) {
    throw InvalidInput("region shape does not match the instance");
  }
  const std::uint64_t base_seed = rng();
  DependencyDag dag(c);
  PairCost cost(c, dag, cfg.sa.gate_weight_decay);
  Mapping matched;
  if (regions) matched = initial_matching(*regions, g);

  const int n = cfg.num_candidates;
  std::vector<detail::CandidateOutcome> outcomes(static_cast<std::size_t>(n));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
  auto work = [&](int i) {
    try {
      Rng r = make_rng(base_seed, static_cast<std::uint64_t>(i));
      outcomes[i] = detail::run_candidate(c, g, cost, regions, regions ? &matched : nullptr, cfg, i, r);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };

  unsigned threads = std::min<unsigned>(cfg.threads ? cfg.threads : thread_cap(), static_cast<unsigned>(n));
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) work(i);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (int i = next++; i < n; i = next++) work(i);
      });
    }
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  SrefineResult res;
  for (int i = 0; i < n; ++i) {
    res.candidate_swaps.push_back(outcomes[i].solution.swap_count());
    if (outcomes[i].full_embedding) ++res.mapper_full_embeddings;
    if (outcomes[i].solution.swap_count() < outcomes[res.best_candidate].solution.swap_count()) res.best_candidate = i;
  }
  res.solution = std::move(outcomes[res.best_candidate].solution);
  VerifyReport report = verify(c, g, res.solution);
  if (!report.ok()) throw Error("internal error: synthesized solution fails verification: " + report.summary());
  res.solution.depth = asap_depth(c, g, res.solution);
  return res;
}

}  // namespace mlqls
