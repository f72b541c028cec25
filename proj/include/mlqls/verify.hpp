#pragma once

#include "mlqls/circuit.hpp"
#include "mlqls/device.hpp"
#include "mlqls/solution.hpp"

#include <sstream>
#include <string>
#include <vector>

namespace mlqls {

struct ConstraintCheck {
  bool passed = true;
  std::string witness;  // first violation, empty when passed

  void fail(std::string w) {
    if (passed) {
      passed = false;
      witness = std::move(w);
    }
  }
};

/// Outcome of checking a solution against the four validity constraints.
/// `structure` covers shape errors (sizes, indices) that make the other
/// checks meaningless.
struct VerifyReport {
  ConstraintCheck structure;
  ConstraintCheck injectivity;
  ConstraintCheck dependency;
  ConstraintCheck adjacency;
  ConstraintCheck swap_transformation;
  std::vector<std::string> notes;  // informational only

  [[nodiscard]] bool ok() const noexcept {
    return structure.passed && injectivity.passed && dependency.passed && adjacency.passed &&
           swap_transformation.passed;
  }

  [[nodiscard]] std::string summary() const {
    std::ostringstream out;
    auto line = [&](const char* name, const ConstraintCheck& c) {
      out << name << ": " << (c.passed ? "pass" : "FAIL");
      if (!c.passed) out << " (" << c.witness << ")";
      out << '\n';
    };
    line("structure", structure);
    line("1 injectivity", injectivity);
    line("2 dependency", dependency);
    line("3 adjacency", adjacency);
    line("4 swap transformation", swap_transformation);
    for (const auto& n : notes) out << "note: " << n << '\n';
    return out.str();
  }
};

inline VerifyReport verify(const Circuit& c, const CouplingGraph& g, const QlsSolution& sol) {
  VerifyReport r;
  const int nq = c.num_qubits();
  const int np = g.num_physical();
  const int nb = sol.num_blocks();

  if (nb == 0) {
    r.structure.fail("no blocks");
    return r;
  }
  if (sol.gate_block.size() != c.size()) {
    r.structure.fail("gate_block has " + std::to_string(sol.gate_block.size()) + " entries for " +
                     std::to_string(c.size()) + " gates");
    return r;
  }
  for (std::size_t i = 0; i < sol.gate_block.size(); ++i) {
    if (sol.gate_block[i] < 0 || sol.gate_block[i] >= nb) {
      r.structure.fail("gate " + std::to_string(i) + " assigned to block " + std::to_string(sol.gate_block[i]));
      return r;
    }
  }
  for (int b = 0; b < nb; ++b) {
    if (static_cast<int>(sol.block_mappings[b].size()) != nq) {
      r.structure.fail("block " + std::to_string(b) + " mapping has wrong size");
      return r;
    }
  }
  for (std::size_t i = 0; i < sol.swaps.size(); ++i) {
    const Swap& s = sol.swaps[i];
    if (s.a < 0 || s.b < 0 || s.a >= np || s.b >= np || !g.adjacent(s.a, s.b)) {
      r.structure.fail("swap " + std::to_string(i) + " is not on a device edge");
      return r;
    }
    if (s.gap < 0 || s.gap >= nb - 1) {
      r.structure.fail("swap " + std::to_string(i) + " has gap " + std::to_string(s.gap) + " outside [0, " +
                       std::to_string(nb - 2) + "]");
      return r;
    }
    if (i > 0 && s.gap < sol.swaps[i - 1].gap) {
      r.structure.fail("swaps not listed in gap order at index " + std::to_string(i));
      return r;
    }
  }

  // (1) injectivity
  for (int b = 0; b < nb; ++b) {
    std::vector<Qubit> owner(static_cast<std::size_t>(np), kNoQubit);
    for (Qubit q = 0; q < nq; ++q) {
      PhysQubit p = sol.block_mappings[b][q];
      if (p < 0 || p >= np) {
        r.injectivity.fail("block " + std::to_string(b) + ": q" + std::to_string(q) + " mapped outside device");
        break;
      }
      if (owner[p] != kNoQubit) {
        r.injectivity.fail("block " + std::to_string(b) + ": q" + std::to_string(owner[p]) + " and q" +
                           std::to_string(q) + " share p" + std::to_string(p));
        break;
      }
      owner[p] = q;
    }
  }

  // (2) dependency
  DependencyDag dag(c);
  for (auto [from, to] : dag.edges()) {
    if (sol.gate_block[from] > sol.gate_block[to]) {
      r.dependency.fail("g" + std::to_string(from) + " (block " + std::to_string(sol.gate_block[from]) +
                        ") must not follow g" + std::to_string(to) + " (block " +
                        std::to_string(sol.gate_block[to]) + ")");
      break;
    }
  }

  // (3) adjacency
  if (r.injectivity.passed) {
    for (GateId id = 0; id < static_cast<GateId>(c.size()); ++id) {
      const Gate& gate = c.gate(id);
      if (!gate.two_qubit()) continue;
      const Mapping& m = sol.block_mappings[sol.gate_block[id]];
      PhysQubit a = m[gate.qubits[0]], b = m[gate.qubits[1]];
      if (!g.adjacent(a, b)) {
        r.adjacency.fail("g" + std::to_string(id) + " on q" + std::to_string(gate.qubits[0]) + ",q" +
                         std::to_string(gate.qubits[1]) + " sits on non-adjacent p" + std::to_string(a) + ",p" +
                         std::to_string(b) + " in block " + std::to_string(sol.gate_block[id]));
        break;
      }
    }
  }

  // (4) swap transformation, gap by gap
  if (r.injectivity.passed) {
    std::size_t k = 0;
    for (int b = 0; b + 1 < nb; ++b) {
      Mapping cur = sol.block_mappings[b];
      std::vector<char> touched(static_cast<std::size_t>(np), 0);
      bool overlap = false;
      for (; k < sol.swaps.size() && sol.swaps[k].gap == b; ++k) {
        const Swap& s = sol.swaps[k];
        overlap = overlap || touched[s.a] || touched[s.b];
        touched[s.a] = touched[s.b] = 1;
        apply_swap(cur, s.a, s.b);
      }
      if (overlap) r.notes.push_back("gap " + std::to_string(b) + " has SWAPs sharing a qubit");
      if (cur != sol.block_mappings[b + 1]) {
        Qubit bad = 0;
        while (cur[bad] == sol.block_mappings[b + 1][bad]) ++bad;
        r.swap_transformation.fail("blocks " + std::to_string(b) + "->" + std::to_string(b + 1) + ": q" +
                                   std::to_string(bad) + " expected at p" + std::to_string(cur[bad]) +
                                   " but found at p" + std::to_string(sol.block_mappings[b + 1][bad]));
        break;
      }
    }
  }
  return r;
}

/// ASAP schedule length. Every gate and SWAP takes one cycle and starts when
/// its physical qubits and DAG predecessors are free. Throws InvalidInput when
/// the solution does not verify.
inline int asap_depth(const Circuit& c, const CouplingGraph& g, const QlsSolution& sol) {
  auto report = verify(c, g, sol);
  if (!report.ok()) throw InvalidInput("asap_depth on an invalid solution:\n" + report.summary());

  DependencyDag dag(c);
  const int nb = sol.num_blocks();
  std::vector<std::vector<GateId>> by_block(static_cast<std::size_t>(nb));
  for (GateId id = 0; id < static_cast<GateId>(c.size()); ++id) by_block[sol.gate_block[id]].push_back(id);

  std::vector<int> free_at(static_cast<std::size_t>(g.num_physical()), 0);
  std::vector<int> finish(c.size(), 0);
  int depth = 0;
  std::size_t k = 0;
  for (int b = 0; b < nb; ++b) {
    const Mapping& m = sol.block_mappings[b];
    for (GateId id : by_block[b]) {
      int start = 0;
      for (Qubit q : c.gate(id).targets()) start = std::max(start, free_at[m[q]]);
      for (GateId p : dag.preds(id)) start = std::max(start, finish[p]);
      finish[id] = start + 1;
      for (Qubit q : c.gate(id).targets()) free_at[m[q]] = start + 1;
      depth = std::max(depth, start + 1);
    }
    for (; k < sol.swaps.size() && sol.swaps[k].gap == b; ++k) {
      const Swap& s = sol.swaps[k];
      int start = std::max(free_at[s.a], free_at[s.b]);
      free_at[s.a] = free_at[s.b] = start + 1;
      depth = std::max(depth, start + 1);
    }
  }
  return depth;
}

}  // namespace mlqls
