#pragma once

#include "mlqls/circuit.hpp"
#include "mlqls/device.hpp"

#include <optional>
#include <vector>

namespace mlqls {

/// A SWAP on device edge (a, b), applied between block `gap` and `gap + 1`.
struct Swap {
  PhysQubit a = kNoQubit;
  PhysQubit b = kNoQubit;
  int gap = 0;
  friend bool operator==(const Swap&, const Swap&) = default;
};

/// Block-structured layout synthesis result. The mapping is constant within
/// a block; the SWAPs between two blocks, applied in listed order, transform
/// one block's mapping into the next.
struct QlsSolution {
  std::vector<Mapping> block_mappings;
  std::vector<int> gate_block;
  std::vector<Swap> swaps;
  std::optional<int> depth;

  [[nodiscard]] int num_blocks() const noexcept { return static_cast<int>(block_mappings.size()); }
  [[nodiscard]] int swap_count() const noexcept { return static_cast<int>(swaps.size()); }
  [[nodiscard]] const Mapping& initial_mapping() const { return block_mappings.front(); }
  [[nodiscard]] const Mapping& final_mapping() const { return block_mappings.back(); }
  friend bool operator==(const QlsSolution&, const QlsSolution&) = default;
};

inline int swap_count(const QlsSolution& sol) { return sol.swap_count(); }

/// phys -> prog (or kNoQubit) for a mapping onto `num_physical` sites.
inline std::vector<Qubit> inverse_mapping(const Mapping& m, int num_physical) {
  std::vector<Qubit> inv(static_cast<std::size_t>(num_physical), kNoQubit);
  for (Qubit q = 0; q < static_cast<Qubit>(m.size()); ++q) {
    if (m[q] >= 0 && m[q] < num_physical) inv[m[q]] = q;
  }
  return inv;
}

inline bool is_valid_mapping(const Mapping& m, int num_qubits, int num_physical) {
  if (static_cast<int>(m.size()) != num_qubits) return false;
  std::vector<char> used(static_cast<std::size_t>(num_physical), 0);
  for (PhysQubit p : m) {
    if (p < 0 || p >= num_physical || used[p]) return false;
    used[p] = 1;
  }
  return true;
}

/// Exchanges whatever program qubits sit on `a` and `b`.
inline void apply_swap(Mapping& m, PhysQubit a, PhysQubit b) {
  for (PhysQubit& p : m) {
    if (p == a) {
      p = b;
    } else if (p == b) {
      p = a;
    }
  }
}

inline Mapping identity_mapping(int n) {
  Mapping m(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) m[i] = i;
  return m;
}

/// Every gate in one block under `m`, no SWAPs.
inline QlsSolution single_block_solution(const Circuit& c, Mapping m) {
  QlsSolution sol;
  sol.block_mappings.push_back(std::move(m));
  sol.gate_block.assign(c.size(), 0);
  return sol;
}

/// The same schedule read backwards: a solution of `reversed(c)` becomes a
/// solution of `c` and vice versa.
inline QlsSolution reversed(const QlsSolution& sol) {
  QlsSolution r;
  const int nb = sol.num_blocks();
  r.block_mappings.assign(sol.block_mappings.rbegin(), sol.block_mappings.rend());
  r.gate_block.assign(sol.gate_block.rbegin(), sol.gate_block.rend());
  for (int& b : r.gate_block) b = nb - 1 - b;
  r.swaps.assign(sol.swaps.rbegin(), sol.swaps.rend());
  for (Swap& s : r.swaps) s.gap = nb - 2 - s.gap;
  r.depth = sol.depth;
  return r;
}

}  // namespace mlqls
