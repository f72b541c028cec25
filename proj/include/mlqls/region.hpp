#pragma once

#include "mlqls/common.hpp"

#include <algorithm>
#include <span>
#include <vector>

namespace mlqls {

/// Per program qubit, the physical qubits suggested by a coarser solution.
/// Refinement prefers these sites but may leave them.
class MappingRegion {
 public:
  MappingRegion() = default;
  MappingRegion(int num_qubits, int num_physical)
      : np_(num_physical),
        sites_(static_cast<std::size_t>(num_qubits)),
        member_(static_cast<std::size_t>(num_qubits) * num_physical, 0) {}

  void add(Qubit q, PhysQubit p) {
    char& bit = member_[static_cast<std::size_t>(q) * np_ + p];
    if (!bit) {
      bit = 1;
      auto& s = sites_[q];
      s.insert(std::upper_bound(s.begin(), s.end(), p), p);
    }
  }

  [[nodiscard]] bool contains(Qubit q, PhysQubit p) const {
    return member_[static_cast<std::size_t>(q) * np_ + p] != 0;
  }
  [[nodiscard]] std::span<const PhysQubit> sites(Qubit q) const { return sites_[q]; }
  [[nodiscard]] int num_qubits() const noexcept { return static_cast<int>(sites_.size()); }
  [[nodiscard]] int num_physical() const noexcept { return np_; }

 private:
  int np_ = 0;
  std::vector<std::vector<PhysQubit>> sites_;
  std::vector<char> member_;
};

}  // namespace mlqls
