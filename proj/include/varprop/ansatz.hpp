#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "varprop/models.hpp"

namespace varprop {

/// Parameter slot: either a free variational parameter or pinned to a value.
struct Slot {
  bool free = true;
  double fixed_value = 0.0;

  static Slot make_free() { return {true, 0.0}; }
  static Slot fixed(double v) { return {false, v}; }
};

/// Ordered product of block exponentials U_a(c) = prod_f exp(i c_{slot(f)} B_f).
/// Several factors may bind one slot (parameter sharing) and a slot may be
/// fixed (e.g. pinned to zero to drop a factor).
class ProductAnsatz {
 public:
  struct Factor {
    int block_index = 0;
    int slot = 0;
  };

  ProductAnsatz(HamiltonianSplit split, std::vector<Factor> factors,
                std::vector<Slot> slots);

  /// One free slot per character: "BAB" over a 2-block split gives factors
  /// B, A, B with slots 0, 1, 2.
  static ProductAnsatz from_pattern(const HamiltonianSplit& split,
                                    std::string_view pattern);

  /// Pattern with an explicit factor -> slot map, e.g. "BAB" with {0,1,0}
  /// shares the outer slot.
  static ProductAnsatz from_pattern(const HamiltonianSplit& split,
                                    std::string_view pattern,
                                    const std::vector<int>& slot_of_factor);

  /// Palindromic sharing: slot(i) = min(i, M-1-i).
  static ProductAnsatz from_pattern_palindrome(const HamiltonianSplit& split,
                                               std::string_view pattern);

  const HamiltonianSplit& split() const { return split_; }
  const std::vector<Factor>& factors() const { return factors_; }
  const std::vector<Slot>& slots() const { return slots_; }
  int factor_count() const { return int(factors_.size()); }
  int slot_count() const { return int(slots_.size()); }
  int free_count() const { return int(free_slots_.size()); }
  const std::vector<int>& free_slots() const { return free_slots_; }
  Eigen::Index dim() const { return split_.dim(); }

  const Block& factor_block(int f) const {
    return split_.blocks[std::size_t(factors_[std::size_t(f)].block_index)];
  }

  /// Block letters of the factor sequence, e.g. "BAB".
  std::string pattern() const;

  /// Free-slot values (ordered by slot id) -> per-slot values with fixed
  /// slots filled in.
  std::vector<double> slot_values(const RealVector& free_params) const;

  /// Assembled unitary at the given free parameters.
  Matrix unitary(const RealVector& free_params) const;

 private:
  HamiltonianSplit split_;
  std::vector<Factor> factors_;
  std::vector<Slot> slots_;
  std::vector<int> free_slots_;
};

}  // namespace varprop
