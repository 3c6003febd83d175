#include "varprop/ansatz.hpp"

#include <algorithm>

namespace varprop {

ProductAnsatz::ProductAnsatz(HamiltonianSplit split, std::vector<Factor> factors,
                             std::vector<Slot> slots)
    : split_(std::move(split)), factors_(std::move(factors)), slots_(std::move(slots)) {
  if (factors_.empty()) throw std::invalid_argument("ansatz needs at least one factor");
  for (const auto& f : factors_) {
    if (f.block_index < 0 || std::size_t(f.block_index) >= split_.blocks.size())
      throw std::invalid_argument("ansatz factor references unknown block");
    if (f.slot < 0 || std::size_t(f.slot) >= slots_.size())
      throw std::invalid_argument("ansatz factor references unknown slot");
  }
  for (std::size_t s = 0; s < slots_.size(); ++s) {
    const bool used = std::any_of(factors_.begin(), factors_.end(),
                                  [&](const Factor& f) { return std::size_t(f.slot) == s; });
    if (!used) throw std::invalid_argument("ansatz slot " + std::to_string(s) + " is unused");
    if (slots_[s].free) free_slots_.push_back(int(s));
  }
  if (free_slots_.empty())
    throw std::invalid_argument("ansatz has no free slots");
}

ProductAnsatz ProductAnsatz::from_pattern(const HamiltonianSplit& split,
                                          std::string_view pattern) {
  std::vector<int> slot_of_factor(pattern.size());
  for (std::size_t i = 0; i < pattern.size(); ++i) slot_of_factor[i] = int(i);
  return from_pattern(split, pattern, slot_of_factor);
}

ProductAnsatz ProductAnsatz::from_pattern(const HamiltonianSplit& split,
                                          std::string_view pattern,
                                          const std::vector<int>& slot_of_factor) {
  if (pattern.empty()) throw std::invalid_argument("empty ansatz pattern");
  if (slot_of_factor.size() != pattern.size())
    throw std::invalid_argument("slot map length must match pattern length");
  std::vector<Factor> factors;
  int max_slot = 0;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    const char c = pattern[i];
    int idx = -1;
    for (std::size_t b = 0; b < split.blocks.size(); ++b)
      if (!split.blocks[b].name.empty() && split.blocks[b].name[0] == c &&
          split.blocks[b].name.size() == 1)
        idx = int(b);
    if (idx < 0)
      throw std::invalid_argument(std::string("pattern letter '") + c +
                                  "' does not name a block of this split");
    factors.push_back({idx, slot_of_factor[i]});
    max_slot = std::max(max_slot, slot_of_factor[i]);
  }
  std::vector<Slot> slots(std::size_t(max_slot) + 1, Slot::make_free());
  return ProductAnsatz(split, std::move(factors), std::move(slots));
}

ProductAnsatz ProductAnsatz::from_pattern_palindrome(const HamiltonianSplit& split,
                                                     std::string_view pattern) {
  const int m = int(pattern.size());
  std::vector<int> slot_of_factor(pattern.size());
  for (int i = 0; i < m; ++i) slot_of_factor[std::size_t(i)] = std::min(i, m - 1 - i);
  return from_pattern(split, pattern, slot_of_factor);
}

std::string ProductAnsatz::pattern() const {
  std::string out;
  for (const auto& f : factors_) out += split_.blocks[std::size_t(f.block_index)].name;
  return out;
}

std::vector<double> ProductAnsatz::slot_values(const RealVector& free_params) const {
  if (free_params.size() != Eigen::Index(free_slots_.size()))
    throw std::invalid_argument("parameter vector length " +
                                std::to_string(free_params.size()) + " != free slot count " +
                                std::to_string(free_slots_.size()));
  std::vector<double> values(slots_.size());
  for (std::size_t s = 0; s < slots_.size(); ++s)
    values[s] = slots_[s].free ? 0.0 : slots_[s].fixed_value;
  for (std::size_t k = 0; k < free_slots_.size(); ++k)
    values[std::size_t(free_slots_[k])] = free_params(Eigen::Index(k));
  return values;
}

Matrix ProductAnsatz::unitary(const RealVector& free_params) const {
  const auto values = slot_values(free_params);
  Matrix u = Matrix::Identity(dim(), dim());
  for (int f = 0; f < factor_count(); ++f)
    u = u * factor_block(f).op->exp_itheta(values[std::size_t(factors_[std::size_t(f)].slot)]);
  return u;
}

}  // namespace varprop
