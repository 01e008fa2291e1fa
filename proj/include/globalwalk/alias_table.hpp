#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "globalwalk/rng.hpp"

namespace globalwalk {

/// Walker/Vose alias table: O(n) construction, O(1) sampling from a fixed
/// discrete distribution given by non-negative weights.
class AliasTable {
 public:
  AliasTable() = default;
  explicit AliasTable(std::span<const double> weights);

  std::size_t size() const { return prob_.size(); }
  std::size_t sample(Rng& rng) const;
  /// Normalized probability of outcome i.
  double probability(std::size_t i) const { return normalized_.at(i); }

 private:
  std::vector<double> prob_;
  std::vector<std::uint32_t> alias_;
  std::vector<double> normalized_;
};

}  // namespace globalwalk
