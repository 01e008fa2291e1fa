#pragma once

#include <cstdint>
#include <vector>

namespace globalwalk {

/// Square matrix of integer weights, row-major as a vector of rows.
using WeightMatrix = std::vector<std::vector<std::int64_t>>;

/// Maximum-weight perfect matching on a square matrix (Hungarian method,
/// O(n³) shortest augmenting paths). Returns column assigned to each row.
std::vector<int> max_weight_assignment(const WeightMatrix& weights);

std::int64_t assignment_weight(const WeightMatrix& weights, const std::vector<int>& assignment);

}  // namespace globalwalk
