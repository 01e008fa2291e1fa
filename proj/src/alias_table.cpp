#include "globalwalk/alias_table.hpp"

#include <algorithm>
#include <numeric>

#include "globalwalk/errors.hpp"

namespace globalwalk {

AliasTable::AliasTable(std::span<const double> weights) {
  const std::size_t n = weights.size();
  require(n > 0, "alias table needs at least one weight");
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  require(total > 0.0, "alias table weights must have positive sum");

  normalized_.resize(n);
  prob_.assign(n, 0.0);
  alias_.resize(n);
  std::vector<double> scaled(n);
  std::vector<std::uint32_t> small, large;
  for (std::size_t i = 0; i < n; ++i) {
    require(weights[i] >= 0.0, "alias table weights must be non-negative");
    normalized_[i] = weights[i] / total;
    scaled[i] = normalized_[i] * static_cast<double>(n);
    alias_[i] = static_cast<std::uint32_t>(i);
    (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
  }
  while (!small.empty() && !large.empty()) {
    const auto s = small.back();
    small.pop_back();
    const auto l = large.back();
    prob_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  // Leftovers are 1 up to rounding.
  for (auto i : large) prob_[i] = 1.0;
  const auto heaviest = static_cast<std::uint32_t>(
      std::max_element(normalized_.begin(), normalized_.end()) - normalized_.begin());
  for (auto i : small) {
    prob_[i] = normalized_[i] > 0.0 ? 1.0 : 0.0;
    if (prob_[i] == 0.0) alias_[i] = heaviest;
  }
}

std::size_t AliasTable::sample(Rng& rng) const {
  const double u = uniform01(rng) * static_cast<double>(prob_.size());
  const auto column = static_cast<std::size_t>(u);
  const double frac = u - static_cast<double>(column);
  return frac < prob_[column] ? column : alias_[column];
}

}  // namespace globalwalk
