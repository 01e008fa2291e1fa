#include "globalwalk/hungarian.hpp"

#include <algorithm>
#include <limits>

#include "globalwalk/errors.hpp"

namespace globalwalk {

std::vector<int> max_weight_assignment(const WeightMatrix& weights) {
  const int n = static_cast<int>(weights.size());
  for (const auto& row : weights) require(static_cast<int>(row.size()) == n, "matrix must be square");
  if (n == 0) return {};

  // Minimize cost = -weight with 1-based potentials u (rows), v (columns);
  // match[j] is the row matched to column j, 0 meaning free.
  constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
  std::vector<std::int64_t> u(n + 1, 0), v(n + 1, 0), min_slack(n + 1);
  std::vector<int> match(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  auto cost = [&](int i, int j) { return -weights[i - 1][j - 1]; };

  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::fill(min_slack.begin(), min_slack.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = match[j0];
      std::int64_t delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const std::int64_t cur = cost(i0, j) - u[i0] - v[j];
        if (cur < min_slack[j]) {
          min_slack[j] = cur;
          way[j] = j0;
        }
        if (min_slack[j] < delta) {
          delta = min_slack[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          min_slack[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= n; ++j) row_to_col[match[j] - 1] = j - 1;
  return row_to_col;
}

std::int64_t assignment_weight(const WeightMatrix& weights, const std::vector<int>& assignment) {
  std::int64_t total = 0;
  for (std::size_t i = 0; i < assignment.size(); ++i) total += weights[i][static_cast<std::size_t>(assignment[i])];
  return total;
}

}  // namespace globalwalk
