#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

namespace cmfuse {

// Maximum-weight one-to-one assignment on a rows x cols integer weight matrix
// (Hungarian algorithm with potentials, O(n^2 m)). Every line of the smaller
// side is matched. Returns the total weight; `match_of_row` receives the
// column chosen for each row (nullopt when rows > cols leaves it unmatched).
inline std::int64_t max_weight_assignment(
    const std::vector<std::vector<std::int64_t>>& weights,
    std::vector<std::optional<std::size_t>>* match_of_row = nullptr) {
  const std::size_t rows = weights.size();
  const std::size_t cols = rows == 0 ? 0 : weights.front().size();
  if (match_of_row) match_of_row->assign(rows, std::nullopt);
  if (rows == 0 || cols == 0) return 0;

  // Work on n <= m; 1-based, index 0 is the sentinel.
  const bool transposed = rows > cols;
  const std::size_t n = transposed ? cols : rows;
  const std::size_t m = transposed ? rows : cols;
  auto cost = [&](std::size_t i, std::size_t j) {
    return transposed ? -weights[j - 1][i - 1] : -weights[i - 1][j - 1];
  };

  constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
  std::vector<std::int64_t> u(n + 1, 0), v(m + 1, 0);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<std::int64_t> minv(m + 1, kInf);
    std::vector<bool> used(m + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      std::int64_t delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const std::int64_t cur = cost(i0, j) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::int64_t total = 0;
  for (std::size_t j = 1; j <= m; ++j) {
    if (p[j] == 0) continue;
    const std::size_t row = transposed ? j - 1 : p[j] - 1;
    const std::size_t col = transposed ? p[j] - 1 : j - 1;
    total += weights[row][col];
    if (match_of_row) (*match_of_row)[row] = col;
  }
  return total;
}

}  // namespace cmfuse
