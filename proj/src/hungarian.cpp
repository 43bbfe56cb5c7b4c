#include <crosswatch/hungarian.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace crosswatch {

namespace {

// Potentials method with augmenting paths, O(n^2 m). Rows must not exceed
// columns; every row ends up assigned. 1-based internally, column 0 is the
// virtual start of each augmenting path.
std::vector<int> solve(const Eigen::MatrixXd& a) {
  const int n = static_cast<int>(a.rows());
  const int m = static_cast<int>(a.cols());
  const double inf = std::numeric_limits<double>::infinity();

  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<int> p(m + 1, 0), way(m + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      int j1 = -1;
      double delta = inf;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = a(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
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
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= m; ++j)
    if (p[j] != 0) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

}  // namespace

std::vector<std::pair<int, int>> hungarian_assign(const Eigen::MatrixXd& cost) {
  const int rows = static_cast<int>(cost.rows());
  const int cols = static_cast<int>(cost.cols());
  if (rows == 0 || cols == 0) return {};
  if (!cost.allFinite())
    throw std::invalid_argument("cost matrix has a non-finite entry");

  std::vector<std::pair<int, int>> result;
  if (rows <= cols) {
    const auto row_to_col = solve(cost);
    result.reserve(rows);
    for (int i = 0; i < rows; ++i) result.emplace_back(i, row_to_col[i]);
  } else {
    const auto col_to_row = solve(cost.transpose());
    result.reserve(cols);
    for (int j = 0; j < cols; ++j) result.emplace_back(col_to_row[j], j);
    std::sort(result.begin(), result.end());
  }
  return result;
}

}  // namespace crosswatch
