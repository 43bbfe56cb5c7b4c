#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace crosswatch {

/// Minimum-cost assignment on a rectangular cost matrix (rows x cols).
/// Returns min(rows, cols) pairs (row, col), each row and column used at
/// most once, ordered by row. Throws std::invalid_argument on non-finite
/// entries.
std::vector<std::pair<int, int>> hungarian_assign(const Eigen::MatrixXd& cost);

}  // namespace crosswatch
