// SPDX-License-Identifier: Apache-2.0
// Minimum-cost linear assignment with a deterministic tie-break.
#pragma once

#include <utility>
#include <vector>

namespace sripipe {

class CostMatrix {
 public:
  CostMatrix() = default;
  CostMatrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols),
        data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols),
              fill) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double& at(int r, int c) { return data_[index(r, c)]; }
  double at(int r, int c) const { return data_[index(r, c)]; }

 private:
  std::size_t index(int r, int c) const {
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) +
           static_cast<std::size_t>(c);
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

struct LapResult {
  // col assigned to each row, -1 when the row is left out (rows > cols)
  std::vector<int> col_for_row;
  double total_cost = 0.0;
};

// Jonker-Volgenant shortest augmenting path. Among equal-cost optima the
// result is the lexicographically smallest col_for_row vector.
LapResult solve_lap(const CostMatrix& cost);

struct AssignResult {
  std::vector<std::pair<int, int>> matches;  // (row, col), sorted by row
  std::vector<int> unmatched_rows;
  std::vector<int> unmatched_cols;
};

// Solves the assignment, then drops any match whose cost exceeds 1 - gate.
AssignResult assign(const CostMatrix& cost, double gate);

}  // namespace sripipe
