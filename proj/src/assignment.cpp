// SPDX-License-Identifier: Apache-2.0
#include "sripipe/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sripipe {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Shortest augmenting path solver (Jonker-Volgenant family) for nr <= nc.
// Returns the column assigned to each row.
template <typename CostAt>
std::vector<int> solve_rect(int nr, int nc, CostAt cost_at) {
  std::vector<double> u(static_cast<std::size_t>(nr), 0.0);
  std::vector<double> v(static_cast<std::size_t>(nc), 0.0);
  std::vector<double> shortest(static_cast<std::size_t>(nc));
  std::vector<int> path(static_cast<std::size_t>(nc), -1);
  std::vector<int> col4row(static_cast<std::size_t>(nr), -1);
  std::vector<int> row4col(static_cast<std::size_t>(nc), -1);
  std::vector<char> scanned_rows(static_cast<std::size_t>(nr));
  std::vector<int> remaining(static_cast<std::size_t>(nc));
  std::vector<char> scanned_cols(static_cast<std::size_t>(nc));

  for (int cur_row = 0; cur_row < nr; ++cur_row) {
    double min_val = 0.0;
    int i = cur_row;
    int num_remaining = nc;
    for (int j = 0; j < nc; ++j) remaining[static_cast<std::size_t>(j)] = j;
    std::fill(scanned_rows.begin(), scanned_rows.end(), 0);
    std::fill(scanned_cols.begin(), scanned_cols.end(), 0);
    std::fill(shortest.begin(), shortest.end(), kInf);

    int sink = -1;
    while (sink == -1) {
      int index = -1;
      double lowest = kInf;
      scanned_rows[static_cast<std::size_t>(i)] = 1;
      for (int it = 0; it < num_remaining; ++it) {
        const int j = remaining[static_cast<std::size_t>(it)];
        const double reduced = min_val + cost_at(i, j) -
                               u[static_cast<std::size_t>(i)] -
                               v[static_cast<std::size_t>(j)];
        if (reduced < shortest[static_cast<std::size_t>(j)]) {
          path[static_cast<std::size_t>(j)] = i;
          shortest[static_cast<std::size_t>(j)] = reduced;
        }
        const double sj = shortest[static_cast<std::size_t>(j)];
        if (sj < lowest ||
            (sj == lowest && row4col[static_cast<std::size_t>(j)] == -1)) {
          lowest = sj;
          index = it;
        }
      }
      min_val = lowest;
      const int j = remaining[static_cast<std::size_t>(index)];
      if (row4col[static_cast<std::size_t>(j)] == -1)
        sink = j;
      else
        i = row4col[static_cast<std::size_t>(j)];
      scanned_cols[static_cast<std::size_t>(j)] = 1;
      remaining[static_cast<std::size_t>(index)] =
          remaining[static_cast<std::size_t>(--num_remaining)];
    }

    u[static_cast<std::size_t>(cur_row)] += min_val;
    for (int ip = 0; ip < nr; ++ip) {
      if (!scanned_rows[static_cast<std::size_t>(ip)] || ip == cur_row)
        continue;
      u[static_cast<std::size_t>(ip)] +=
          min_val -
          shortest[static_cast<std::size_t>(col4row[static_cast<std::size_t>(ip)])];
    }
    for (int j = 0; j < nc; ++j) {
      if (!scanned_cols[static_cast<std::size_t>(j)]) continue;
      v[static_cast<std::size_t>(j)] -=
          min_val - shortest[static_cast<std::size_t>(j)];
    }

    int j = sink;
    while (true) {
      const int ip = path[static_cast<std::size_t>(j)];
      row4col[static_cast<std::size_t>(j)] = ip;
      std::swap(col4row[static_cast<std::size_t>(ip)], j);
      if (ip == cur_row) break;
    }
  }
  return col4row;
}

double raw_optimal_cost(const CostMatrix& cost) {
  const int nr = cost.rows();
  const int nc = cost.cols();
  if (nr == 0 || nc == 0) return 0.0;
  double total = 0.0;
  if (nr <= nc) {
    const auto col4row =
        solve_rect(nr, nc, [&](int r, int c) { return cost.at(r, c); });
    for (int r = 0; r < nr; ++r) total += cost.at(r, col4row[static_cast<std::size_t>(r)]);
  } else {
    const auto row4col =
        solve_rect(nc, nr, [&](int c, int r) { return cost.at(r, c); });
    for (int c = 0; c < nc; ++c) total += cost.at(row4col[static_cast<std::size_t>(c)], c);
  }
  return total;
}

// Optimal cost of the subproblem over the rows and cols still available.
double sub_optimal_cost(const CostMatrix& cost, const std::vector<char>& row_used,
                        const std::vector<char>& col_used) {
  std::vector<int> rows, cols;
  for (int r = 0; r < cost.rows(); ++r)
    if (!row_used[static_cast<std::size_t>(r)]) rows.push_back(r);
  for (int c = 0; c < cost.cols(); ++c)
    if (!col_used[static_cast<std::size_t>(c)]) cols.push_back(c);
  if (rows.empty() || cols.empty()) return 0.0;
  CostMatrix sub(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols.size(); ++c)
      sub.at(static_cast<int>(r), static_cast<int>(c)) =
          cost.at(rows[r], cols[c]);
  return raw_optimal_cost(sub);
}

}  // namespace

LapResult solve_lap(const CostMatrix& cost) {
  const int nr = cost.rows();
  const int nc = cost.cols();
  LapResult result;
  result.col_for_row.assign(static_cast<std::size_t>(nr), -1);
  if (nr == 0 || nc == 0) return result;

  const double optimal = raw_optimal_cost(cost);
  const double tol = 1e-9 * std::max(1.0, std::fabs(optimal));

  // Pin each row in turn to its smallest column that still admits an optimal
  // completion, which makes the emitted optimum lexicographically canonical.
  std::vector<char> row_used(static_cast<std::size_t>(nr), 0);
  std::vector<char> col_used(static_cast<std::size_t>(nc), 0);
  double fixed_cost = 0.0;
  int assigned = 0;
  const int target = std::min(nr, nc);
  const auto completion_cost = [&](int r, int c) {
    col_used[static_cast<std::size_t>(c)] = 1;
    const double total =
        fixed_cost + cost.at(r, c) + sub_optimal_cost(cost, row_used, col_used);
    col_used[static_cast<std::size_t>(c)] = 0;
    return total;
  };

  for (int r = 0; r < nr && assigned < target; ++r) {
    row_used[static_cast<std::size_t>(r)] = 1;
    int chosen = -1;
    for (int c = 0; c < nc && chosen == -1; ++c) {
      if (col_used[static_cast<std::size_t>(c)]) continue;
      if (completion_cost(r, c) <= optimal + tol) chosen = c;
    }
    if (chosen == -1 && nr > nc) {
      // No column keeps the total optimal, so this row sits out.
      const double skipped =
          fixed_cost + sub_optimal_cost(cost, row_used, col_used);
      if (skipped <= optimal + tol) {
        row_used[static_cast<std::size_t>(r)] = 0;
        continue;
      }
    }
    if (chosen == -1) {
      // Numerical safety net: take the cheapest completion.
      double best = kInf;
      for (int c = 0; c < nc; ++c) {
        if (col_used[static_cast<std::size_t>(c)]) continue;
        const double total = completion_cost(r, c);
        if (total < best) {
          best = total;
          chosen = c;
        }
      }
    }
    result.col_for_row[static_cast<std::size_t>(r)] = chosen;
    col_used[static_cast<std::size_t>(chosen)] = 1;
    fixed_cost += cost.at(r, chosen);
    ++assigned;
  }
  result.total_cost = fixed_cost;
  return result;
}

AssignResult assign(const CostMatrix& cost, double gate) {
  const LapResult lap = solve_lap(cost);
  AssignResult result;
  std::vector<char> col_matched(static_cast<std::size_t>(cost.cols()), 0);
  // Boundary costs equal to 1 - gate count as matches (tolerance 1e-12).
  const double limit = 1.0 - gate + 1e-12;
  for (int r = 0; r < cost.rows(); ++r) {
    const int c = lap.col_for_row[static_cast<std::size_t>(r)];
    if (c != -1 && cost.at(r, c) <= limit) {
      result.matches.emplace_back(r, c);
      col_matched[static_cast<std::size_t>(c)] = 1;
    } else {
      result.unmatched_rows.push_back(r);
    }
  }
  for (int c = 0; c < cost.cols(); ++c)
    if (!col_matched[static_cast<std::size_t>(c)])
      result.unmatched_cols.push_back(c);
  return result;
}

}  // namespace sripipe
