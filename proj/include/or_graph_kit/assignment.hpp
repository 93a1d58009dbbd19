#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "or_graph_kit/error.hpp"

namespace orgk {

/// Dense row-major cost matrix.
class CostMatrix {
 public:
  CostMatrix() = default;
  CostMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> data_;
};

enum class Objective { minimize, maximize };

struct AssignmentProblem {
  CostMatrix cost;
  Objective mode = Objective::minimize;
};

struct Matching {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (row, col), sorted by row
  double total = 0.0;
};

namespace detail {

/// Minimum-cost matching of size min(|rows|, |cols|) over a sub-matrix.
/// Classic O(n^2 m) shortest augmenting path with potentials; requires the
/// smaller side as rows, so the caller passes `transposed` when needed.
inline double hungarian_value(const CostMatrix& c, const std::vector<std::size_t>& rows,
                              const std::vector<std::size_t>& cols,
                              std::vector<std::pair<std::size_t, std::size_t>>* out = nullptr) {
  const bool transpose = rows.size() > cols.size();
  const auto& R = transpose ? cols : rows;
  const auto& C = transpose ? rows : cols;
  const std::size_t n = R.size(), m = C.size();
  if (n == 0) return 0.0;
  auto at = [&](std::size_t i, std::size_t j) { return transpose ? c(C[j], R[i]) : c(R[i], C[j]); };

  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<bool> used(m + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = at(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) minv[j] = cur, way[j] = j0;
        if (minv[j] < delta) delta = minv[j], j1 = j;
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j])
          u[p[j]] += delta, v[j] -= delta;
        else
          minv[j] -= delta;
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  double total = 0.0;
  for (std::size_t j = 1; j <= m; ++j) {
    if (p[j] == 0) continue;
    total += at(p[j] - 1, j - 1);
    if (out) {
      if (transpose)
        out->emplace_back(C[j - 1], R[p[j] - 1]);
      else
        out->emplace_back(R[p[j] - 1], C[j - 1]);
    }
  }
  return total;
}

inline bool same_value(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace detail

/// Optimal assignment of size min(rows, cols). Among optimal matchings the
/// lexicographically smallest row-sorted list of (row, col) pairs is returned.
inline Matching solve_assignment(const AssignmentProblem& problem) {
  const CostMatrix& in = problem.cost;
  if (in.rows() == 0 || in.cols() == 0) throw Error(Errc::bad_cost, "empty cost matrix");
  CostMatrix c(in.rows(), in.cols());
  for (std::size_t r = 0; r < in.rows(); ++r)
    for (std::size_t k = 0; k < in.cols(); ++k) {
      const double v = in(r, k);
      if (!std::isfinite(v))
        throw Error(Errc::bad_cost, "non-finite entry at (" + std::to_string(r) + "," + std::to_string(k) + ")");
      c(r, k) = problem.mode == Objective::maximize ? -v : v;
    }

  std::vector<std::size_t> rows(c.rows()), cols(c.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  for (std::size_t i = 0; i < cols.size(); ++i) cols[i] = i;
  const double optimum = detail::hungarian_value(c, rows, cols);

  // Fix rows in order to the smallest column that still admits an optimal
  // completion; a row may stay unmatched only while rows outnumber columns.
  Matching result;
  double fixed = 0.0;
  while (!rows.empty()) {
    const std::size_t r = rows.front();
    std::vector<std::size_t> rest_rows(rows.begin() + 1, rows.end());
    bool placed = false;
    for (std::size_t ci = 0; ci < cols.size() && !placed; ++ci) {
      std::vector<std::size_t> rest_cols = cols;
      rest_cols.erase(rest_cols.begin() + static_cast<std::ptrdiff_t>(ci));
      const double v = fixed + c(r, cols[ci]) + detail::hungarian_value(c, rest_rows, rest_cols);
      if (detail::same_value(v, optimum)) {
        fixed += c(r, cols[ci]);
        result.pairs.emplace_back(r, cols[ci]);
        cols = std::move(rest_cols);
        placed = true;
      }
    }
    rows = std::move(rest_rows);
    if (cols.empty()) break;
  }

  result.total = 0.0;
  for (auto [r, k] : result.pairs) result.total += in(r, k);
  return result;
}

}  // namespace orgk
