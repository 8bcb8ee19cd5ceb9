#pragma once

// Exact rectangular linear sum assignment (shortest augmenting path,
// Jonker-Volgenant family), O(n^3) worst case.

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace fresco {

/// Dense row-major cost matrix with finite, non-negative entries.
class CostMatrix {
 public:
  CostMatrix() = default;
  CostMatrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  CostMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  std::span<const double> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }

  CostMatrix transposed() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct Assignment {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (row, col), sorted by row
  std::vector<std::size_t> unmatched_rows;
  std::vector<std::size_t> unmatched_cols;
  double total_cost = 0.0;
};

/// Minimum-cost partial bijection of size min(rows, cols). Deterministic:
/// among equal reduced costs the lowest column index (free columns first) is
/// taken. An empty matrix yields an empty assignment.
Assignment linear_sum_assignment(const CostMatrix& cost);

}  // namespace fresco
