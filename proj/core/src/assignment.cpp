#include "fresco/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fresco/error.hpp"

namespace fresco {

CostMatrix::CostMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw Error(Errc::DimensionMismatch, "cost matrix",
                std::to_string(rows_) + "x" + std::to_string(cols_) + " needs " + std::to_string(rows_ * cols_) +
                    " entries");
  }
}

CostMatrix CostMatrix::transposed() const {
  CostMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  }
  return t;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::ptrdiff_t kNone = -1;

// Shortest augmenting path solver for rows <= cols. Dual variables u (rows)
// and v (cols) keep every reduced cost non-negative; each row is inserted
// by a Dijkstra search over reduced costs ending at a free column.
class AugmentingPathSolver {
 public:
  explicit AugmentingPathSolver(const CostMatrix& cost)
      : cost_(cost),
        nr_(cost.rows()),
        nc_(cost.cols()),
        u_(nr_, 0.0),
        v_(nc_, 0.0),
        shortest_(nc_, kInf),
        path_(nc_, kNone),
        col4row_(nr_, kNone),
        row4col_(nc_, kNone),
        visited_row_(nr_, false),
        visited_col_(nc_, false),
        remaining_(nc_) {}

  std::vector<std::ptrdiff_t> solve() {
    for (std::size_t row = 0; row < nr_; ++row) {
      double min_val = 0.0;
      const std::ptrdiff_t sink = find_path(row, min_val);

      u_[row] += min_val;
      for (std::size_t i = 0; i < nr_; ++i) {
        if (visited_row_[i] && i != row) u_[i] += min_val - shortest_[static_cast<std::size_t>(col4row_[i])];
      }
      for (std::size_t j = 0; j < nc_; ++j) {
        if (visited_col_[j]) v_[j] -= min_val - shortest_[j];
      }

      std::ptrdiff_t j = sink;
      while (true) {
        const std::ptrdiff_t i = path_[static_cast<std::size_t>(j)];
        row4col_[static_cast<std::size_t>(j)] = i;
        std::swap(col4row_[static_cast<std::size_t>(i)], j);
        if (static_cast<std::size_t>(i) == row) break;
      }
    }
    return col4row_;
  }

 private:
  std::ptrdiff_t find_path(std::size_t start_row, double& min_val) {
    std::size_t num_remaining = nc_;
    for (std::size_t it = 0; it < nc_; ++it) remaining_[it] = nc_ - it - 1;  // scanned back to front: ascending columns
    std::fill(visited_row_.begin(), visited_row_.end(), false);
    std::fill(visited_col_.begin(), visited_col_.end(), false);
    std::fill(shortest_.begin(), shortest_.end(), kInf);

    std::ptrdiff_t sink = kNone;
    std::size_t i = start_row;
    min_val = 0.0;
    while (sink == kNone) {
      visited_row_[i] = true;
      std::size_t best = 0;
      double lowest = kInf;
      bool found = false;
      for (std::size_t it = num_remaining; it-- > 0;) {
        const std::size_t j = remaining_[it];
        const double reduced = min_val + cost_(i, j) - u_[i] - v_[j];
        if (reduced < shortest_[j]) {
          path_[j] = static_cast<std::ptrdiff_t>(i);
          shortest_[j] = reduced;
        }
        // Ties: prefer a free column, then the lowest column index (scan order).
        if (!found || shortest_[j] < lowest ||
            (shortest_[j] == lowest && row4col_[j] == kNone && row4col_[remaining_[best]] != kNone)) {
          lowest = shortest_[j];
          best = it;
          found = true;
        }
      }
      min_val = lowest;
      const std::size_t j = remaining_[best];
      if (row4col_[j] == kNone) {
        sink = static_cast<std::ptrdiff_t>(j);
      } else {
        i = static_cast<std::size_t>(row4col_[j]);
      }
      visited_col_[j] = true;
      // Remove while keeping ascending column order for the scan.
      for (std::size_t k = best; k + 1 < num_remaining; ++k) remaining_[k] = remaining_[k + 1];
      --num_remaining;
    }
    return sink;
  }

  const CostMatrix& cost_;
  std::size_t nr_;
  std::size_t nc_;
  std::vector<double> u_;
  std::vector<double> v_;
  std::vector<double> shortest_;
  std::vector<std::ptrdiff_t> path_;
  std::vector<std::ptrdiff_t> col4row_;
  std::vector<std::ptrdiff_t> row4col_;
  std::vector<bool> visited_row_;
  std::vector<bool> visited_col_;
  std::vector<std::size_t> remaining_;
};

}  // namespace

Assignment linear_sum_assignment(const CostMatrix& cost) {
  Assignment out;
  const std::size_t nr = cost.rows();
  const std::size_t nc = cost.cols();
  for (std::size_t r = 0; r < nr; ++r) {
    for (double x : cost.row(r)) {
      if (!std::isfinite(x)) throw Error(Errc::InvariantViolation, "cost matrix", "entries must be finite");
    }
  }
  if (nr == 0 || nc == 0) {
    for (std::size_t r = 0; r < nr; ++r) out.unmatched_rows.push_back(r);
    for (std::size_t c = 0; c < nc; ++c) out.unmatched_cols.push_back(c);
    return out;
  }

  const bool transpose = nr > nc;
  const CostMatrix work = transpose ? cost.transposed() : cost;
  const std::vector<std::ptrdiff_t> col4row = AugmentingPathSolver(work).solve();

  std::vector<bool> row_used(nr, false);
  std::vector<bool> col_used(nc, false);
  for (std::size_t a = 0; a < col4row.size(); ++a) {
    const std::size_t b = static_cast<std::size_t>(col4row[a]);
    const std::size_t r = transpose ? b : a;
    const std::size_t c = transpose ? a : b;
    out.pairs.emplace_back(r, c);
    row_used[r] = true;
    col_used[c] = true;
  }
  std::sort(out.pairs.begin(), out.pairs.end());
  for (const auto& [r, c] : out.pairs) out.total_cost += cost(r, c);
  for (std::size_t r = 0; r < nr; ++r) {
    if (!row_used[r]) out.unmatched_rows.push_back(r);
  }
  for (std::size_t c = 0; c < nc; ++c) {
    if (!col_used[c]) out.unmatched_cols.push_back(c);
  }
  return out;
}

}  // namespace fresco
