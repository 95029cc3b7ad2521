#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <vector>

#include "mapd/types.hpp"

namespace mapd {

/// Dense rows x cols cost table (rows: agents, cols: endpoints).
class CostMatrix {
 public:
  CostMatrix() = default;
  CostMatrix(int rows, int cols, std::int64_t fill = 0) : rows_(rows), cols_(cols) {
    if (rows < 0 || cols < 0) throw ConfigError("cost matrix dimensions must be nonnegative");
    data_.assign(static_cast<std::size_t>(rows) * cols, fill);
  }
  CostMatrix(std::initializer_list<std::initializer_list<std::int64_t>> init) {
    rows_ = static_cast<int>(init.size());
    cols_ = rows_ ? static_cast<int>(init.begin()->size()) : 0;
    for (const auto& row : init) {
      if (static_cast<int>(row.size()) != cols_) throw ConfigError("cost matrix rows must have equal length");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::int64_t& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  std::int64_t operator()(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<std::int64_t> data_;
};

struct Assignment {
  std::vector<int> col_of_row;
  std::int64_t cost = 0;
};

/// Minimum-cost assignment of every row to a distinct column (rows <= cols),
/// Hungarian method with row-by-row augmentation, O(rows^2 * cols).
/// Ties between optimal matchings are broken deterministically by adding the
/// perturbation (row * cols + col) at a scale below the smallest cost step.
inline Assignment hungarian(const CostMatrix& costs) {
  const int n = costs.rows();
  const int m = costs.cols();
  Assignment result;
  if (n == 0) return result;
  if (n > m) throw ConfigError("hungarian: more rows than columns");

  std::int64_t max_cost = 0;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < m; ++c) {
      if (costs(r, c) < 0) throw ConfigError("hungarian: negative cost");
      max_cost = std::max(max_cost, costs(r, c));
    }
  // Scale so that the perturbation sum (< n * n * m) cannot outweigh a unit cost difference.
  const std::int64_t scale = static_cast<std::int64_t>(n) * n * m + 1;
  constexpr std::int64_t kLimit = std::numeric_limits<std::int64_t>::max() / 8;
  if (max_cost > kLimit / scale / (n + 1)) throw ConfigError("hungarian: cost overflow");
  auto a = [&](int r, int c) { return costs(r - 1, c - 1) * scale + static_cast<std::int64_t>(r - 1) * m + (c - 1); };

  const std::int64_t inf = kLimit;
  std::vector<std::int64_t> u(n + 1, 0), v(m + 1, 0);
  std::vector<int> p(m + 1, 0), way(m + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<std::int64_t> minv(m + 1, inf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      std::int64_t delta = inf;
      int j1 = 0;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const std::int64_t cur = a(i0, j) - u[i0] - v[j];
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
  result.col_of_row.assign(n, -1);
  for (int j = 1; j <= m; ++j)
    if (p[j] != 0) result.col_of_row[p[j] - 1] = j - 1;
  for (int r = 0; r < n; ++r) result.cost += costs(r, result.col_of_row[r]);
  return result;
}

enum class EndpointKind { kPickup, kParking };

/// CENTRAL's modified costs for `base` (free agents x candidate endpoints):
///   pickup:  c * C * base
///   parking: c * C^2 + base
/// with c the number of free agents and C the largest finite base cost + 1.
/// Any pickup is cheaper than any parking for the same agent, and one unit
/// of pickup distance outweighs all parking distances together.
/// Unreachable pairs (kInfinity) get a sentinel larger than any total of
/// finite entries, so a matching uses one only when no other exists.
inline CostMatrix modified_costs(const std::vector<std::vector<int>>& base, const std::vector<EndpointKind>& kinds) {
  const int rows = static_cast<int>(base.size());
  const int cols = static_cast<int>(kinds.size());
  std::int64_t max_base = 0;
  for (const auto& row : base) {
    if (static_cast<int>(row.size()) != cols) throw ConfigError("modified_costs: ragged base cost table");
    for (int x : row) {
      if (x < 0) throw ConfigError("modified_costs: negative base cost");
      if (x < kInfinity) max_base = std::max<std::int64_t>(max_base, x);
    }
  }
  const std::int64_t c = rows;
  const std::int64_t big_c = max_base + 1;
  constexpr std::int64_t kLimit = std::int64_t{1} << 52;
  if (big_c > kLimit / std::max<std::int64_t>(1, c) / big_c) throw ConfigError("modified_costs: cost overflow");
  const std::int64_t parking_offset = c * big_c * big_c;
  const std::int64_t sentinel = (parking_offset + big_c) * (c + 1);
  if (sentinel > kLimit) throw ConfigError("modified_costs: cost overflow");
  CostMatrix out(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int k = 0; k < cols; ++k) {
      const int x = base[r][k];
      if (x >= kInfinity) out(r, k) = sentinel;
      else if (kinds[k] == EndpointKind::kPickup) out(r, k) = c * big_c * x;
      else out(r, k) = parking_offset + x;
    }
  return out;
}

}  // namespace mapd
