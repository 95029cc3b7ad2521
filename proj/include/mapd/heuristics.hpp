#pragma once

#include <span>
#include <vector>

#include "mapd/grid_map.hpp"

namespace mapd {

/// Exact shortest-path lengths from every cell to a fixed set of target
/// cells (by default all endpoints), computed once by breadth-first search
/// outward from each target. Used as h-values by every space-time search.
class HeuristicTable {
 public:
  HeuristicTable() = default;

  explicit HeuristicTable(const GridMap& map) : HeuristicTable(map, map.endpoints()) {}

  HeuristicTable(const GridMap& map, const std::vector<CellId>& targets)
      : cells_(map.size()), slot_(map.size(), -1) {
    for (CellId t : targets) {
      if (!map.in_bounds(t)) throw ConfigError("heuristic target out of bounds");
      if (slot_[t] != -1) continue;
      slot_[t] = static_cast<int>(rows_.size());
      rows_.push_back(bfs_distances(map, t));
    }
  }

  bool has_target(CellId target) const {
    return target >= 0 && target < cells_ && slot_[target] != -1;
  }

  /// Distance from `from` to `target`; kInfinity when unreachable.
  int distance(CellId from, CellId target) const { return to(target)[from]; }

  /// Distances from all cells to `target`.
  std::span<const int> to(CellId target) const {
    if (!has_target(target))
      throw ConfigError("no heuristic row for cell " + std::to_string(target));
    return rows_[slot_[target]];
  }

 private:
  int cells_ = 0;
  std::vector<int> slot_;
  std::vector<std::vector<int>> rows_;
};

inline HeuristicTable precompute_heuristics(const GridMap& map) { return HeuristicTable(map); }

}  // namespace mapd
