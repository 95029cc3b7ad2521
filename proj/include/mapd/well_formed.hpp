#pragma once

#include <algorithm>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "mapd/grid_map.hpp"
#include "mapd/task.hpp"

namespace mapd {

struct MapdInstance {
  GridMap map;
  std::vector<CellId> agent_starts;
  std::vector<Task> tasks;
};

/// Structural validation of an instance. Starts must be distinct passable
/// cells, task locations must be task endpoints. With
/// `require_nontask_starts`, starts must also be non-task endpoints.
inline void validate_instance(const MapdInstance& inst, bool require_nontask_starts) {
  const GridMap& map = inst.map;
  std::vector<CellId> seen;
  for (std::size_t i = 0; i < inst.agent_starts.size(); ++i) {
    const CellId s = inst.agent_starts[i];
    const std::string who = "agent " + std::to_string(i);
    if (!map.passable(s)) throw ConfigError(who + ": start is not a passable cell");
    if (std::find(seen.begin(), seen.end(), s) != seen.end())
      throw ConfigError(who + ": start coincides with another agent's start");
    if (require_nontask_starts && !map.is_nontask_endpoint(s))
      throw ConfigError(who + ": start is not a non-task endpoint ('r')");
    seen.push_back(s);
  }
  for (const Task& t : inst.tasks) {
    if (!map.is_task_endpoint(t.pickup) || !map.is_task_endpoint(t.delivery))
      throw ConfigError("task " + std::to_string(t.id) + ": pickup and delivery must be task endpoints ('e')");
  }
}

struct WellFormedViolation {
  char condition = '?';  // 'a', 'b' or 'c'
  std::string detail;
  CellId first = kNoCell;   // (c): the disconnected endpoint pair
  CellId second = kNoCell;
};

struct WellFormedReport {
  std::vector<WellFormedViolation> violations;

  bool well_formed() const { return violations.empty(); }
  bool violates(char condition) const {
    return std::any_of(violations.begin(), violations.end(),
                       [&](const auto& v) { return v.condition == condition; });
  }
};

/// Checks the three well-formedness conditions:
///   (a) finitely many tasks (`task_count` is nullopt for an unbounded source);
///   (b) at least as many non-task endpoints as agents;
///   (c) every two endpoints are joined by a path that avoids all other
///       endpoints.
/// Agent starts count as endpoints even when the map does not mark them.
/// Condition (c) is checked with one restricted BFS per endpoint, which
/// answers every pair involving it: O(|endpoints| * |V|).
inline WellFormedReport check_well_formed(const GridMap& map, const std::vector<CellId>& agent_starts,
                                          std::optional<std::size_t> task_count) {
  WellFormedReport report;
  if (!task_count) report.violations.push_back({'a', "the task source is unbounded", kNoCell, kNoCell});

  std::vector<CellId> endpoints = map.endpoints();
  for (CellId s : agent_starts)
    if (map.passable(s) && !map.is_endpoint(s)) endpoints.push_back(s);
  std::sort(endpoints.begin(), endpoints.end());
  endpoints.erase(std::unique(endpoints.begin(), endpoints.end()), endpoints.end());

  const auto nontask = static_cast<std::size_t>(
      std::count_if(endpoints.begin(), endpoints.end(), [&](CellId c) { return !map.is_task_endpoint(c); }));
  if (nontask < agent_starts.size())
    report.violations.push_back({'b',
                                 std::to_string(agent_starts.size()) + " agents but only " +
                                     std::to_string(nontask) + " non-task endpoints",
                                 kNoCell, kNoCell});

  std::vector<char> is_ep(map.size(), 0);
  for (CellId e : endpoints) is_ep[e] = 1;
  std::vector<int> mark(map.size(), -1);
  std::vector<char> touched(map.size(), 0);
  for (std::size_t i = 0; i < endpoints.size(); ++i) {
    const CellId u = endpoints[i];
    std::fill(touched.begin(), touched.end(), 0);
    std::deque<CellId> queue{u};
    mark[u] = static_cast<int>(i);
    while (!queue.empty()) {
      const CellId x = queue.front();
      queue.pop_front();
      for (CellId n : map.adjacent(x)) {
        if (is_ep[n]) {
          touched[n] = 1;
          continue;
        }
        if (mark[n] == static_cast<int>(i)) continue;
        mark[n] = static_cast<int>(i);
        queue.push_back(n);
      }
    }
    for (std::size_t j = i + 1; j < endpoints.size(); ++j) {
      const CellId w = endpoints[j];
      if (touched[w]) continue;
      const Coord a = map.coord(u);
      const Coord b = map.coord(w);
      report.violations.push_back(
          {'c',
           "no path between endpoints (" + std::to_string(a.row) + "," + std::to_string(a.col) + ") and (" +
               std::to_string(b.row) + "," + std::to_string(b.col) + ") avoids all other endpoints",
           u, w});
    }
  }
  return report;
}

inline WellFormedReport check_well_formed(const MapdInstance& inst) {
  return check_well_formed(inst.map, inst.agent_starts, inst.tasks.size());
}

}  // namespace mapd
