#pragma once

#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "mapd/grid_map.hpp"
#include "mapd/heuristics.hpp"
#include "mapd/path.hpp"
#include "mapd/space_time_astar.hpp"

namespace mapd {

/// One-shot MAPF query: move every agent from its start to its goal, all
/// starting at `start_time`, around the fixed paths in `obstacles`.
struct MapfQuery {
  std::vector<CellId> starts;
  std::vector<CellId> goals;
  Timestep start_time = 0;
  const ReservationTable* obstacles = nullptr;
};

struct CbsOptions {
  long node_cap = 50'000;
};

enum class CbsStatus { kSolved, kUnsolvable, kNodeCap };

struct CbsResult {
  CbsStatus status = CbsStatus::kUnsolvable;
  std::vector<Path> paths;
  long flowtime = 0;
  long expanded = 0;
  std::string diagnostic;

  bool solved() const { return status == CbsStatus::kSolved; }
};

struct Conflict {
  CollisionKind kind = CollisionKind::kVertex;
  AgentId first = kNoAgent;
  AgentId second = kNoAgent;
  CellId cell = kNoCell;
  CellId other = kNoCell;
  Timestep time = 0;
};

/// Earliest conflict among `paths` (terminal rests included); at equal time
/// vertex conflicts come before edge conflicts, then by agent pair.
inline std::optional<Conflict> detect_first_conflict(const GridMap& map, const std::vector<Path>& paths,
                                                     Timestep from) {
  const auto found = find_collisions(map, paths, from);
  if (found.empty()) return std::nullopt;
  const Collision* best = &found.front();
  for (const Collision& c : found)
    if (c.time < best->time ||
        (c.time == best->time && std::tie(c.kind, c.first, c.second) < std::tie(best->kind, best->first, best->second)))
      best = &c;
  return Conflict{best->kind, best->first, best->second, best->cell, best->other, best->time};
}

namespace detail {

struct CtConstraint {
  AgentId agent;
  bool is_edge;
  CellId cell;
  CellId other;
  Timestep time;
};

struct CtNode {
  int parent;
  std::optional<CtConstraint> added;
  std::vector<Path> paths;
  long cost;
  int conflicts;
};

inline long flowtime(const std::vector<Path>& paths, Timestep from) {
  long sum = 0;
  for (const Path& p : paths) sum += p.end_time() - from;
  return sum;
}

}  // namespace detail

/// Conflict-Based Search minimizing flowtime (sum over agents of the
/// timestep of final arrival). Best-first over constraint-tree nodes by
/// cost, then fewer conflicts, then creation order.
inline CbsResult cbs_solve(const GridMap& map, const HeuristicTable& h, const MapfQuery& q, CbsOptions options = {}) {
  CbsResult result;
  const int k = static_cast<int>(q.starts.size());
  if (static_cast<int>(q.goals.size()) != k) throw ConfigError("cbs: starts and goals differ in size");
  const Timestep t0 = q.start_time;

  std::vector<detail::CtNode> nodes;
  nodes.reserve(256);
  auto constraints_for = [&](int node, AgentId agent) {
    SearchConstraints sc;
    for (int n = node; n >= 0; n = nodes[n].parent) {
      const auto& c = nodes[n].added;
      if (!c || c->agent != agent) continue;
      if (c->is_edge) sc.edges.insert({c->cell, c->other, c->time});
      else sc.vertices.insert({c->cell, c->time});
    }
    return sc;
  };

  detail::CtNode root{-1, std::nullopt, {}, 0, 0};
  for (AgentId a = 0; a < k; ++a) {
    auto p = plan_constrained(map, h, q.starts[a], t0, q.goals[a], q.obstacles, nullptr);
    if (!p) {
      result.status = CbsStatus::kUnsolvable;
      result.diagnostic = "agent " + std::to_string(a) + " has no path to its goal";
      return result;
    }
    root.paths.push_back(std::move(*p));
  }
  root.cost = detail::flowtime(root.paths, t0);
  root.conflicts = static_cast<int>(find_collisions(map, root.paths, t0).size());
  nodes.push_back(std::move(root));

  using Entry = std::tuple<long, int, int>;  // cost, conflicts, node index
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  open.push({nodes[0].cost, nodes[0].conflicts, 0});

  while (!open.empty()) {
    const int idx = std::get<2>(open.top());
    open.pop();
    ++result.expanded;
    const auto conflict = detect_first_conflict(map, nodes[idx].paths, t0);
    if (!conflict) {
      result.status = CbsStatus::kSolved;
      result.paths = nodes[idx].paths;
      result.flowtime = nodes[idx].cost;
      return result;
    }
    if (result.expanded >= options.node_cap) {
      result.status = CbsStatus::kNodeCap;
      result.diagnostic = "node cap of " + std::to_string(options.node_cap) + " expansions reached";
      return result;
    }
    for (int side = 0; side < 2; ++side) {
      detail::CtConstraint c{};
      if (conflict->kind == CollisionKind::kVertex) {
        c = {side == 0 ? conflict->first : conflict->second, false, conflict->cell, kNoCell, conflict->time};
      } else if (side == 0) {
        c = {conflict->first, true, conflict->cell, conflict->other, conflict->time};
      } else {
        c = {conflict->second, true, conflict->other, conflict->cell, conflict->time};
      }
      detail::CtNode child{idx, c, nodes[idx].paths, 0, 0};
      nodes.push_back(std::move(child));
      const int cidx = static_cast<int>(nodes.size()) - 1;
      const SearchConstraints sc = constraints_for(cidx, c.agent);
      auto p = plan_constrained(map, h, q.starts[c.agent], t0, q.goals[c.agent], q.obstacles, &sc);
      if (!p) {
        nodes.pop_back();
        continue;
      }
      nodes[cidx].paths[c.agent] = std::move(*p);
      nodes[cidx].cost = detail::flowtime(nodes[cidx].paths, t0);
      nodes[cidx].conflicts = static_cast<int>(find_collisions(map, nodes[cidx].paths, t0).size());
      open.push({nodes[cidx].cost, nodes[cidx].conflicts, cidx});
    }
  }
  result.status = CbsStatus::kUnsolvable;
  result.diagnostic = "constraint tree exhausted";
  return result;
}

}  // namespace mapd
