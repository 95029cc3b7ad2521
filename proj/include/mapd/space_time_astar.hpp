#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <queue>
#include <span>
#include <unordered_map>
#include <vector>

#include "mapd/grid_map.hpp"
#include "mapd/heuristics.hpp"
#include "mapd/path.hpp"

namespace mapd {

/// One single-agent query in the space of (cell, timestep, stage) states.
/// Stage 0 means the waypoint (pickup) has not been visited yet; without a
/// waypoint the search starts in stage 1. A goal is accepted only if the
/// agent can rest there forever: no reservation and no vertex constraint
/// touches it at or after the arrival timestep.
struct PlanRequest {
  CellId start = kNoCell;
  Timestep start_time = 0;
  CellId waypoint = kNoCell;
  std::vector<CellId> goals;
  const ReservationTable* obstacles = nullptr;
  const SearchConstraints* constraints = nullptr;
  // Upper bound on the map diameter; defaults to the vertex count.
  int diameter = -1;
};

struct PlanStats {
  long expanded = 0;
  long generated = 0;
};

namespace detail {

struct OpenEntry {
  int f;
  int g;
  CellId cell;
  int stage;
  std::uint32_t seq;
  std::uint32_t node;
};

// Lower f, then higher g, then smaller cell, then stage 1 before stage 0.
struct OpenOrder {
  bool operator()(const OpenEntry& a, const OpenEntry& b) const {
    if (a.f != b.f) return a.f > b.f;
    if (a.g != b.g) return a.g < b.g;
    if (a.cell != b.cell) return a.cell > b.cell;
    if (a.stage != b.stage) return a.stage < b.stage;
    return a.seq > b.seq;
  }
};

struct SearchNode {
  CellId cell;
  Timestep t;
  std::uint32_t parent;
};

}  // namespace detail

/// Cost-minimal space-time A*. Returns nullopt when no admissible path
/// exists within the horizon start_time + |V| + reserved length + diameter
/// (+ latest constraint).
inline std::optional<Path> plan(const GridMap& map, const HeuristicTable& h, const PlanRequest& req,
                                PlanStats* stats = nullptr) {
  if (!map.passable(req.start)) throw ConfigError("plan: start cell is not passable");
  const ReservationTable* rt = req.obstacles;
  const SearchConstraints* cons = req.constraints;

  // Drop goals that can never be rested on.
  std::vector<CellId> goals;
  for (CellId g : req.goals) {
    if (!map.passable(g)) continue;
    if (rt && rt->occupant(g, kForever - 1) != kNoAgent) continue;
    goals.push_back(g);
  }
  if (goals.empty()) return std::nullopt;
  std::sort(goals.begin(), goals.end());
  goals.erase(std::unique(goals.begin(), goals.end()), goals.end());

  // Final-stage heuristic: distance to the nearest goal.
  std::vector<int> h_goal_storage;
  std::span<const int> h_goal;
  if (goals.size() == 1) {
    h_goal = h.to(goals.front());
  } else {
    h_goal_storage.assign(map.size(), kInfinity);
    for (CellId g : goals) {
      const auto row = h.to(g);
      for (CellId c = 0; c < map.size(); ++c) h_goal_storage[c] = std::min(h_goal_storage[c], row[c]);
    }
    h_goal = h_goal_storage;
  }
  const bool has_waypoint = req.waypoint != kNoCell;
  std::span<const int> h_way;
  int way_to_goal = 0;
  if (has_waypoint) {
    h_way = h.to(req.waypoint);
    way_to_goal = h_goal[req.waypoint];
    if (way_to_goal >= kInfinity) return std::nullopt;
  }
  auto heuristic = [&](CellId c, int stage) -> int {
    if (stage == 1) return h_goal[c];
    const int d = h_way[c];
    return d >= kInfinity ? kInfinity : d + way_to_goal;
  };

  std::vector<char> goal_mask(map.size(), 0);
  std::vector<Timestep> goal_block(map.size(), req.start_time - 1);
  for (CellId g : goals) {
    goal_mask[g] = 1;
    if (cons) goal_block[g] = cons->latest_on(g, req.start_time - 1);
  }

  const Timestep t0 = req.start_time;
  Timestep settle = t0;
  if (rt) settle = std::max(settle, rt->latest());
  if (cons) settle = std::max(settle, cons->latest(t0));
  settle += 1;
  const int diameter = req.diameter >= 0 ? req.diameter : map.vertex_count();
  Timestep horizon = t0 + map.vertex_count() + diameter + (rt ? static_cast<Timestep>(rt->total_length()) : 0);
  if (cons) horizon = std::max(horizon, cons->latest(t0) + map.vertex_count() + diameter);

  auto key = [&](CellId c, Timestep t, int stage) -> std::uint64_t {
    const auto slot = static_cast<std::uint64_t>(std::min(t, settle) - t0);
    return (slot * static_cast<std::uint64_t>(map.size()) + static_cast<std::uint64_t>(c)) * 2u +
           static_cast<std::uint64_t>(stage);
  };

  std::vector<detail::SearchNode> nodes;
  std::priority_queue<detail::OpenEntry, std::vector<detail::OpenEntry>, detail::OpenOrder> open;
  std::unordered_map<std::uint64_t, int> best_g;
  std::unordered_map<std::uint64_t, char> closed;
  best_g.reserve(1024);
  closed.reserve(1024);
  std::uint32_t seq = 0;

  const int start_stage = (!has_waypoint || req.start == req.waypoint) ? 1 : 0;
  const int h0 = heuristic(req.start, start_stage);
  if (h0 >= kInfinity) return std::nullopt;
  nodes.push_back({req.start, t0, UINT32_MAX});
  open.push({h0, 0, req.start, start_stage, seq++, 0});
  best_g[key(req.start, t0, start_stage)] = 0;

  PlanStats local;
  while (!open.empty()) {
    const detail::OpenEntry cur = open.top();
    open.pop();
    const Timestep t = t0 + cur.g;
    const std::uint64_t k = key(cur.cell, t, cur.stage);
    if (closed.count(k)) continue;
    closed.emplace(k, 1);
    ++local.expanded;

    if (cur.stage == 1 && goal_mask[cur.cell] && goal_block[cur.cell] < t &&
        (!rt || rt->free_from(cur.cell, t))) {
      Path path{t0, std::vector<CellId>(static_cast<std::size_t>(cur.g) + 1)};
      for (std::uint32_t n = cur.node; n != UINT32_MAX; n = nodes[n].parent)
        path.cells[nodes[n].t - t0] = nodes[n].cell;
      if (stats) *stats = local;
      return path;
    }
    if (t + 1 > horizon) continue;

    auto expand = [&](CellId next) {
      if (rt && (!rt->vertex_free(next, t + 1) || !rt->edge_free(cur.cell, next, t))) return;
      if (cons && (!cons->vertex_allowed(next, t + 1) || !cons->edge_allowed(cur.cell, next, t))) return;
      const int stage = (cur.stage == 1 || next == req.waypoint) ? 1 : 0;
      const int hn = heuristic(next, stage);
      if (hn >= kInfinity) return;
      const int g = cur.g + 1;
      const std::uint64_t nk = key(next, t + 1, stage);
      if (closed.count(nk)) return;
      auto [it, inserted] = best_g.try_emplace(nk, g);
      if (!inserted) {
        if (it->second <= g) return;
        it->second = g;
      }
      nodes.push_back({next, t + 1, cur.node});
      open.push({g + hn, g, next, stage, seq++, static_cast<std::uint32_t>(nodes.size() - 1)});
      ++local.generated;
    };
    expand(cur.cell);
    for (CellId n : map.adjacent(cur.cell)) expand(n);
  }
  if (stats) *stats = local;
  return std::nullopt;
}

/// Path via `pickup` to `delivery`, jointly cost-minimal, avoiding `rt`.
inline std::optional<Path> plan_path1(const GridMap& map, const HeuristicTable& h, CellId start, Timestep start_t,
                                      CellId pickup, CellId delivery, const ReservationTable& rt,
                                      int diameter = -1) {
  PlanRequest req;
  req.start = start;
  req.start_time = start_t;
  req.waypoint = pickup;
  req.goals = {delivery};
  req.obstacles = &rt;
  req.diameter = diameter;
  return plan(map, h, req);
}

/// Path to the cheapest reachable candidate endpoint, avoiding `rt`.
inline std::optional<Path> plan_path2(const GridMap& map, const HeuristicTable& h, CellId start, Timestep start_t,
                                      const std::vector<CellId>& candidates, const ReservationTable& rt,
                                      int diameter = -1) {
  PlanRequest req;
  req.start = start;
  req.start_time = start_t;
  req.goals = candidates;
  req.obstacles = &rt;
  req.diameter = diameter;
  return plan(map, h, req);
}

/// Single-goal search under CBS constraints and optional external obstacles.
inline std::optional<Path> plan_constrained(const GridMap& map, const HeuristicTable& h, CellId start,
                                            Timestep start_t, CellId goal, const ReservationTable* obstacles,
                                            const SearchConstraints* constraints, PlanStats* stats = nullptr) {
  PlanRequest req;
  req.start = start;
  req.start_time = start_t;
  req.goals = {goal};
  req.obstacles = obstacles;
  req.constraints = constraints;
  return plan(map, h, req, stats);
}

/// Earliest-arrival costs from (start, start_t) to every target such that
/// the agent can rest at the target from arrival on, avoiding `rt`.
/// Equivalent to one constrained search per target, done as a single
/// time-layered breadth-first sweep. kInfinity marks unreachable targets.
inline std::vector<int> safe_arrival_costs(const GridMap& map, CellId start, Timestep start_t,
                                           const ReservationTable& rt, const std::vector<CellId>& targets) {
  std::vector<int> cost(targets.size(), kInfinity);
  std::vector<char> reach(map.size(), 0);
  std::vector<char> next(map.size(), 0);
  std::vector<CellId> frontier{start};
  reach[start] = 1;
  std::size_t remaining = targets.size();
  const Timestep settle = std::max(start_t, rt.latest()) + 1;
  for (Timestep t = start_t;; ++t) {
    for (std::size_t i = 0; i < targets.size(); ++i) {
      if (cost[i] != kInfinity || !reach[targets[i]]) continue;
      if (rt.free_from(targets[i], t)) {
        cost[i] = t - start_t;
        --remaining;
      }
    }
    if (remaining == 0) break;
    std::vector<CellId> grown;
    for (CellId c : frontier) {
      auto visit = [&](CellId n) {
        if (next[n] || !rt.vertex_free(n, t + 1) || !rt.edge_free(c, n, t)) return;
        next[n] = 1;
        grown.push_back(n);
      };
      visit(c);
      for (CellId n : map.adjacent(c)) visit(n);
    }
    // Past `settle` the reachable set only grows; stop once it is stable.
    const bool stable = t >= settle && grown.size() == frontier.size();
    for (CellId c : frontier) reach[c] = 0;
    for (CellId c : grown) reach[c] = 1, next[c] = 0;
    frontier.swap(grown);
    if (stable || frontier.empty()) {
      if (stable) {
        for (std::size_t i = 0; i < targets.size(); ++i)
          if (cost[i] == kInfinity && reach[targets[i]] && rt.free_from(targets[i], t + 1)) cost[i] = t + 1 - start_t;
      }
      break;
    }
  }
  return cost;
}

}  // namespace mapd
