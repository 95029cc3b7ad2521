#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mapd/events.hpp"
#include "mapd/grid_map.hpp"
#include "mapd/heuristics.hpp"
#include "mapd/path.hpp"
#include "mapd/space_time_astar.hpp"
#include "mapd/task.hpp"

namespace mapd {

struct TokenSnapshot;

/// Shared planning state: one path per agent, the task set and the
/// agent <-> task partial bijection. A path with no cells marks a path
/// temporarily removed during a task swap.
struct Token {
  std::vector<Path> paths;
  TaskSet taskset;
  std::vector<TaskId> task_of_agent;
  std::vector<AgentId> agent_of_task;

  Token() = default;
  Token(const std::vector<CellId>& starts, std::size_t task_count)
      : task_of_agent(starts.size(), kNoTask), agent_of_task(task_count, kNoAgent) {
    for (CellId s : starts) paths.push_back(rest_path(s, 0));
  }

  std::size_t agent_count() const { return paths.size(); }
  AgentId assignee(TaskId task) const { return agent_of_task.at(task); }

  void assign(AgentId agent, TaskId task) {
    if (task_of_agent.at(agent) != kNoTask) unassign(agent);
    if (agent_of_task.at(task) != kNoAgent) unassign(agent_of_task[task]);
    task_of_agent[agent] = task;
    agent_of_task[task] = agent;
  }

  void unassign(AgentId agent) {
    const TaskId task = task_of_agent.at(agent);
    if (task == kNoTask) return;
    agent_of_task[task] = kNoAgent;
    task_of_agent[agent] = kNoTask;
  }

  TokenSnapshot snapshot() const;
  void restore(const TokenSnapshot& snap);

  friend bool operator==(const Token&, const Token&) = default;
};

struct TokenSnapshot {
  Token state;
};

inline TokenSnapshot Token::snapshot() const { return {*this}; }
inline void Token::restore(const TokenSnapshot& snap) { *this = snap.state; }

/// Read-only inputs shared by every token turn of one timestep.
struct TokenContext {
  const GridMap& map;
  const HeuristicTable& h;
  std::span<const Task> tasks;
  std::span<const CellId> locations;  // loc(a_i) at the current timestep
  Timestep t = 0;
  int diameter = -1;
  EventLog* log = nullptr;
};

namespace detail {

inline ReservationTable reservations_without(const TokenContext& ctx, const Token& token, AgentId agent) {
  ReservationTable rt(ctx.map, ctx.t);
  for (AgentId b = 0; b < static_cast<AgentId>(token.agent_count()); ++b)
    if (b != agent && !token.paths[b].cells.empty()) rt.add_path(b, token.paths[b]);
  return rt;
}

// True iff some path other than those of `agent` and `ignored` ends in `cell`.
inline bool other_path_ends_in(const Token& token, CellId cell, AgentId agent, AgentId ignored = kNoAgent) {
  for (AgentId b = 0; b < static_cast<AgentId>(token.agent_count()); ++b) {
    if (b == agent || b == ignored || token.paths[b].cells.empty()) continue;
    if (token.paths[b].last() == cell) return true;
  }
  return false;
}

inline bool delivery_in_taskset(const TokenContext& ctx, const Token& token, CellId cell) {
  return std::any_of(token.taskset.begin(), token.taskset.end(),
                     [&](TaskId id) { return ctx.tasks[id].delivery == cell; });
}

// Endpoints that are not a delivery of a task in the task set and in which
// no other path ends.
inline std::vector<CellId> parking_candidates(const TokenContext& ctx, const Token& token, AgentId agent) {
  std::vector<CellId> out;
  for (CellId e : ctx.map.endpoints())
    if (!delivery_in_taskset(ctx, token, e) && !other_path_ends_in(token, e, agent)) out.push_back(e);
  return out;
}

inline int path_cost(const Path& p, Timestep t) { return p.end_time() - t; }

// Candidate tasks sorted by (h(loc, pickup), id).
inline std::vector<TaskId> order_by_pickup_distance(const TokenContext& ctx, std::vector<TaskId> ids, CellId loc) {
  std::stable_sort(ids.begin(), ids.end(), [&](TaskId a, TaskId b) {
    const int ha = ctx.h.distance(loc, ctx.tasks[a].pickup);
    const int hb = ctx.h.distance(loc, ctx.tasks[b].pickup);
    return ha != hb ? ha < hb : a < b;
  });
  return ids;
}

inline void log(const TokenContext& ctx, AgentId agent, const char* action, TaskId task, int cost) {
  if (ctx.log) ctx.log->record(ctx.t, agent, action, task, cost);
}

// No task assigned: rest in place when loc is an endpoint, resting there is
// safe and loc is not a pending delivery; otherwise move to a parking
// endpoint. Returns false if no path was found.
inline bool rest_or_park(const TokenContext& ctx, Token& token, AgentId agent) {
  const CellId loc = ctx.locations[agent];
  const ReservationTable rt = reservations_without(ctx, token, agent);
  if (ctx.map.is_endpoint(loc) && !delivery_in_taskset(ctx, token, loc) && rt.free_from(loc, ctx.t)) {
    token.paths[agent] = rest_path(loc, ctx.t);
    log(ctx, agent, "rest", kNoTask, 0);
    return true;
  }
  auto p = plan_path2(ctx.map, ctx.h, loc, ctx.t, parking_candidates(ctx, token, agent), rt, ctx.diameter);
  if (!p) return false;
  token.paths[agent] = std::move(*p);
  log(ctx, agent, "park", kNoTask, path_cost(token.paths[agent], ctx.t));
  return true;
}

}  // namespace detail

/// One TP token turn for `agent` (which is at the end of its path).
/// Tasks leave the task set on assignment. Throws PlanningError if a path
/// cannot be found, which cannot happen on well-formed instances.
inline void tp_token_turn(AgentId agent, Token& token, const TokenContext& ctx) {
  const CellId loc = ctx.locations[agent];
  std::vector<TaskId> eligible;
  for (TaskId id : token.taskset) {
    const Task& task = ctx.tasks[id];
    if (!detail::other_path_ends_in(token, task.pickup, agent) &&
        !detail::other_path_ends_in(token, task.delivery, agent))
      eligible.push_back(id);
  }
  if (!eligible.empty()) {
    const TaskId chosen = detail::order_by_pickup_distance(ctx, std::move(eligible), loc).front();
    const Task& task = ctx.tasks[chosen];
    token.assign(agent, chosen);
    token.taskset.erase(chosen);
    const ReservationTable rt = detail::reservations_without(ctx, token, agent);
    auto p = plan_path1(ctx.map, ctx.h, loc, ctx.t, task.pickup, task.delivery, rt, ctx.diameter);
    if (!p)
      throw PlanningError("TP: no path for agent " + std::to_string(agent) + " to task " + std::to_string(chosen) +
                          " at t=" + std::to_string(ctx.t));
    token.paths[agent] = std::move(*p);
    detail::log(ctx, agent, "assign", chosen, detail::path_cost(token.paths[agent], ctx.t));
    return;
  }
  if (!detail::rest_or_park(ctx, token, agent))
    throw PlanningError("TP: no parking path for agent " + std::to_string(agent) + " at t=" + std::to_string(ctx.t));
}

/// Bookkeeping for one top-level GetTask call: which agents received the
/// token and how deep the swap recursion may go.
struct GetTaskBudget {
  int max_depth = 0;
  std::vector<AgentId> served;
};

/// TPTS GetTask. Tasks stay in the task set until execution starts, so an
/// agent may take over a task from another agent that has not picked it up
/// yet, provided it reaches the pickup strictly earlier; the displaced
/// agent then gets the token. Any failed swap is rolled back from a
/// snapshot. Returns whether `agent` ended with a path to an endpoint.
inline bool tpts_get_task(AgentId agent, Token& token, const TokenContext& ctx, GetTaskBudget& budget,
                          int depth = 0) {
  if (depth > budget.max_depth)
    throw SimulationError("TPTS: task-swap recursion exceeded " + std::to_string(budget.max_depth) + " at t=" +
                          std::to_string(ctx.t));
  budget.served.push_back(agent);
  const bool top_level = depth == 0;
  const CellId loc = ctx.locations[agent];

  std::vector<TaskId> eligible;
  for (TaskId id : token.taskset) {
    const Task& task = ctx.tasks[id];
    const AgentId holder = token.assignee(id);
    // The current assignee's path ends in the delivery; it is dropped on a swap.
    if (!detail::other_path_ends_in(token, task.pickup, agent, holder) &&
        !detail::other_path_ends_in(token, task.delivery, agent, holder))
      eligible.push_back(id);
  }
  for (TaskId id : detail::order_by_pickup_distance(ctx, std::move(eligible), loc)) {
    const Task& task = ctx.tasks[id];
    const AgentId holder = token.assignee(id);
    if (holder == agent) continue;
    if (holder == kNoAgent) {
      token.assign(agent, id);
      const ReservationTable rt = detail::reservations_without(ctx, token, agent);
      auto p = plan_path1(ctx.map, ctx.h, loc, ctx.t, task.pickup, task.delivery, rt, ctx.diameter);
      if (p) {
        token.paths[agent] = std::move(*p);
        detail::log(ctx, agent, "assign", id, detail::path_cost(token.paths[agent], ctx.t));
        return true;
      }
      if (top_level)
        throw PlanningError("TPTS: no path for agent " + std::to_string(agent) + " to task " + std::to_string(id) +
                            " at t=" + std::to_string(ctx.t));
      token.unassign(agent);
      continue;
    }

    const TokenSnapshot snap = token.snapshot();
    const std::optional<Timestep> holder_arrival = token.paths[holder].first_visit(task.pickup, ctx.t);
    token.assign(agent, id);
    token.paths[holder].cells.clear();
    const ReservationTable rt = detail::reservations_without(ctx, token, agent);
    auto p = plan_path1(ctx.map, ctx.h, loc, ctx.t, task.pickup, task.delivery, rt, ctx.diameter);
    if (p) {
      const std::optional<Timestep> arrival = p->first_visit(task.pickup, ctx.t);
      if (arrival && (!holder_arrival || *arrival < *holder_arrival)) {
        token.paths[agent] = std::move(*p);
        detail::log(ctx, agent, "steal", id, detail::path_cost(token.paths[agent], ctx.t));
        if (tpts_get_task(holder, token, ctx, budget, depth + 1)) return true;
      }
    }
    token.restore(snap);
    detail::log(ctx, agent, "restore", id, -1);
  }

  if (!ctx.map.is_endpoint(loc)) {
    const ReservationTable rt = detail::reservations_without(ctx, token, agent);
    auto p = plan_path2(ctx.map, ctx.h, loc, ctx.t, detail::parking_candidates(ctx, token, agent), rt, ctx.diameter);
    if (!p) return false;
    token.paths[agent] = std::move(*p);
    detail::log(ctx, agent, "park", kNoTask, detail::path_cost(token.paths[agent], ctx.t));
    return true;
  }
  if (detail::rest_or_park(ctx, token, agent)) return true;
  if (top_level)
    throw PlanningError("TPTS: no parking path for agent " + std::to_string(agent) + " at t=" + std::to_string(ctx.t));
  return false;
}

/// Agents that request the token at `ctx.t`, ascending by id: those at the
/// end of their token path (or, with `free_request`, every free agent),
/// excluding agents already served this timestep. `executing[a]` tells
/// whether agent a is executing a task.
inline std::vector<AgentId> request_order(const Token& token, Timestep t, const std::vector<AgentId>& served,
                                          bool free_request = false, const std::vector<char>* executing = nullptr) {
  std::vector<AgentId> out;
  for (AgentId a = 0; a < static_cast<AgentId>(token.agent_count()); ++a) {
    if (std::find(served.begin(), served.end(), a) != served.end()) continue;
    const bool at_end = t >= token.paths[a].end_time();
    const bool is_free = executing && !(*executing)[a];
    if (at_end || (free_request && is_free)) out.push_back(a);
  }
  return out;
}

}  // namespace mapd
