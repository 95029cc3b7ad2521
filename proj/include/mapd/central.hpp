#pragma once

#include <algorithm>
#include <span>
#include <string>
#include <vector>

#include "mapd/cbs.hpp"
#include "mapd/events.hpp"
#include "mapd/hungarian.hpp"
#include "mapd/space_time_astar.hpp"
#include "mapd/task.hpp"

namespace mapd {

enum class AgentStatus { kFree, kOccupied };

/// Per-agent bookkeeping of the centralized baseline. Assigned endpoints
/// are pairwise distinct; occupied agents are exactly the agents executing
/// a task, and their endpoint is that task's delivery.
struct CentralState {
  std::vector<AgentStatus> status;
  std::vector<Path> paths;
  std::vector<CellId> endpoint;
  std::vector<TaskId> task;

  CentralState() = default;
  explicit CentralState(const std::vector<CellId>& starts)
      : status(starts.size(), AgentStatus::kFree), endpoint(starts), task(starts.size(), kNoTask) {
    for (CellId s : starts) paths.push_back(rest_path(s, 0));
  }

  std::size_t agent_count() const { return paths.size(); }
  bool occupied(AgentId a) const { return status[a] == AgentStatus::kOccupied; }
};

struct CentralContext {
  const GridMap& map;
  const HeuristicTable& h;
  std::span<Task> tasks;
  TaskSet& taskset;  // released tasks that are not executing yet, in release order
  Timestep t = 0;
  CbsOptions cbs;
  EventLog* log = nullptr;
};

/// Agents resting on the pickup of a pending task whose delivery is not
/// assigned to any other agent start executing it (ascending agent id,
/// first eligible task in release order). Returns the promoted agents.
inline std::vector<AgentId> promote_agents(CentralState& state, CentralContext& ctx) {
  std::vector<AgentId> promoted;
  for (AgentId a = 0; a < static_cast<AgentId>(state.agent_count()); ++a) {
    if (state.occupied(a) || ctx.t < state.paths[a].end_time()) continue;
    const CellId loc = state.paths[a].at(ctx.t);
    for (TaskId id : ctx.taskset) {
      Task& task = ctx.tasks[id];
      if (task.pickup != loc) continue;
      bool claimed = false;
      for (AgentId b = 0; b < static_cast<AgentId>(state.agent_count()); ++b)
        if (b != a && state.endpoint[b] == task.delivery) claimed = true;
      if (claimed) continue;
      task.start(a, ctx.t);
      ctx.taskset.erase(id);
      state.status[a] = AgentStatus::kOccupied;
      state.task[a] = id;
      state.endpoint[a] = task.delivery;
      promoted.push_back(a);
      if (ctx.log) ctx.log->record(ctx.t, a, "promote", id);
      break;
    }
  }
  return promoted;
}

struct CandidateSet {
  std::vector<TaskId> tasks;           // the greedy task subset
  std::vector<CellId> endpoints;       // X: pickups of `tasks`, then parking spots
  std::vector<EndpointKind> kinds;
};

/// Greedy task subset and endpoint set X for the free agents.
/// `free_agents` ascending; `cost_to_endpoint[i][e]` is the base cost of
/// free agent i to map endpoint index e (map.endpoints() order).
inline CandidateSet build_candidate_set(const CentralState& state, const CentralContext& ctx,
                                        const std::vector<AgentId>& free_agents,
                                        const std::vector<std::vector<int>>& cost_to_endpoint) {
  CandidateSet out;
  std::vector<char> blocked(ctx.map.size(), 0);
  for (AgentId a = 0; a < static_cast<AgentId>(state.agent_count()); ++a)
    if (state.occupied(a)) blocked[state.endpoint[a]] = 1;
  for (TaskId id : ctx.taskset) {
    const Task& task = ctx.tasks[id];
    if (blocked[task.pickup] || blocked[task.delivery]) continue;
    out.tasks.push_back(id);
    out.endpoints.push_back(task.pickup);
    out.kinds.push_back(EndpointKind::kPickup);
    blocked[task.pickup] = 1;
    blocked[task.delivery] = 1;
  }
  if (free_agents.size() <= out.endpoints.size()) return out;

  const auto& endpoints = ctx.map.endpoints();
  for (std::size_t i = 0; i < free_agents.size(); ++i) {
    int best = -1;
    for (std::size_t e = 0; e < endpoints.size(); ++e) {
      if (blocked[endpoints[e]] || cost_to_endpoint[i][e] >= kInfinity) continue;
      if (best < 0 || cost_to_endpoint[i][e] < cost_to_endpoint[i][best]) best = static_cast<int>(e);
    }
    if (best < 0)
      throw SimulationError("CENTRAL: no parking endpoint available for agent " + std::to_string(free_agents[i]) +
                            " at t=" + std::to_string(ctx.t));
    blocked[endpoints[best]] = 1;
    out.endpoints.push_back(endpoints[best]);
    out.kinds.push_back(EndpointKind::kParking);
  }
  return out;
}

struct CentralStepStats {
  std::vector<AgentId> promoted;
  long cbs_expanded = 0;
};

/// One CENTRAL decision: promote, plan the newly occupied agents around
/// everyone's latest paths, assign every free agent a distinct endpoint
/// (Hungarian over modified costs), then plan the free agents around the
/// occupied agents' paths. Throws SimulationError if either CBS stage fails.
inline CentralStepStats central_step(CentralState& state, CentralContext& ctx) {
  CentralStepStats stats;
  const Timestep t = ctx.t;
  const auto n = static_cast<AgentId>(state.agent_count());
  std::vector<CellId> loc(n);
  for (AgentId a = 0; a < n; ++a) loc[a] = state.paths[a].at(t);

  stats.promoted = promote_agents(state, ctx);
  // A task whose pickup is its delivery is done on promotion.
  std::vector<AgentId> to_plan;
  for (AgentId a : stats.promoted) {
    Task& task = ctx.tasks[state.task[a]];
    if (task.delivery == loc[a]) {
      task.finish(t);
      state.status[a] = AgentStatus::kFree;
      state.task[a] = kNoTask;
    } else {
      to_plan.push_back(a);
    }
  }

  auto solve = [&](const std::vector<AgentId>& agents, const ReservationTable& obstacles, const char* stage) {
    if (agents.empty()) return;
    MapfQuery q;
    q.start_time = t;
    q.obstacles = &obstacles;
    for (AgentId a : agents) {
      q.starts.push_back(loc[a]);
      q.goals.push_back(state.endpoint[a]);
    }
    CbsResult r = cbs_solve(ctx.map, ctx.h, q, ctx.cbs);
    stats.cbs_expanded += r.expanded;
    if (!r.solved())
      throw SimulationError(std::string("CENTRAL: ") + stage + " planning failed at t=" + std::to_string(t) + ": " +
                            r.diagnostic);
    for (std::size_t i = 0; i < agents.size(); ++i) state.paths[agents[i]] = std::move(r.paths[i]);
  };

  // Stage one: newly occupied agents, everyone else's latest paths fixed.
  if (!to_plan.empty()) {
    ReservationTable rt(ctx.map, t);
    for (AgentId a = 0; a < n; ++a)
      if (std::find(to_plan.begin(), to_plan.end(), a) == to_plan.end()) rt.add_path(a, state.paths[a]);
    solve(to_plan, rt, "stage-one");
    if (ctx.log)
      for (AgentId a : to_plan)
        ctx.log->record(t, a, "replan", state.task[a], state.paths[a].end_time() - t);
  }

  std::vector<AgentId> free_agents;
  ReservationTable occupied_rt(ctx.map, t);
  for (AgentId a = 0; a < n; ++a) {
    if (state.occupied(a)) occupied_rt.add_path(a, state.paths[a]);
    else free_agents.push_back(a);
  }
  if (free_agents.empty()) return stats;

  // Base costs: earliest safe arrival avoiding the occupied agents' paths.
  const auto& endpoints = ctx.map.endpoints();
  std::vector<std::vector<int>> cost_to_endpoint;
  for (AgentId a : free_agents) cost_to_endpoint.push_back(safe_arrival_costs(ctx.map, loc[a], t, occupied_rt, endpoints));

  const CandidateSet cand = build_candidate_set(state, ctx, free_agents, cost_to_endpoint);
  std::vector<std::vector<int>> base(free_agents.size(), std::vector<int>(cand.endpoints.size()));
  for (std::size_t i = 0; i < free_agents.size(); ++i)
    for (std::size_t k = 0; k < cand.endpoints.size(); ++k) {
      const auto e = std::lower_bound(endpoints.begin(), endpoints.end(), cand.endpoints[k]) - endpoints.begin();
      base[i][k] = cost_to_endpoint[i][e];
    }
  const Assignment match = hungarian(modified_costs(base, cand.kinds));
  for (std::size_t i = 0; i < free_agents.size(); ++i) {
    const int k = match.col_of_row[i];
    const AgentId a = free_agents[i];
    if (base[i][k] >= kInfinity)
      throw SimulationError("CENTRAL: agent " + std::to_string(a) + " cannot reach any candidate endpoint at t=" +
                            std::to_string(t));
    if (ctx.log && state.endpoint[a] != cand.endpoints[k])
      ctx.log->record(t, a, cand.kinds[k] == EndpointKind::kPickup ? "assign_pickup" : "assign_parking",
                      cand.kinds[k] == EndpointKind::kPickup ? cand.tasks[k] : kNoTask, base[i][k]);
    state.endpoint[a] = cand.endpoints[k];
  }

  // Stage two: free agents around the occupied agents' paths.
  solve(free_agents, occupied_rt, "stage-two");
  return stats;
}

}  // namespace mapd
