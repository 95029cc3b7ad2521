#pragma once

#include <algorithm>
#include <chrono>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "mapd/central.hpp"
#include "mapd/events.hpp"
#include "mapd/heuristics.hpp"
#include "mapd/token.hpp"
#include "mapd/well_formed.hpp"

namespace mapd {

enum class Algorithm { kTP, kTPTS, kCentral };

inline const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kTP: return "tp";
    case Algorithm::kTPTS: return "tpts";
    case Algorithm::kCentral: return "central";
  }
  return "?";
}

inline Algorithm parse_algorithm(std::string_view s) {
  if (s == "tp") return Algorithm::kTP;
  if (s == "tpts") return Algorithm::kTPTS;
  if (s == "central") return Algorithm::kCentral;
  throw ConfigError("unknown algorithm '" + std::string(s) + "' (expected tp, tpts or central)");
}

struct SimulationConfig {
  Algorithm algorithm = Algorithm::kTP;
  int window = 100;
  std::optional<Timestep> cap;  // default: 20 * (diameter * tasks + last release)
  bool free_request = false;    // every free agent requests the token each timestep
  bool audit = true;            // check planned paths for collisions after every decision
  long cbs_node_cap = 50'000;
  EventLog* log = nullptr;
};

struct TaskRecord {
  TaskId id = kNoTask;
  Timestep release = 0;
  Timestep pickup_time = 0;
  Timestep finish_time = 0;
  Timestep service_time = 0;
};

struct WindowCount {
  Timestep t = 0;
  int added = 0;
  int executed = 0;
  friend bool operator==(const WindowCount&, const WindowCount&) = default;
};

struct Metrics {
  std::vector<TaskRecord> tasks;
  Timestep makespan = 0;
  std::vector<double> runtime_ms;  // decision phase only, one entry per timestep
  std::vector<WindowCount> windows;

  double avg_service_time() const {
    if (tasks.empty()) return 0.0;
    double sum = 0;
    for (const auto& r : tasks) sum += r.service_time;
    return sum / static_cast<double>(tasks.size());
  }
  double avg_runtime_ms() const {
    if (runtime_ms.empty()) return 0.0;
    return std::accumulate(runtime_ms.begin(), runtime_ms.end(), 0.0) / static_cast<double>(runtime_ms.size());
  }
};

/// locations[a][t] for t = 0..makespan.
struct Trajectory {
  std::vector<std::vector<CellId>> locations;

  Timestep length() const { return locations.empty() ? 0 : static_cast<Timestep>(locations.front().size()); }
  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

struct RunResult {
  Metrics metrics;
  Trajectory trajectory;
  std::vector<Task> tasks;  // final task states
};

/// For every t in [0, makespan]: tasks released and finished during
/// [t - window + 1, t].
inline std::vector<WindowCount> window_counts(const Metrics& metrics, int window) {
  if (window <= 0) throw ConfigError("window length must be positive");
  const Timestep horizon = metrics.makespan;
  std::vector<int> added(horizon + 2, 0), executed(horizon + 2, 0);
  for (const auto& r : metrics.tasks) {
    if (r.release <= horizon) ++added[r.release + 1];
    if (r.finish_time <= horizon) ++executed[r.finish_time + 1];
  }
  std::partial_sum(added.begin(), added.end(), added.begin());
  std::partial_sum(executed.begin(), executed.end(), executed.begin());
  std::vector<WindowCount> out;
  for (Timestep t = 0; t <= horizon; ++t) {
    const Timestep lo = std::max(0, t - window + 1);
    out.push_back({t, added[t + 1] - added[lo], executed[t + 1] - executed[lo]});
  }
  return out;
}

/// Every vertex collision, edge (swap) collision and non-adjacent move in
/// a trajectory, ordered by time.
inline std::vector<Collision> audit_collisions(const GridMap& map, const Trajectory& traj) {
  std::vector<Collision> out;
  const Timestep len = traj.length();
  for (AgentId a = 0; a < static_cast<AgentId>(traj.locations.size()); ++a)
    for (Timestep t = 0; t + 1 < len; ++t) {
      const CellId u = traj.locations[a][t];
      const CellId v = traj.locations[a][t + 1];
      if (!map.passable(u) || !map.passable(v) || !map.adjacent_or_same(u, v))
        out.push_back({CollisionKind::kJump, a, a, u, v, t});
    }
  std::vector<Path> as_paths;
  for (const auto& locs : traj.locations) as_paths.push_back({0, locs});
  // Only timesteps inside the trajectory count.
  for (const Collision& c : find_collisions(map, as_paths, 0))
    if (c.time < len) out.push_back(c);
  std::sort(out.begin(), out.end());
  return out;
}

inline Timestep default_safety_cap(int diameter, const std::vector<Task>& tasks) {
  const Timestep last_release = tasks.empty() ? 0 : tasks.back().release;
  return 20 * (diameter * static_cast<Timestep>(tasks.size()) + last_release);
}

namespace detail {

class RunClock {
 public:
  void start() { begin_ = std::chrono::steady_clock::now(); }
  double stop_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - begin_).count();
  }

 private:
  std::chrono::steady_clock::time_point begin_;
};

inline void check_paths(const GridMap& map, const std::vector<Path>& paths, Timestep t, const char* who) {
  const auto found = find_collisions(map, paths, t, 1);
  if (!found.empty())
    throw SimulationError(std::string(who) + ": planned paths collide at t=" + std::to_string(t) + ": " +
                          describe(map, found.front()));
}

inline Metrics finish_metrics(const std::vector<Task>& tasks, Timestep makespan, std::vector<double> runtime,
                              int window) {
  Metrics m;
  for (const Task& task : tasks) {
    if (task.state != TaskState::kFinished) continue;
    m.tasks.push_back({task.id, task.release, *task.pickup_time, *task.finish_time, *task.service_time()});
  }
  m.makespan = makespan;
  m.runtime_ms = std::move(runtime);
  m.windows = window_counts(m, window);
  return m;
}

}  // namespace detail

/// Runs one lifelong MAPD simulation until every task is finished.
/// Each timestep: release due tasks, record arrivals, make decisions (token
/// turns or a CENTRAL step), then move every agent one step.
/// Throws SimulationError when the safety cap is exceeded or an internal
/// invariant breaks, PlanningError when a required path does not exist.
inline RunResult run(const MapdInstance& instance, const SimulationConfig& cfg) {
  const GridMap& map = instance.map;
  validate_instance(instance, false);
  if (cfg.window <= 0) throw ConfigError("window length must be positive");
  for (std::size_t i = 0; i < instance.tasks.size(); ++i)
    if (instance.tasks[i].id != static_cast<TaskId>(i)) throw ConfigError("task ids must equal their position");
  for (std::size_t i = 1; i < instance.tasks.size(); ++i)
    if (instance.tasks[i].release < instance.tasks[i - 1].release)
      throw ConfigError("tasks must be sorted by release");

  const HeuristicTable h(map);
  const int diameter = map_diameter(map);
  const Timestep cap = cfg.cap.value_or(default_safety_cap(diameter, instance.tasks));

  RunResult result;
  std::vector<Task> tasks = instance.tasks;
  for (Task& task : tasks) {
    Task fresh;
    fresh.id = task.id;
    fresh.pickup = task.pickup;
    fresh.delivery = task.delivery;
    fresh.release = task.release;
    task = fresh;
  }
  const auto agents = static_cast<AgentId>(instance.agent_starts.size());
  const auto total = static_cast<int>(tasks.size());
  int finished = 0;
  std::vector<CellId> locations = instance.agent_starts;
  Trajectory& traj = result.trajectory;
  traj.locations.assign(agents, {});
  auto record_positions = [&] {
    for (AgentId a = 0; a < agents; ++a) traj.locations[a].push_back(locations[a]);
  };
  std::vector<double> runtime;
  detail::RunClock clock;
  Timestep t = 0;
  record_positions();

  auto advance = [&](const std::vector<Path>& paths) {
    ++t;
    if (t > cap)
      throw SimulationError("safety cap of " + std::to_string(cap) + " timesteps exceeded with " +
                            std::to_string(total - finished) + " unfinished tasks");
    for (AgentId a = 0; a < agents; ++a) locations[a] = paths[a].at(t);
    record_positions();
  };

  if (cfg.algorithm == Algorithm::kCentral) {
    CentralState state(instance.agent_starts);
    TaskSet pending;
    auto progress = [&] {
      for (AgentId a = 0; a < agents; ++a) {
        if (!state.occupied(a) || locations[a] != tasks[state.task[a]].delivery) continue;
        tasks[state.task[a]].finish(t);
        ++finished;
        state.status[a] = AgentStatus::kFree;
        state.task[a] = kNoTask;
      }
    };
    for (;;) {
      release_due(tasks, t, pending);
      progress();
      if (finished == total) break;
      clock.start();
      CentralContext ctx{map, h, tasks, pending, t, CbsOptions{cfg.cbs_node_cap}, cfg.log};
      const auto stats = central_step(state, ctx);
      runtime.push_back(clock.stop_ms());
      // A promoted task whose pickup is its delivery finishes inside the step.
      for (AgentId a : stats.promoted)
        if (!state.occupied(a)) ++finished;
      if (cfg.audit) detail::check_paths(map, state.paths, t, "CENTRAL");
      if (finished == total) break;
      advance(state.paths);
    }
  } else {
    Token token(instance.agent_starts, tasks.size());
    const bool tpts = cfg.algorithm == Algorithm::kTPTS;
    auto progress = [&] {
      for (AgentId a = 0; a < agents; ++a) {
        const TaskId id = token.task_of_agent[a];
        if (id == kNoTask) continue;
        Task& task = tasks[id];
        if (task.state == TaskState::kPending && locations[a] == task.pickup) {
          task.start(a, t);
          if (tpts) token.taskset.erase(id);
        }
        if (task.state == TaskState::kExecuting && locations[a] == task.delivery) {
          task.finish(t);
          ++finished;
          token.unassign(a);
        }
      }
    };
    for (;;) {
      release_due(tasks, t, token.taskset);
      progress();
      if (finished == total) break;

      clock.start();
      TokenContext ctx{map, h, tasks, locations, t, diameter, cfg.log};
      std::vector<AgentId> served;
      std::vector<char> busy(agents, 0);
      for (;;) {
        for (AgentId a = 0; a < agents; ++a) {
          const TaskId id = token.task_of_agent[a];
          busy[a] = id != kNoTask && (!tpts || tasks[id].state == TaskState::kExecuting);
        }
        const auto order = request_order(token, t, served, cfg.free_request, &busy);
        if (order.empty()) break;
        const AgentId a = order.front();
        const bool mid_path = t < token.paths[a].end_time();
        // With free requests, an agent that is not at its path end keeps its
        // old path whenever replanning fails.
        const TokenSnapshot before = token.snapshot();
        try {
          if (tpts) {
            GetTaskBudget budget;
            budget.max_depth = std::max<int>(1, static_cast<int>(token.taskset.size()) * agents);
            if (mid_path) token.unassign(a);
            const bool ok = tpts_get_task(a, token, ctx, budget);
            served.insert(served.end(), budget.served.begin(), budget.served.end());
            if (!ok) {
              if (!mid_path) throw PlanningError("TPTS: GetTask failed at t=" + std::to_string(t));
              token.restore(before);
            }
          } else {
            tp_token_turn(a, token, ctx);
          }
        } catch (const PlanningError&) {
          if (!mid_path) throw;
          token.restore(before);
        }
        served.push_back(a);
      }
      runtime.push_back(clock.stop_ms());
      if (cfg.audit) detail::check_paths(map, token.paths, t, tpts ? "TPTS" : "TP");
      progress();
      if (finished == total) break;
      advance(token.paths);
    }
  }

  result.metrics = detail::finish_metrics(tasks, t, std::move(runtime), cfg.window);
  result.tasks = std::move(tasks);
  return result;
}

}  // namespace mapd
