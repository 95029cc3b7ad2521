#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mapd/types.hpp"

namespace mapd {

/// Token / CENTRAL decision record. Actions: assign, steal, restore, rest,
/// park (token protocols); promote, assign_pickup, assign_parking, replan
/// (CENTRAL).
struct Event {
  Timestep t = 0;
  AgentId agent = kNoAgent;
  std::string action;
  TaskId task = kNoTask;
  int path_cost = -1;

  friend bool operator==(const Event&, const Event&) = default;
};

class EventLog {
 public:
  void record(Timestep t, AgentId agent, std::string action, TaskId task = kNoTask, int path_cost = -1) {
    events_.push_back({t, agent, std::move(action), task, path_cost});
  }
  const std::vector<Event>& events() const { return events_; }
  void clear() { events_.clear(); }

  /// One JSON object per line: {t, agent, action, task, path_cost}; absent
  /// task or cost is null.
  std::string to_json_lines() const {
    std::string out;
    for (const Event& e : events_) {
      nlohmann::ordered_json j;
      j["t"] = e.t;
      j["agent"] = e.agent;
      j["action"] = e.action;
      j["task"] = e.task == kNoTask ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(e.task);
      j["path_cost"] = e.path_cost < 0 ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(e.path_cost);
      out += j.dump();
      out.push_back('\n');
    }
    return out;
  }

 private:
  std::vector<Event> events_;
};

}  // namespace mapd
