#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mapd/grid_map.hpp"

namespace mapd {

enum class TaskState { kUnreleased, kPending, kExecuting, kFinished };

inline const char* to_string(TaskState s) {
  switch (s) {
    case TaskState::kUnreleased: return "unreleased";
    case TaskState::kPending: return "pending";
    case TaskState::kExecuting: return "executing";
    case TaskState::kFinished: return "finished";
  }
  return "?";
}

/// A pickup-and-delivery task. Lifecycle is strictly
/// unreleased -> pending -> executing -> finished; the assignee is frozen
/// once execution starts.
struct Task {
  TaskId id = kNoTask;
  CellId pickup = kNoCell;
  CellId delivery = kNoCell;
  Timestep release = 0;
  TaskState state = TaskState::kUnreleased;
  AgentId assignee = kNoAgent;
  std::optional<Timestep> pickup_time;
  std::optional<Timestep> finish_time;

  void make_pending() {
    require(TaskState::kUnreleased, "release");
    state = TaskState::kPending;
  }

  void start(AgentId agent, Timestep t) {
    require(TaskState::kPending, "start");
    state = TaskState::kExecuting;
    assignee = agent;
    pickup_time = t;
  }

  void finish(Timestep t) {
    require(TaskState::kExecuting, "finish");
    state = TaskState::kFinished;
    finish_time = t;
  }

  std::optional<Timestep> service_time() const {
    if (!finish_time) return std::nullopt;
    return *finish_time - release;
  }

 private:
  void require(TaskState expected, const char* what) const {
    if (state != expected)
      throw SimulationError("task " + std::to_string(id) + ": cannot " + what + " from state " +
                            to_string(state));
  }
};

/// Ordered set of task ids (insertion order = stream order).
class TaskSet {
 public:
  void insert(TaskId id) {
    if (!contains(id)) ids_.push_back(id);
  }
  bool erase(TaskId id) {
    auto it = std::find(ids_.begin(), ids_.end(), id);
    if (it == ids_.end()) return false;
    ids_.erase(it);
    return true;
  }
  bool contains(TaskId id) const { return std::find(ids_.begin(), ids_.end(), id) != ids_.end(); }
  bool empty() const { return ids_.empty(); }
  std::size_t size() const { return ids_.size(); }
  auto begin() const { return ids_.begin(); }
  auto end() const { return ids_.end(); }
  const std::vector<TaskId>& ids() const { return ids_; }

  friend bool operator==(const TaskSet&, const TaskSet&) = default;

 private:
  std::vector<TaskId> ids_;
};

/// Task release rate as an exact positive rational (tasks per timestep).
struct Frequency {
  std::int64_t num = 1;
  std::int64_t den = 1;

  /// Accepts integers ("10"), decimals ("0.2") and fractions ("1/3").
  static Frequency parse(std::string_view text) {
    auto fail = [&] { return ConfigError("invalid task frequency '" + std::string(text) + "'"); };
    if (text.empty()) throw fail();
    Frequency f;
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
      int a = 0, b = 0;
      if (!detail::parse_int(text.substr(0, slash), a) || !detail::parse_int(text.substr(slash + 1), b))
        throw fail();
      f = {a, b};
    } else {
      const auto dot = text.find('.');
      const std::string_view whole = text.substr(0, dot);
      const std::string_view frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
      if ((whole.empty() && frac.empty()) || frac.size() > 9) throw fail();
      std::int64_t num = 0;
      std::int64_t den = 1;
      for (char ch : whole) {
        if (ch < '0' || ch > '9') throw fail();
        num = num * 10 + (ch - '0');
        if (num > 1'000'000'000) throw fail();
      }
      for (char ch : frac) {
        if (ch < '0' || ch > '9') throw fail();
        num = num * 10 + (ch - '0');
        den *= 10;
      }
      f = {num, den};
    }
    if (f.num <= 0 || f.den <= 0) throw fail();
    const std::int64_t g = std::gcd(f.num, f.den);
    return {f.num / g, f.den / g};
  }

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  /// Release timestep of the j-th task (0-based): the first t with
  /// ceil((t + 1) * f) > j, which equals floor(j / f).
  Timestep release_of(std::int64_t j) const { return static_cast<Timestep>((j * den) / num); }

  std::string str() const {
    if (den == 1) return std::to_string(num);
    // Print as a terminating decimal when possible.
    std::int64_t d = den;
    while (d % 2 == 0) d /= 2;
    while (d % 5 == 0) d /= 5;
    if (d != 1) return std::to_string(num) + "/" + std::to_string(den);
    std::string digits;
    std::int64_t whole = num / den;
    std::int64_t rem = num % den;
    while (rem != 0) {
      rem *= 10;
      digits.push_back(static_cast<char>('0' + rem / den));
      rem %= den;
    }
    return std::to_string(whole) + "." + digits;
  }

  friend bool operator==(const Frequency&, const Frequency&) = default;
};

/// Name of the generator recorded alongside generated streams.
inline constexpr std::string_view kPrngName = "mt19937_64";

/// Unbiased draw in [0, bound) from the raw 64-bit engine output; avoids the
/// implementation-defined std::uniform_int_distribution so streams are
/// identical across standard libraries.
inline std::uint64_t uniform_below(std::mt19937_64& engine, std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = engine();
    if (r >= threshold) return r % bound;
  }
}

/// Generates `n` tasks with distinct pickup and delivery drawn uniformly from
/// the task endpoints; releases follow `frequency`.
inline std::vector<Task> generate_stream(const GridMap& map, int n, Frequency frequency, std::uint64_t seed) {
  const auto& endpoints = map.task_endpoints();
  if (endpoints.size() < 2) throw ConfigError("task generation needs at least 2 task endpoints");
  if (frequency.num <= 0 || frequency.den <= 0) throw ConfigError("task frequency must be positive");
  if (n < 0) throw ConfigError("task count must be nonnegative");
  std::mt19937_64 engine(seed);
  std::vector<Task> tasks;
  tasks.reserve(n);
  const std::uint64_t k = endpoints.size();
  for (int j = 0; j < n; ++j) {
    const auto p = uniform_below(engine, k);
    auto d = uniform_below(engine, k - 1);
    if (d >= p) ++d;
    Task task;
    task.id = j;
    task.pickup = endpoints[p];
    task.delivery = endpoints[d];
    task.release = frequency.release_of(j);
    tasks.push_back(task);
  }
  return tasks;
}

/// Moves every task released at `t` into `set` (in stream order); returns
/// how many were released. `tasks` must be sorted by release.
inline int release_due(std::span<Task> tasks, Timestep t, TaskSet& set) {
  auto lo = std::lower_bound(tasks.begin(), tasks.end(), t,
                             [](const Task& task, Timestep v) { return task.release < v; });
  int released = 0;
  for (auto it = lo; it != tasks.end() && it->release == t; ++it) {
    if (it->state != TaskState::kUnreleased) continue;
    it->make_pending();
    set.insert(it->id);
    ++released;
  }
  return released;
}

inline constexpr std::string_view kTaskCsvHeader = "release,pickup_row,pickup_col,delivery_row,delivery_col";

inline std::string write_task_csv(const GridMap& map, std::span<const Task> tasks) {
  std::string out(kTaskCsvHeader);
  out.push_back('\n');
  for (const Task& t : tasks) {
    const Coord p = map.coord(t.pickup);
    const Coord d = map.coord(t.delivery);
    out += std::to_string(t.release) + "," + std::to_string(p.row) + "," + std::to_string(p.col) + "," +
           std::to_string(d.row) + "," + std::to_string(d.col) + "\n";
  }
  return out;
}

/// Parses a task CSV; ids follow line order. Locations must lie in the map;
/// releases must be nondecreasing.
inline std::vector<Task> parse_task_csv(const GridMap& map, std::string_view text) {
  const auto lines = detail::split_lines(text);
  if (lines.empty() || lines[0] != kTaskCsvHeader)
    throw ParseError("tasks: line 1: expected header \"" + std::string(kTaskCsvHeader) + "\"");
  std::vector<Task> tasks;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::string_view line = lines[i];
    if (line.empty()) continue;
    const std::string where = "tasks: line " + std::to_string(i + 1);
    std::array<int, 5> v{};
    std::size_t pos = 0;
    for (int k = 0; k < 5; ++k) {
      std::size_t comma = line.find(',', pos);
      if ((k < 4) != (comma != std::string_view::npos))
        throw ParseError(where + ": expected 5 comma-separated integers");
      if (comma == std::string_view::npos) comma = line.size();
      if (!detail::parse_int(line.substr(pos, comma - pos), v[k]))
        throw ParseError(where + ", field " + std::to_string(k + 1) + ": not an integer");
      pos = comma + 1;
    }
    auto cell = [&](int r, int c) {
      if (r < 0 || r >= map.rows() || c < 0 || c >= map.cols())
        throw ParseError(where + ": location (" + std::to_string(r) + "," + std::to_string(c) + ") outside map");
      return map.id(r, c);
    };
    Task task;
    task.id = static_cast<TaskId>(tasks.size());
    task.release = v[0];
    task.pickup = cell(v[1], v[2]);
    task.delivery = cell(v[3], v[4]);
    if (task.release < 0) throw ParseError(where + ": negative release");
    if (!tasks.empty() && task.release < tasks.back().release)
      throw ParseError(where + ": releases must be nondecreasing");
    tasks.push_back(task);
  }
  return tasks;
}

}  // namespace mapd
