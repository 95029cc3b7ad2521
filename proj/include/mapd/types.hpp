#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace mapd {

using CellId = int;
using Timestep = int;
using AgentId = int;
using TaskId = int;

inline constexpr CellId kNoCell = -1;
inline constexpr AgentId kNoAgent = -1;
inline constexpr TaskId kNoTask = -1;
inline constexpr int kInfinity = std::numeric_limits<int>::max() / 4;
inline constexpr Timestep kForever = std::numeric_limits<Timestep>::max() / 4;

struct Coord {
  int row = 0;
  int col = 0;
  friend bool operator==(const Coord&, const Coord&) = default;
};

// Malformed map, task or scenario input.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inconsistent configuration or invalid argument to a domain operation.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A planner could not produce a path where the protocol requires one.
class PlanningError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The simulation could not complete: safety cap, CBS failure, broken invariant.
class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mapd
