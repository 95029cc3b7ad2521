#pragma once

// Small hand-built instances shared by unit and acceptance tests.

#include <string>
#include <vector>

#include "mapd/mapd.hpp"

namespace fixtures {

inline mapd::Task make_task(mapd::TaskId id, mapd::CellId pickup, mapd::CellId delivery, mapd::Timestep release) {
  mapd::Task t;
  t.id = id;
  t.pickup = pickup;
  t.delivery = delivery;
  t.release = release;
  return t;
}

// Two agents on the only two parking cells, task endpoints spread out so
// that every endpoint pair has a path avoiding all others.
inline mapd::MapdInstance wf_spread() {
  const auto map = mapd::parse_map("4 5\nr...r\n.e.e.\n.....\n..e..\n");
  return {map, {map.id(0, 0), map.id(0, 4)}, {make_task(0, map.id(1, 1), map.id(3, 2), 0)}};
}

// Same layout, but the second agent starts on a task endpoint: two agents,
// one non-task endpoint.
inline mapd::MapdInstance wf_short_parking() {
  const auto map = mapd::parse_map("4 5\nr...e\n.e.e.\n.....\n..e..\n");
  return {map, {map.id(0, 0), map.id(0, 4)}, {make_task(0, map.id(1, 1), map.id(3, 2), 0)}};
}

// A dead-end corridor e2 - e1 - e3 hanging below a single opening: every
// path between e2 and e3 traverses e1.
inline mapd::MapdInstance wf_dead_end() {
  const auto map = mapd::parse_map("3 5\nr...r\n@@.@@\n@eee@\n");
  return {map, {map.id(0, 0), map.id(0, 4)}, {make_task(0, map.id(2, 1), map.id(2, 3), 0)}};
}

// Two agents, two tasks whose pickup is their delivery. a_2 is one step
// from tau_1, a_1 is two steps from tau_1 and five from tau_2.
inline mapd::MapdInstance two_agent() {
  const auto map = mapd::parse_map("3 4\nr.e.\n..r.\n...e\n");
  return {map,
          {map.id(0, 0), map.id(1, 2)},
          {make_task(0, map.id(0, 2), map.id(0, 2), 0), make_task(1, map.id(2, 3), map.id(2, 3), 0)}};
}

// One agent at the left end of a 1x5 corridor, one task (0,2) -> (0,4).
inline mapd::MapdInstance corridor() {
  const auto map = mapd::parse_map("1 5\nr.e.e\n");
  return {map, {map.id(0, 0)}, {make_task(0, map.id(0, 2), map.id(0, 4), 0)}};
}

// Desk-scale warehouse: parking columns on both sides, three shelf rows
// with task endpoints above and below each shelf segment.
inline std::string warehouse_text() {
  std::string text = "15 21\n";
  for (int r = 0; r < 15; ++r) {
    for (int c = 0; c < 21; ++c) {
      char ch = '.';
      if (c == 0 || c == 20) ch = 'r';
      else if (c == 1 || c == 7 || c == 13 || c == 19) ch = '.';
      else if (r == 2 || r == 7 || r == 12) ch = '@';
      else if (r == 1 || r == 3 || r == 6 || r == 8 || r == 11 || r == 13) ch = 'e';
      text += ch;
    }
    text += '\n';
  }
  return text;
}

}  // namespace fixtures
