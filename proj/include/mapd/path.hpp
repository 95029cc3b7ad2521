#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "mapd/grid_map.hpp"

namespace mapd {

/// Timestep-indexed location sequence. After the last cell the agent rests
/// there forever.
struct Path {
  Timestep start_time = 0;
  std::vector<CellId> cells;

  Timestep end_time() const { return start_time + static_cast<Timestep>(cells.size()) - 1; }
  CellId last() const { return cells.back(); }

  /// Location at `t` (clamped to the first/last cell outside the interval).
  CellId at(Timestep t) const {
    if (t <= start_time) return cells.front();
    if (t >= end_time()) return cells.back();
    return cells[t - start_time];
  }

  /// First timestep >= from at which the path visits `cell`, if any.
  std::optional<Timestep> first_visit(CellId cell, Timestep from) const {
    for (Timestep t = std::max(from, start_time); t <= end_time(); ++t)
      if (at(t) == cell) return t;
    if (from > end_time() && last() == cell) return from;
    return std::nullopt;
  }

  /// Same path restricted to timesteps >= from (a single cell if already over).
  Path suffix(Timestep from) const {
    if (from <= start_time) return *this;
    if (from >= end_time()) return {from, {last()}};
    return {from, {cells.begin() + (from - start_time), cells.end()}};
  }

  friend bool operator==(const Path&, const Path&) = default;
};

inline Path rest_path(CellId cell, Timestep t) { return {t, {cell}}; }

/// Vertex and edge occupancy implied by a set of committed paths, including
/// each path's infinite terminal rest. Queries implement exactly two rules:
/// no two agents in one cell at one timestep, no two agents swapping along
/// one edge in one timestep. Following into a vacated cell is allowed.
class ReservationTable {
 public:
  ReservationTable() = default;

  /// Only timesteps >= `from` are recorded.
  ReservationTable(const GridMap& map, Timestep from)
      : cells_(map.size()), from_(from), rest_start_(map.size(), kForever), rest_agent_(map.size(), kNoAgent),
        last_visit_(map.size(), from - 1) {}

  void add_path(AgentId agent, const Path& path) {
    const Path p = path.suffix(from_);
    const Timestep rest = std::max(p.end_time(), from_);
    for (Timestep t = std::max(p.start_time, from_); t < rest; ++t) {
      const CellId c = p.at(t);
      layer(t)[c] = agent;
      last_visit_[c] = std::max(last_visit_[c], t);
    }
    const CellId end = p.last();
    if (rest < rest_start_[end]) {
      rest_start_[end] = rest;
      rest_agent_[end] = agent;
    }
    total_length_ += static_cast<long>(p.cells.size());
    latest_ = std::max(latest_, rest);
  }

  /// Agent occupying `cell` at `t`, or kNoAgent.
  AgentId occupant(CellId cell, Timestep t) const {
    if (t >= rest_start_[cell]) return rest_agent_[cell];
    const Timestep k = t - from_;
    if (k < 0 || k >= static_cast<Timestep>(layers_.size())) return kNoAgent;
    return layers_[k][cell];
  }

  bool vertex_free(CellId cell, Timestep t) const { return occupant(cell, t) == kNoAgent; }

  /// False iff some agent moves `to` -> `from` between t and t + 1.
  bool edge_free(CellId from, CellId to, Timestep t) const {
    if (from == to) return true;
    const AgentId a = occupant(to, t);
    return a == kNoAgent || occupant(from, t + 1) != a;
  }

  /// True iff nobody occupies `cell` at any timestep >= t.
  bool free_from(CellId cell, Timestep t) const { return rest_start_[cell] == kForever && last_visit_[cell] < t; }

  /// Last timestep with a non-rest reservation; all later timesteps look alike.
  Timestep latest() const { return latest_; }
  Timestep from() const { return from_; }
  long total_length() const { return total_length_; }
  int cell_count() const { return cells_; }

 private:
  std::vector<AgentId>& layer(Timestep t) {
    const Timestep k = t - from_;
    while (static_cast<Timestep>(layers_.size()) <= k) layers_.emplace_back(cells_, kNoAgent);
    return layers_[k];
  }

  int cells_ = 0;
  Timestep from_ = 0;
  std::vector<std::vector<AgentId>> layers_;
  std::vector<Timestep> rest_start_;
  std::vector<AgentId> rest_agent_;
  std::vector<Timestep> last_visit_;
  long total_length_ = 0;
  Timestep latest_ = 0;
};

/// Per-agent CBS constraints: forbidden (cell, t) and (from, to, t) moves.
struct SearchConstraints {
  std::set<std::pair<CellId, Timestep>> vertices;
  std::set<std::tuple<CellId, CellId, Timestep>> edges;

  bool empty() const { return vertices.empty() && edges.empty(); }
  bool vertex_allowed(CellId c, Timestep t) const { return !vertices.count({c, t}); }
  bool edge_allowed(CellId from, CellId to, Timestep t) const { return !edges.count({from, to, t}); }

  /// Latest timestep mentioned by any constraint (or `fallback`).
  Timestep latest(Timestep fallback) const {
    Timestep best = fallback;
    for (const auto& [c, t] : vertices) best = std::max(best, t);
    for (const auto& [a, b, t] : edges) best = std::max(best, t + 1);
    return best;
  }
  /// Latest vertex constraint on `cell` (or `fallback`).
  Timestep latest_on(CellId cell, Timestep fallback) const {
    Timestep best = fallback;
    for (const auto& [c, t] : vertices)
      if (c == cell) best = std::max(best, t);
    return best;
  }
};

enum class CollisionKind { kVertex, kEdge, kJump };

struct Collision {
  CollisionKind kind = CollisionKind::kVertex;
  AgentId first = kNoAgent;
  AgentId second = kNoAgent;
  CellId cell = kNoCell;   // vertex: shared cell; edge: `first`'s origin
  CellId other = kNoCell;  // edge: `first`'s destination
  Timestep time = 0;       // vertex: the timestep; edge: departure timestep

  friend bool operator==(const Collision&, const Collision&) = default;
};

inline bool operator<(const Collision& a, const Collision& b) {
  return std::tie(a.time, a.kind, a.first, a.second, a.cell, a.other) <
         std::tie(b.time, b.kind, b.first, b.second, b.cell, b.other);
}

/// All pairwise collisions among `paths` from timestep `from` until every
/// path has been resting for one step (after which nothing changes).
/// Vertex collisions precede edge collisions at equal time; pairs are
/// reported once with first < second. Entries with empty cells are skipped.
inline std::vector<Collision> find_collisions(const GridMap& map, const std::vector<Path>& paths, Timestep from,
                                              std::size_t limit = static_cast<std::size_t>(-1)) {
  std::vector<Collision> out;
  Timestep horizon = from;
  for (const Path& p : paths)
    if (!p.cells.empty()) horizon = std::max(horizon, p.end_time());
  std::vector<AgentId> occ(map.size(), kNoAgent);
  std::vector<CellId> touched;
  for (Timestep t = from; t <= horizon && out.size() < limit; ++t) {
    for (AgentId a = 0; a < static_cast<AgentId>(paths.size()); ++a) {
      if (paths[a].cells.empty()) continue;
      const CellId c = paths[a].at(t);
      if (occ[c] != kNoAgent) {
        out.push_back({CollisionKind::kVertex, occ[c], a, c, kNoCell, t});
      } else {
        occ[c] = a;
        touched.push_back(c);
      }
    }
    for (AgentId a = 0; a < static_cast<AgentId>(paths.size()) && t < horizon; ++a) {
      if (paths[a].cells.empty()) continue;
      const CellId u = paths[a].at(t);
      const CellId v = paths[a].at(t + 1);
      if (u == v) continue;
      // Another agent at v now and at u next step, with a larger id.
      const AgentId b = occ[v];
      if (b == kNoAgent || b <= a) continue;
      if (paths[b].at(t + 1) == u) out.push_back({CollisionKind::kEdge, a, b, u, v, t});
    }
    for (CellId c : touched) occ[c] = kNoAgent;
    touched.clear();
  }
  return out;
}

inline std::string describe(const GridMap& map, const Collision& c) {
  auto loc = [&](CellId x) {
    const Coord p = map.coord(x);
    return "(" + std::to_string(p.row) + "," + std::to_string(p.col) + ")";
  };
  switch (c.kind) {
    case CollisionKind::kVertex:
      return "vertex collision: agents " + std::to_string(c.first) + " and " + std::to_string(c.second) + " at " +
             loc(c.cell) + ", t=" + std::to_string(c.time);
    case CollisionKind::kEdge:
      return "edge collision: agents " + std::to_string(c.first) + " and " + std::to_string(c.second) +
             " swap " + loc(c.cell) + "<->" + loc(c.other) + ", t=" + std::to_string(c.time);
    case CollisionKind::kJump:
      return "invalid move: agent " + std::to_string(c.first) + " " + loc(c.cell) + "->" + loc(c.other) +
             ", t=" + std::to_string(c.time);
  }
  return "?";
}

}  // namespace mapd
