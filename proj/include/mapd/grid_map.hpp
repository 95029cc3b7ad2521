#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <deque>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mapd/types.hpp"

namespace mapd {

enum class CellKind : char {
  kFree = '.',
  kBlocked = '@',
  kTaskEndpoint = 'e',
  kNonTaskEndpoint = 'r',
};

/// 4-neighbor grid viewed as an undirected graph. Passable cells are the
/// vertices; endpoints are split into task endpoints ('e') and non-task
/// endpoints ('r'). Immutable after construction.
class GridMap {
 public:
  GridMap() = default;

  GridMap(int rows, int cols, std::vector<CellKind> cells)
      : rows_(rows), cols_(cols), cells_(std::move(cells)) {
    if (rows_ <= 0 || cols_ <= 0) throw ConfigError("grid dimensions must be positive");
    if (static_cast<int>(cells_.size()) != rows_ * cols_)
      throw ConfigError("cell count does not match grid dimensions");
    adjacency_.assign(cells_.size(), {});
    degree_.assign(cells_.size(), 0);
    for (CellId c = 0; c < size(); ++c) {
      switch (cells_[c]) {
        case CellKind::kTaskEndpoint: task_endpoints_.push_back(c); break;
        case CellKind::kNonTaskEndpoint: nontask_endpoints_.push_back(c); break;
        default: break;
      }
      if (!passable(c)) continue;
      ++vertex_count_;
      const Coord p = coord(c);
      // Fixed order: up, left, right, down (ascending cell id).
      constexpr std::array<std::array<int, 2>, 4> kSteps{{{-1, 0}, {0, -1}, {0, 1}, {1, 0}}};
      for (const auto& [dr, dc] : kSteps) {
        const int r = p.row + dr;
        const int q = p.col + dc;
        if (r < 0 || r >= rows_ || q < 0 || q >= cols_) continue;
        const CellId n = id(r, q);
        if (passable(n)) adjacency_[c][degree_[c]++] = n;
      }
      edge_count_ += degree_[c];
    }
    edge_count_ /= 2;
    endpoints_ = task_endpoints_;
    endpoints_.insert(endpoints_.end(), nontask_endpoints_.begin(), nontask_endpoints_.end());
    std::sort(endpoints_.begin(), endpoints_.end());
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int size() const { return rows_ * cols_; }
  int vertex_count() const { return vertex_count_; }
  int edge_count() const { return edge_count_; }

  bool in_bounds(CellId c) const { return c >= 0 && c < size(); }
  bool passable(CellId c) const { return in_bounds(c) && cells_[c] != CellKind::kBlocked; }
  CellKind kind(CellId c) const { return cells_.at(c); }
  bool is_task_endpoint(CellId c) const { return in_bounds(c) && cells_[c] == CellKind::kTaskEndpoint; }
  bool is_nontask_endpoint(CellId c) const {
    return in_bounds(c) && cells_[c] == CellKind::kNonTaskEndpoint;
  }
  bool is_endpoint(CellId c) const { return is_task_endpoint(c) || is_nontask_endpoint(c); }

  CellId id(int row, int col) const { return row * cols_ + col; }
  CellId id(Coord p) const { return id(p.row, p.col); }
  Coord coord(CellId c) const { return {c / cols_, c % cols_}; }

  // Sorted by cell id.
  const std::vector<CellId>& task_endpoints() const { return task_endpoints_; }
  const std::vector<CellId>& nontask_endpoints() const { return nontask_endpoints_; }
  const std::vector<CellId>& endpoints() const { return endpoints_; }

  /// Orthogonally adjacent passable cells of `v`, in ascending id order.
  /// Throws ConfigError if `v` is blocked or out of bounds.
  std::vector<CellId> neighbors(CellId v) const {
    if (!passable(v)) throw ConfigError("neighbors: cell " + std::to_string(v) + " is not passable");
    auto adj = adjacent(v);
    return {adj.begin(), adj.end()};
  }

  // Unchecked view for hot loops; `v` must be passable.
  std::span<const CellId> adjacent(CellId v) const {
    return {adjacency_[v].data(), static_cast<std::size_t>(degree_[v])};
  }

  bool adjacent_or_same(CellId a, CellId b) const {
    if (a == b) return true;
    for (CellId n : adjacent(a))
      if (n == b) return true;
    return false;
  }

  friend bool operator==(const GridMap& a, const GridMap& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.cells_ == b.cells_;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<CellKind> cells_;
  std::vector<std::array<CellId, 4>> adjacency_;
  std::vector<int> degree_;
  std::vector<CellId> task_endpoints_;
  std::vector<CellId> nontask_endpoints_;
  std::vector<CellId> endpoints_;
  int vertex_count_ = 0;
  int edge_count_ = 0;
};

namespace detail {

inline std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    pos = nl + 1;
  }
  return lines;
}

inline bool parse_int(std::string_view s, int& out) {
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

}  // namespace detail

/// Parses the map file format: a "rows cols" header followed by `rows` lines
/// of exactly `cols` characters from {'.', '@', 'e', 'r'}.
inline GridMap parse_map(std::string_view text) {
  const auto lines = detail::split_lines(text);
  if (lines.empty()) throw ParseError("map: line 1: missing header");
  std::istringstream header{std::string(lines[0])};
  std::string rows_tok, cols_tok, extra;
  header >> rows_tok >> cols_tok;
  int rows = 0, cols = 0;
  if (!detail::parse_int(rows_tok, rows) || !detail::parse_int(cols_tok, cols) || (header >> extra) ||
      rows <= 0 || cols <= 0)
    throw ParseError("map: line 1: malformed header, expected \"rows cols\"");
  if (static_cast<int>(lines.size()) < rows + 1)
    throw ParseError("map: line " + std::to_string(lines.size() + 1) + ": expected " +
                     std::to_string(rows) + " grid rows, found " + std::to_string(lines.size() - 1));
  for (std::size_t extra_line = rows + 1; extra_line < lines.size(); ++extra_line)
    if (!lines[extra_line].empty())
      throw ParseError("map: line " + std::to_string(extra_line + 1) + ": unexpected content after grid");

  std::vector<CellKind> cells;
  cells.reserve(static_cast<std::size_t>(rows) * cols);
  for (int r = 0; r < rows; ++r) {
    const std::string_view line = lines[r + 1];
    if (static_cast<int>(line.size()) != cols)
      throw ParseError("map: line " + std::to_string(r + 2) + ": expected " + std::to_string(cols) +
                       " columns, found " + std::to_string(line.size()));
    for (int c = 0; c < cols; ++c) {
      switch (line[c]) {
        case '.': cells.push_back(CellKind::kFree); break;
        case '@': cells.push_back(CellKind::kBlocked); break;
        case 'e': cells.push_back(CellKind::kTaskEndpoint); break;
        case 'r': cells.push_back(CellKind::kNonTaskEndpoint); break;
        default:
          throw ParseError("map: line " + std::to_string(r + 2) + ", column " + std::to_string(c + 1) +
                           ": unknown character '" + std::string(1, line[c]) + "'");
      }
    }
  }
  return GridMap(rows, cols, std::move(cells));
}

inline std::string to_text(const GridMap& map) {
  std::string out = std::to_string(map.rows()) + " " + std::to_string(map.cols()) + "\n";
  for (int r = 0; r < map.rows(); ++r) {
    for (int c = 0; c < map.cols(); ++c) out.push_back(static_cast<char>(map.kind(map.id(r, c))));
    out.push_back('\n');
  }
  return out;
}

/// Unconstrained breadth-first distances from `source` to every cell
/// (kInfinity where unreachable or blocked).
inline std::vector<int> bfs_distances(const GridMap& map, CellId source) {
  std::vector<int> dist(map.size(), kInfinity);
  if (!map.passable(source)) return dist;
  std::deque<CellId> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    const CellId u = queue.front();
    queue.pop_front();
    for (CellId n : map.adjacent(u)) {
      if (dist[n] != kInfinity) continue;
      dist[n] = dist[u] + 1;
      queue.push_back(n);
    }
  }
  return dist;
}

/// Largest finite shortest-path distance between two passable cells.
inline int map_diameter(const GridMap& map) {
  int best = 0;
  for (CellId c = 0; c < map.size(); ++c) {
    if (!map.passable(c)) continue;
    for (int d : bfs_distances(map, c))
      if (d != kInfinity) best = std::max(best, d);
  }
  return best;
}

}  // namespace mapd
