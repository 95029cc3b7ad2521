#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mapd/grid_map.hpp"
#include "mapd/simulation.hpp"
#include "mapd/task.hpp"

namespace mapd {

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw ConfigError("write failed for '" + path.string() + "'");
}

// ---- agent starts -------------------------------------------------------

inline constexpr std::string_view kStartsCsvHeader = "row,col";

/// Starts file: header "row,col", then one agent per line.
inline std::vector<CellId> parse_starts_csv(const GridMap& map, std::string_view text) {
  const auto lines = detail::split_lines(text);
  if (lines.empty() || lines.front() != kStartsCsvHeader)
    throw ParseError("starts file: expected header '" + std::string(kStartsCsvHeader) + "'");
  std::vector<CellId> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto comma = lines[i].find(',');
    int r = 0, c = 0;
    if (comma == std::string_view::npos || !detail::parse_int(lines[i].substr(0, comma), r) ||
        !detail::parse_int(lines[i].substr(comma + 1), c))
      throw ParseError("starts file line " + std::to_string(i + 1) + ": expected 'row,col'");
    if (r < 0 || r >= map.rows() || c < 0 || c >= map.cols())
      throw ParseError("starts file line " + std::to_string(i + 1) + ": location out of bounds");
    out.push_back(map.id(r, c));
  }
  return out;
}

inline std::string write_starts_csv(const GridMap& map, const std::vector<CellId>& starts) {
  std::string out(kStartsCsvHeader);
  out += '\n';
  for (CellId s : starts) {
    const Coord c = map.coord(s);
    out += std::to_string(c.row) + ',' + std::to_string(c.col) + '\n';
  }
  return out;
}

/// The first `n` non-task endpoints in row-major order.
inline std::vector<CellId> default_starts(const GridMap& map, int n) {
  const auto& pool = map.nontask_endpoints();
  if (n < 0 || n > static_cast<int>(pool.size()))
    throw ConfigError("requested " + std::to_string(n) + " agents but the map has " + std::to_string(pool.size()) +
                      " non-task endpoints");
  return {pool.begin(), pool.begin() + n};
}

// ---- metrics CSVs ---------------------------------------------------------

inline constexpr std::string_view kTasksCsvHeader = "task,release,pickup_time,finish_time,service_time";
inline constexpr std::string_view kSummaryCsvHeader =
    "algorithm,agents,frequency,seed,makespan,avg_service_time,avg_runtime_ms";
inline constexpr std::string_view kWindowCsvHeader = "t,added,executed";
inline constexpr std::string_view kTrajectoryCsvHeader = "agent,t,row,col";

inline std::string format_fixed(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  return buf;
}

inline std::string write_tasks_csv(const Metrics& m) {
  std::string out(kTasksCsvHeader);
  out += '\n';
  for (const auto& r : m.tasks)
    out += std::to_string(r.id) + ',' + std::to_string(r.release) + ',' + std::to_string(r.pickup_time) + ',' +
           std::to_string(r.finish_time) + ',' + std::to_string(r.service_time) + '\n';
  return out;
}

inline std::string write_window_csv(const Metrics& m) {
  std::string out(kWindowCsvHeader);
  out += '\n';
  for (const auto& w : m.windows)
    out += std::to_string(w.t) + ',' + std::to_string(w.added) + ',' + std::to_string(w.executed) + '\n';
  return out;
}

inline std::string write_trajectory_csv(const GridMap& map, const Trajectory& traj) {
  std::string out(kTrajectoryCsvHeader);
  out += '\n';
  for (std::size_t a = 0; a < traj.locations.size(); ++a)
    for (std::size_t t = 0; t < traj.locations[a].size(); ++t) {
      const Coord c = map.coord(traj.locations[a][t]);
      out += std::to_string(a) + ',' + std::to_string(t) + ',' + std::to_string(c.row) + ',' + std::to_string(c.col) +
             '\n';
    }
  return out;
}

struct SummaryRow {
  std::string algorithm;
  int agents = 0;
  std::string frequency;  // as written by Frequency::str()
  std::uint64_t seed = 0;
  Timestep makespan = 0;
  double avg_service_time = 0;
  double avg_runtime_ms = 0;
};

inline SummaryRow summarize(Algorithm algo, int agents, const std::string& frequency, std::uint64_t seed,
                            const Metrics& m) {
  return {to_string(algo), agents, frequency, seed, m.makespan, m.avg_service_time(), m.avg_runtime_ms()};
}

/// Rows are written in the given order. With `timing` false the runtime
/// column is written as 0 so that repeated runs are byte-identical.
inline std::string write_summary_csv(const std::vector<SummaryRow>& rows, bool timing = true) {
  std::string out(kSummaryCsvHeader);
  out += '\n';
  for (const auto& r : rows)
    out += r.algorithm + ',' + std::to_string(r.agents) + ',' + r.frequency + ',' + std::to_string(r.seed) + ',' +
           std::to_string(r.makespan) + ',' + format_fixed(r.avg_service_time, 4) + ',' +
           format_fixed(timing ? r.avg_runtime_ms : 0.0, 4) + '\n';
  return out;
}

// ---- scenario files -------------------------------------------------------

/// Scenario file: one "key=value" per line; blank lines and lines starting
/// with '#' are ignored. Keys are case-sensitive and may appear once.
inline std::map<std::string, std::string> parse_key_values(std::string_view text) {
  std::map<std::string, std::string> out;
  const auto lines = detail::split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) line.remove_prefix(1);
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t')) line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos || eq == 0)
      throw ParseError("scenario line " + std::to_string(i + 1) + ": expected key=value");
    std::string key(line.substr(0, eq));
    if (out.count(key)) throw ParseError("scenario line " + std::to_string(i + 1) + ": duplicate key '" + key + "'");
    out.emplace(std::move(key), std::string(line.substr(eq + 1)));
  }
  return out;
}

inline std::string write_key_values(const std::vector<std::pair<std::string, std::string>>& entries) {
  std::string out;
  for (const auto& [k, v] : entries) out += k + '=' + v + '\n';
  return out;
}

}  // namespace mapd
