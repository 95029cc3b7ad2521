#pragma once

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "mapd/io.hpp"
#include "mapd/simulation.hpp"
#include "mapd/well_formed.hpp"

namespace mapd::cli {

namespace fs = std::filesystem;

enum ExitCode : int { kOk = 0, kConfigError = 1, kSimulationFailure = 2 };

/// "n,f" or "n,f,seed".
struct GenSpec {
  int n = 0;
  Frequency frequency;
  std::optional<std::uint64_t> seed;
};

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  for (;;) {
    const auto next = s.find(sep, pos);
    out.emplace_back(s.substr(pos, next - pos));
    if (next == std::string_view::npos) return out;
    pos = next + 1;
  }
}

inline std::uint64_t parse_u64(std::string_view s, const char* what) {
  std::uint64_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || p != s.data() + s.size())
    throw ConfigError(std::string("invalid ") + what + " '" + std::string(s) + "'");
  return v;
}

inline int parse_count(std::string_view s, const char* what) {
  const std::uint64_t v = parse_u64(s, what);
  if (v > 1'000'000'000) throw ConfigError(std::string(what) + " too large");
  return static_cast<int>(v);
}

inline GenSpec parse_gen(std::string_view s) {
  const auto parts = split(s, ',');
  if (parts.size() != 2 && parts.size() != 3) throw ConfigError("--gen expects n,f or n,f,seed");
  GenSpec g;
  g.n = parse_count(parts[0], "task count");
  g.frequency = Frequency::parse(parts[1]);
  if (parts.size() == 3) g.seed = parse_u64(parts[2], "seed");
  return g;
}

/// Comma-separated integers; "a-b" expands to the inclusive range.
inline std::vector<std::uint64_t> parse_u64_list(std::string_view s, const char* what) {
  std::vector<std::uint64_t> out;
  for (const auto& item : split(s, ',')) {
    const auto dash = item.find('-');
    if (dash == std::string::npos) {
      out.push_back(parse_u64(item, what));
      continue;
    }
    const auto lo = parse_u64(std::string_view(item).substr(0, dash), what);
    const auto hi = parse_u64(std::string_view(item).substr(dash + 1), what);
    if (hi < lo || hi - lo > 100'000) throw ConfigError(std::string("invalid ") + what + " range '" + item + "'");
    for (auto v = lo; v <= hi; ++v) out.push_back(v);
  }
  return out;
}

/// Everything needed to build one instance. Filled from a scenario file
/// and/or flags; flags win.
struct ScenarioOptions {
  std::string scenario;
  std::string map;
  std::optional<int> agents;
  std::string starts;
  std::string tasks;
  std::string gen;
  std::optional<std::uint64_t> seed;
  std::string algo = "tp";
  int window = 100;
  std::optional<Timestep> cap;
  bool free_request = false;
};

inline void apply_scenario_file(ScenarioOptions& o, const CLI::App& app) {
  if (o.scenario.empty()) return;
  const fs::path file(o.scenario);
  const auto kv = parse_key_values(read_file(file));
  const fs::path base = file.parent_path();
  auto path_of = [&](const std::string& v) { return fs::path(v).is_absolute() ? v : (base / v).string(); };
  auto given = [&](const char* flag) { return app.count(flag) > 0; };
  for (const auto& [key, value] : kv) {
    if (key == "map") {
      if (!given("--map")) o.map = path_of(value);
    } else if (key == "agents") {
      if (!given("--agents") && !given("--starts")) o.agents = parse_count(value, "agent count");
    } else if (key == "starts") {
      if (!given("--agents") && !given("--starts")) o.starts = path_of(value);
    } else if (key == "tasks") {
      if (!given("--tasks") && !given("--gen")) o.tasks = path_of(value);
    } else if (key == "gen") {
      if (!given("--tasks") && !given("--gen")) o.gen = value;
    } else if (key == "seed") {
      if (!given("--seed")) o.seed = parse_u64(value, "seed");
    } else if (key == "algo") {
      if (!given("--algo")) o.algo = value;
    } else if (key == "window") {
      if (!given("--window")) o.window = parse_count(value, "window");
    } else if (key == "cap") {
      if (!given("--cap")) o.cap = parse_count(value, "cap");
    } else if (key == "free_request") {
      if (!given("--free-request")) {
        if (value != "0" && value != "1") throw ConfigError("free_request must be 0 or 1");
        o.free_request = value == "1";
      }
    } else if (key == "prng") {
      if (value != kPrngName) throw ConfigError("scenario requires PRNG '" + value + "', this build uses " +
                                                std::string(kPrngName));
    } else {
      throw ConfigError("unknown scenario key '" + key + "'");
    }
  }
}

struct LoadedScenario {
  MapdInstance instance;
  std::string frequency = "-";  // for the summary row
  std::uint64_t seed = 0;
};

inline LoadedScenario load_scenario(const ScenarioOptions& o) {
  if (o.map.empty()) throw ConfigError("a map is required (--map)");
  LoadedScenario s;
  s.instance.map = parse_map(read_file(o.map));
  const GridMap& map = s.instance.map;
  if (o.agents && !o.starts.empty()) throw ConfigError("give either --agents or --starts, not both");
  if (!o.starts.empty()) s.instance.agent_starts = parse_starts_csv(map, read_file(o.starts));
  else if (o.agents) s.instance.agent_starts = default_starts(map, *o.agents);
  else throw ConfigError("agents are required (--agents N or --starts FILE)");

  if (!o.tasks.empty() && !o.gen.empty()) throw ConfigError("give either --tasks or --gen, not both");
  s.seed = o.seed.value_or(0);
  if (!o.tasks.empty()) {
    s.instance.tasks = parse_task_csv(map, read_file(o.tasks));
  } else if (!o.gen.empty()) {
    const GenSpec g = parse_gen(o.gen);
    s.seed = g.seed.value_or(o.seed.value_or(1));
    s.frequency = g.frequency.str();
    s.instance.tasks = generate_stream(map, g.n, g.frequency, s.seed);
  } else {
    throw ConfigError("tasks are required (--tasks FILE or --gen n,f[,seed])");
  }
  return s;
}

inline void add_scenario_flags(CLI::App& cmd, ScenarioOptions& o, bool with_run_flags) {
  cmd.add_option("--scenario", o.scenario, "key=value scenario file; explicit flags override it");
  cmd.add_option("--map", o.map, "map file");
  cmd.add_option("--agents", o.agents, "use the first N non-task endpoints as starts");
  cmd.add_option("--starts", o.starts, "starts file (row,col per line)");
  cmd.add_option("--tasks", o.tasks, "task CSV file");
  cmd.add_option("--gen", o.gen, "generate n tasks at frequency f: n,f[,seed]");
  cmd.add_option("--seed", o.seed, "generator seed");
  if (!with_run_flags) return;
  cmd.add_option("--algo", o.algo, "tp, tpts or central")->check(CLI::IsMember({"tp", "tpts", "central"}));
  cmd.add_option("--window", o.window, "window length for window.csv")->check(CLI::PositiveNumber);
  cmd.add_option("--cap", o.cap, "safety cap in timesteps")->check(CLI::PositiveNumber);
  cmd.add_flag("--free-request", o.free_request, "every free agent requests the token each timestep");
}

inline void print_report(std::ostream& out, const GridMap& map, const WellFormedReport& report) {
  if (report.well_formed()) {
    out << "well-formed\n";
    return;
  }
  for (const auto& v : report.violations) {
    out << "violation (" << v.condition << "): " << v.detail;
    if (v.first != kNoCell) {
      const Coord a = map.coord(v.first);
      out << " [(" << a.row << "," << a.col << ")";
      if (v.second != kNoCell) {
        const Coord b = map.coord(v.second);
        out << " - (" << b.row << "," << b.col << ")";
      }
      out << "]";
    }
    out << "\n";
  }
}

struct RunOutputs {
  std::string out_dir;
  bool events = false;
  bool timing = true;
};

inline int cmd_run(const ScenarioOptions& o, const RunOutputs& outs, std::ostream& out, std::ostream& err) {
  const LoadedScenario s = load_scenario(o);
  const Algorithm algo = parse_algorithm(o.algo);
  const WellFormedReport report = check_well_formed(s.instance.map, s.instance.agent_starts, s.instance.tasks.size());
  if (!report.well_formed()) {
    err << "warning: instance is not well-formed; running anyway\n";
    print_report(err, s.instance.map, report);
  }
  SimulationConfig cfg;
  cfg.algorithm = algo;
  cfg.window = o.window;
  cfg.cap = o.cap;
  cfg.free_request = o.free_request;
  EventLog log;
  if (outs.events) cfg.log = &log;
  const RunResult result = run(s.instance, cfg);
  const auto collisions = audit_collisions(s.instance.map, result.trajectory);
  if (!collisions.empty()) {
    err << "error: trajectory audit failed: " << describe(s.instance.map, collisions.front()) << "\n";
    return kSimulationFailure;
  }
  const int agents = static_cast<int>(s.instance.agent_starts.size());
  const std::string summary =
      write_summary_csv({summarize(algo, agents, s.frequency, s.seed, result.metrics)}, outs.timing);
  if (outs.out_dir.empty()) {
    out << summary;
    return kOk;
  }
  const fs::path dir(outs.out_dir);
  const GridMap& map = s.instance.map;
  write_file(dir / "summary.csv", summary);
  write_file(dir / "tasks.csv", write_tasks_csv(result.metrics));
  write_file(dir / "window.csv", write_window_csv(result.metrics));
  write_file(dir / "trajectory.csv", write_trajectory_csv(map, result.trajectory));
  write_file(dir / "starts.csv", write_starts_csv(map, s.instance.agent_starts));
  write_file(dir / "input_tasks.csv", write_task_csv(map, s.instance.tasks));
  std::vector<std::pair<std::string, std::string>> kv{
      {"map", fs::absolute(o.map).lexically_normal().string()},
      {"starts", "starts.csv"},
      {"tasks", "input_tasks.csv"},
      {"seed", std::to_string(s.seed)},
      {"prng", std::string(kPrngName)},
      {"algo", o.algo},
      {"window", std::to_string(o.window)},
      {"free_request", o.free_request ? "1" : "0"}};
  if (o.cap) kv.emplace_back("cap", std::to_string(*o.cap));
  std::string scenario = o.gen.empty() ? "" : "# generated with gen=" + o.gen + "\n";
  write_file(dir / "scenario.txt", scenario + write_key_values(kv));
  if (outs.events) write_file(dir / "events.jsonl", log.to_json_lines());
  out << summary;
  return kOk;
}

struct SweepOptions {
  std::string map;
  std::string agents = "10";
  std::string frequencies = "1";
  std::string seeds = "1";
  int tasks = 100;
  std::string algos = "tp,tpts,central";
  int window = 100;
  std::optional<Timestep> cap;
  bool free_request = false;
  std::string out_dir;
  bool timing = true;
};

inline std::string file_safe(std::string s) {
  for (char& c : s)
    if (c == '/') c = '-';
  return s;
}

inline int cmd_sweep(const SweepOptions& o, std::ostream& out, std::ostream& err) {
  if (o.map.empty()) throw ConfigError("a map is required (--map)");
  const GridMap map = parse_map(read_file(o.map));
  std::vector<Algorithm> algos;
  for (const auto& a : split(o.algos, ',')) algos.push_back(parse_algorithm(a));
  std::sort(algos.begin(), algos.end(), [](Algorithm x, Algorithm y) {
    return std::string_view(to_string(x)) < std::string_view(to_string(y));
  });
  algos.erase(std::unique(algos.begin(), algos.end()), algos.end());
  std::vector<Frequency> freqs;
  for (const auto& f : split(o.frequencies, ',')) freqs.push_back(Frequency::parse(f));
  std::sort(freqs.begin(), freqs.end(), [](const Frequency& a, const Frequency& b) { return a.num * b.den < b.num * a.den; });
  freqs.erase(std::unique(freqs.begin(), freqs.end()), freqs.end());
  std::vector<int> agent_counts;
  for (auto v : parse_u64_list(o.agents, "agent count")) agent_counts.push_back(parse_count(std::to_string(v), "agent count"));
  std::sort(agent_counts.begin(), agent_counts.end());
  agent_counts.erase(std::unique(agent_counts.begin(), agent_counts.end()), agent_counts.end());
  auto seeds = parse_u64_list(o.seeds, "seed");
  std::sort(seeds.begin(), seeds.end());
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());

  std::vector<SummaryRow> rows;
  int failures = 0;
  for (Algorithm algo : algos)
    for (const Frequency& f : freqs)
      for (int n : agent_counts)
        for (std::uint64_t seed : seeds) {
          MapdInstance inst{map, default_starts(map, n), generate_stream(map, o.tasks, f, seed)};
          SimulationConfig cfg;
          cfg.algorithm = algo;
          cfg.window = o.window;
          cfg.cap = o.cap;
          cfg.free_request = o.free_request;
          const std::string tag = std::string(to_string(algo)) + "_a" + std::to_string(n) + "_f" +
                                  file_safe(f.str()) + "_s" + std::to_string(seed);
          try {
            const RunResult r = run(inst, cfg);
            if (!audit_collisions(map, r.trajectory).empty()) throw SimulationError("trajectory audit failed");
            rows.push_back(summarize(algo, n, f.str(), seed, r.metrics));
            if (!o.out_dir.empty()) write_file(fs::path(o.out_dir) / "window" / (tag + ".csv"), write_window_csv(r.metrics));
          } catch (const SimulationError& e) {
            err << "error: " << tag << ": " << e.what() << "\n";
            ++failures;
          } catch (const PlanningError& e) {
            err << "error: " << tag << ": " << e.what() << "\n";
            ++failures;
          }
        }
  const std::string summary = write_summary_csv(rows, o.timing);
  if (o.out_dir.empty()) out << summary;
  else write_file(fs::path(o.out_dir) / "summary.csv", summary);
  return failures == 0 ? kOk : kSimulationFailure;
}

/// Entry point for the `mapd` tool. Diagnostics go to `err`.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Lifelong multi-agent pickup and delivery simulator", "mapd"};
  app.require_subcommand(1);
  app.allow_extras(false);

  ScenarioOptions run_opts;
  RunOutputs run_outs;
  bool run_no_timing = false;
  auto* run_cmd = app.add_subcommand("run", "run one simulation");
  add_scenario_flags(*run_cmd, run_opts, true);
  run_cmd->add_option("--out", run_outs.out_dir, "output directory (default: summary to stdout)");
  run_cmd->add_flag("--events", run_outs.events, "also write events.jsonl");
  run_cmd->add_flag("--no-timing", run_no_timing, "write 0 for avg_runtime_ms");

  SweepOptions sweep;
  bool sweep_no_timing = false;
  auto* sweep_cmd = app.add_subcommand("sweep", "run algorithms x frequencies x agent counts x seeds");
  sweep_cmd->add_option("--map", sweep.map, "map file")->required();
  sweep_cmd->add_option("--agents", sweep.agents, "agent counts, e.g. 10,15,20");
  sweep_cmd->add_option("--frequencies", sweep.frequencies, "task frequencies, e.g. 0.5,1,2");
  sweep_cmd->add_option("--seeds", sweep.seeds, "seeds, e.g. 1-10");
  sweep_cmd->add_option("--n", sweep.tasks, "tasks per run")->check(CLI::NonNegativeNumber);
  sweep_cmd->add_option("--algos", sweep.algos, "comma-separated subset of tp,tpts,central");
  sweep_cmd->add_option("--window", sweep.window, "window length")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--cap", sweep.cap, "safety cap in timesteps")->check(CLI::PositiveNumber);
  sweep_cmd->add_flag("--free-request", sweep.free_request, "every free agent requests the token each timestep");
  sweep_cmd->add_option("--out", sweep.out_dir, "output directory (default: summary to stdout)");
  sweep_cmd->add_flag("--no-timing", sweep_no_timing, "write 0 for avg_runtime_ms");

  ScenarioOptions check_opts;
  auto* check_cmd = app.add_subcommand("check", "report whether an instance is well-formed");
  add_scenario_flags(*check_cmd, check_opts, false);

  std::string gen_map, gen_frequency = "1", gen_out;
  int gen_n = 0;
  std::uint64_t gen_seed = 1;
  auto* gen_cmd = app.add_subcommand("gen", "write a generated task file");
  gen_cmd->add_option("--map", gen_map, "map file")->required();
  gen_cmd->add_option("--n", gen_n, "number of tasks")->required()->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--frequency", gen_frequency, "tasks per timestep, e.g. 0.2 or 1/3");
  gen_cmd->add_option("--seed", gen_seed, "generator seed");
  gen_cmd->add_option("--out", gen_out, "output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }

  try {
    if (run_cmd->parsed()) {
      apply_scenario_file(run_opts, *run_cmd);
      run_outs.timing = !run_no_timing;
      return cmd_run(run_opts, run_outs, out, err);
    }
    if (sweep_cmd->parsed()) {
      sweep.timing = !sweep_no_timing;
      return cmd_sweep(sweep, out, err);
    }
    if (check_cmd->parsed()) {
      apply_scenario_file(check_opts, *check_cmd);
      const LoadedScenario s = load_scenario(check_opts);
      validate_instance(s.instance, false);
      const auto report = check_well_formed(s.instance);
      print_report(report.well_formed() ? out : err, s.instance.map, report);
      return report.well_formed() ? kOk : kConfigError;
    }
    if (gen_cmd->parsed()) {
      const GridMap map = parse_map(read_file(gen_map));
      const auto tasks = generate_stream(map, gen_n, Frequency::parse(gen_frequency), gen_seed);
      const std::string csv = write_task_csv(map, tasks);
      if (gen_out.empty()) out << csv;
      else write_file(gen_out, csv);
      return kOk;
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const SimulationError& e) {
    err << "simulation failed: " << e.what() << "\n";
    return kSimulationFailure;
  } catch (const PlanningError& e) {
    err << "simulation failed: " << e.what() << "\n";
    return kSimulationFailure;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }
  return kConfigError;
}

}  // namespace mapd::cli
