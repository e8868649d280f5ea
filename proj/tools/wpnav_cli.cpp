// Copyright 2026 The wpnav Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// wpnav command line: gen-maps, run, bench, datagen.
//
// Exit codes: 0 ok, 1 usage or config error, 2 collision or agent failure,
// 3 I/O error, 4 timeout.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "wpnav/dataset.hpp"
#include "wpnav/export.hpp"
#include "wpnav/suite.hpp"

namespace fs = std::filesystem;
using namespace wpnav;

namespace {

enum Exit { kOk = 0, kUsage = 1, kEpisodeFailure = 2, kIo = 3, kTimeout = 4 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string config_path;
  std::vector<std::string> overrides;
  bool show_config = false;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
};

RunConfig load_run_config(const Common& c) {
  RunConfig cfg;
  if (!c.config_path.empty()) cfg = load_config(c.config_path);
  for (const auto& kv : c.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set " + kv + ": expected key=value");
    set_config_value(cfg, detail::trim(kv.substr(0, eq)), detail::trim(kv.substr(eq + 1)));
  }
  cfg.resolve();
  cfg.validate();
  return cfg;
}

std::vector<double> parse_numbers(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (detail::trim(item.substr(used)) != "") throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(flag + ": '" + text + "' is not a comma separated list of numbers");
    }
  }
  return out;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError(dir.string() + ": " + ec.message());
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError(path.string() + ": cannot open for writing");
  os << text;
  if (!os.flush()) throw IoError(path.string() + ": write failed");
}

void prepare(const fs::path& dir, bool force) {
  try {
    prepare_output_dir(dir, force);
  } catch (const DatasetError& e) {
    throw IoError(e.what());
  }
}

// -- gen-maps ---------------------------------------------------------------

int cmd_gen_maps(const RunConfig& cfg, const fs::path& out, bool force) {
  prepare(out, force);
  const auto specs = cfg.map_specs();
  for (std::size_t k = 0; k < specs.size(); ++k) {
    const fs::path path = out / (map_file_name(k) + ".grid");
    const OccupancyGrid grid = generate_map(specs[k]);
    try {
      save_grid(path.string(), grid);
    } catch (const GridError& e) {
      throw IoError(e.what());
    }
    std::printf("%s  %dx%d cells, %.1f%% occupied\n", path.string().c_str(), grid.width(), grid.height(),
                100.0 * grid.occupied_fraction());
  }
  return kOk;
}

// -- run --------------------------------------------------------------------

struct RunArgs {
  std::string map;
  std::string start;
  std::string goal;
  std::string agent;
  std::string out = ".";
};

int cmd_run(const RunConfig& cfg, const RunArgs& a) {
  std::shared_ptr<const OccupancyGrid> grid;
  if (a.map.empty()) {
    grid = std::make_shared<const OccupancyGrid>(generate_map(cfg.map_specs().front()));
  } else {
    try {
      grid = std::make_shared<const OccupancyGrid>(load_grid(a.map));
    } catch (const GridError& e) {
      throw IoError(e.what());
    }
  }
  if (a.start.empty() != a.goal.empty()) throw UsageError("--start and --goal go together");

  EpisodeSpec ep;
  if (a.start.empty()) {
    ep = sample_episodes(grid, 1, cfg.suite.seed, cfg.vehicle, cfg.expert, cfg.scenario()).front();
  } else {
    const auto s = parse_numbers(a.start, "--start");
    const auto g = parse_numbers(a.goal, "--goal");
    if (s.size() != 2 && s.size() != 3) throw UsageError("--start: expected x,y or x,y,phi");
    if (g.size() != 2) throw UsageError("--goal: expected x,y");
    const Vec2 start{s[0], s[1]}, goal{g[0], g[1]};
    for (const auto& [name, p] : {std::pair{"--start", start}, std::pair{"--goal", goal}}) {
      if (!grid->geometry().in_extent(p)) throw UsageError(std::string(name) + ": outside the map");
      if (grid->occupied_at(p)) throw UsageError(std::string(name) + ": inside an obstacle");
    }
    double phi = 0.0;
    if (s.size() == 3) {
      phi = wrap_angle(s[2]);
    } else {
      const EpisodeFields f = EpisodeFields::build(*grid, goal, cfg.expert.goal_clearance);
      phi = feasible_start_heading(start, goal, f, cfg.vehicle, cfg.expert);
    }
    ep = EpisodeSpec{grid, {start.x, start.y, phi}, goal, cfg.vehicle, cfg.expert};
  }

  const std::string agent_name = a.agent.empty() ? cfg.agents.front() : a.agent;
  const AgentEntry entry = make_agent_entry(agent_name, cfg);
  auto agent = entry.make();
  const EpisodeResult r = run_episode(*agent, ep, entry.options);

  const fs::path out(a.out);
  ensure_dir(out);
  const EpisodeFields fields = EpisodeFields::build(*grid, ep.goal, cfg.expert.goal_clearance);
  std::ostringstream csv, svg;
  write_trajectory_csv(csv, r, fields);
  write_trajectory_svg(svg, ep, r, cfg.expert.success_radius);
  write_file(out / "trajectory.csv", csv.str());
  write_file(out / "trajectory.svg", svg.str());

  std::printf("agent %s  start (%.3f, %.3f, %.3f)  goal (%.3f, %.3f)\n", agent_name.c_str(), ep.start.x, ep.start.y,
              ep.start.phi, ep.goal.x, ep.goal.y);
  std::printf("outcome %s after %.2f s, %zu replans, min d_obs %.3f m\n", to_string(r.outcome), r.elapsed,
              r.replans, r.min_obstacle_distance);
  std::printf("wrote %s and %s\n", (out / "trajectory.csv").string().c_str(),
              (out / "trajectory.svg").string().c_str());
  switch (r.outcome) {
    case Outcome::kSuccess: return kOk;
    case Outcome::kTimeout: return kTimeout;
    case Outcome::kCollision:
    case Outcome::kFailure: break;
  }
  std::fprintf(stderr, "wpnav: episode ended in %s\n", to_string(r.outcome));
  return kEpisodeFailure;
}

// -- bench ------------------------------------------------------------------

int cmd_bench(const RunConfig& cfg, const std::string& out, bool force, unsigned jobs) {
  if (!out.empty()) prepare(out, force);
  const auto maps = generate_maps(cfg);
  const auto specs = sample_suite(cfg, maps);
  const SuiteReport report = run_suite(specs, make_agent_entries(cfg), jobs);
  std::ostringstream text, csv;
  write_report_text(text, report.rows);
  write_report_csv(csv, report.rows);
  std::printf("%zu episodes on %zu maps, %s execution\n\n%s", specs.size(), maps.size(), cfg.execution.c_str(),
              text.str().c_str());
  if (!out.empty()) {
    write_file(fs::path(out) / "report.csv", csv.str());
    write_file(fs::path(out) / "report.txt", text.str());
    std::ostringstream conf;
    write_config_text(conf, cfg);
    write_file(fs::path(out) / "config.toml", conf.str());
  }
  return kOk;
}

// -- datagen ----------------------------------------------------------------

int cmd_datagen(const RunConfig& cfg, const fs::path& out, bool force, unsigned jobs) {
  prepare(out, force);
  DatasetManifest m;
  try {
    m = generate_dataset(cfg, out, jobs);
  } catch (const DatasetError& e) {
    throw IoError(e.what());
  }
  std::size_t by_outcome[4] = {};
  for (const auto& e : m.episodes) ++by_outcome[static_cast<int>(e.outcome)];
  std::printf("%zu episodes (%zu success, %zu collision, %zu timeout, %zu failure), %zu samples in %s\n",
              m.episode_count(), by_outcome[0], by_outcome[1], by_outcome[2], by_outcome[3], m.sample_count,
              out.string().c_str());
  if (m.has_collision()) std::fprintf(stderr, "wpnav: warning: the expert collided in at least one episode\n");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Waypoint navigation: expert planner, mapping baselines, benchmark and dataset tools."};
  app.fallthrough();
  app.require_subcommand(0, 1);
  Common common;
  app.add_option("-c,--config", common.config_path, "Config file (TOML-style key = value)");
  app.add_option("--set", common.overrides, "Override one config key, e.g. --set expert.lambda1=0.4 (repeatable)")
      ->type_name("KEY=VALUE");
  app.add_flag("--show-config", common.show_config, "Print the effective config and exit");
  app.add_option("-j,--jobs", common.jobs, "Worker threads (default: all cores)")->check(CLI::PositiveNumber);

  bool force = false;
  std::string out;

  auto* gen = app.add_subcommand("gen-maps", "Write map.count maps as map_0001.grid, ... into --out");
  gen->add_option("-o,--out", out, "Output directory")->required();
  gen->add_flag("-f,--force", force, "Write into a non-empty directory");

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Run one episode and export trajectory.csv and trajectory.svg");
  run->add_option("--map", run_args.map, "Map file (default: first map of the config)");
  run->add_option("--start", run_args.start, "Start pose x,y[,phi] (default: sampled from suite.seed)");
  run->add_option("--goal", run_args.goal, "Goal position x,y");
  run->add_option("--agent", run_args.agent, "expert, mapping-memory or mapping-memoryless (default: first of agents.list)");
  run->add_option("-o,--out", run_args.out, "Output directory")->capture_default_str();

  auto* bench = app.add_subcommand("bench", "Run the configured agents on the episode suite and report");
  bench->add_option("-o,--out", out, "Directory for report.csv and report.txt");
  bench->add_flag("-f,--force", force, "Write into a non-empty directory");

  auto* datagen = app.add_subcommand("datagen", "Generate expert supervision records and a manifest");
  datagen->add_option("-o,--out", out, "Output directory")->required();
  datagen->add_flag("-f,--force", force, "Write into a non-empty directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    const RunConfig cfg = load_run_config(common);
    if (common.show_config) {
      write_config_text(std::cout, cfg);
      return kOk;
    }
    if (app.got_subcommand(gen)) return cmd_gen_maps(cfg, out, force);
    if (app.got_subcommand(run)) return cmd_run(cfg, run_args);
    if (app.got_subcommand(bench)) return cmd_bench(cfg, out, force, common.jobs);
    if (app.got_subcommand(datagen)) return cmd_datagen(cfg, out, force, common.jobs);
    std::cerr << app.help();
    return kUsage;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "wpnav: config error: %s\n", e.what());
    return kUsage;
  } catch (const UsageError& e) {
    std::fprintf(stderr, "wpnav: %s\n", e.what());
    return kUsage;
  } catch (const IoError& e) {
    std::fprintf(stderr, "wpnav: %s\n", e.what());
    return kIo;
  } catch (const fs::filesystem_error& e) {
    std::fprintf(stderr, "wpnav: %s\n", e.what());
    return kIo;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "wpnav: %s\n", e.what());
    return kUsage;
  }
}
