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

#pragma once

#include <openssl/evp.h>

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "wpnav/config.hpp"
#include "wpnav/expert.hpp"
#include "wpnav/observation.hpp"
#include "wpnav/scenario.hpp"

namespace wpnav {

namespace fs = std::filesystem;

struct DatasetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kDatasetFormatVersion = "1";

/// Row-major bitmap, eight cells per byte, first cell in the most significant bit.
inline std::vector<std::uint8_t> pack_bits(const std::vector<std::uint8_t>& cells) {
  std::vector<std::uint8_t> out((cells.size() + 7) / 8, 0);
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (cells[k]) out[k / 8] |= static_cast<std::uint8_t>(0x80u >> (k % 8));
  }
  return out;
}

inline std::vector<std::uint8_t> unpack_bits(const std::vector<std::uint8_t>& bytes, std::size_t n) {
  if (bytes.size() * 8 < n) throw DatasetError("bitmap too short");
  std::vector<std::uint8_t> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = (bytes[k / 8] >> (7 - k % 8)) & 1u;
  return out;
}

inline std::string base64_encode(const std::vector<std::uint8_t>& bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), bytes.data(),
                                static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

inline std::vector<std::uint8_t> base64_decode(const std::string& text) {
  if (text.size() % 4 != 0) throw DatasetError("base64 length not a multiple of 4");
  std::vector<std::uint8_t> out(3 * text.size() / 4);
  const int n = EVP_DecodeBlock(out.data(), reinterpret_cast<const unsigned char*>(text.data()),
                                static_cast<int>(text.size()));
  if (n < 0) throw DatasetError("invalid base64");
  std::size_t pad = 0;
  if (!text.empty() && text.back() == '=') ++pad;
  if (text.size() > 1 && text[text.size() - 2] == '=') ++pad;
  out.resize(static_cast<std::size_t>(n) - pad);
  return out;
}

/// One replanning step of an expert episode with its observation attached.
struct DatasetRecord {
  std::size_t episode = 0;
  TrainingSample sample;
  Observation observation;
};

namespace detail {

inline void put_num(std::string& s, double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  s += buf;
}

inline void put_pair(std::string& s, double a, double b) {
  s += '[';
  put_num(s, a);
  s += ',';
  put_num(s, b);
  s += ']';
}

}  // namespace detail

/// One JSON Lines record. Doubles are printed with 17 significant digits so
/// they parse back to the same bits.
inline std::string format_record(const DatasetRecord& r) {
  const auto& s = r.sample;
  std::string out = "{\"episode\":" + std::to_string(r.episode) + ",\"step\":" + std::to_string(s.step);
  out += ",\"goal_rel\":";
  detail::put_pair(out, s.goal_rel.x, s.goal_rel.y);
  out += ",\"control\":";
  detail::put_pair(out, s.control.v, s.control.omega);
  out += ",\"waypoint\":[";
  detail::put_num(out, s.waypoint.x);
  out += ',';
  detail::put_num(out, s.waypoint.y);
  out += ',';
  detail::put_num(out, s.waypoint.theta);
  out += "],\"control_seq\":[";
  for (std::size_t k = 0; k < s.control_seq.size(); ++k) {
    if (k) out += ',';
    detail::put_pair(out, s.control_seq[k].v, s.control_seq[k].omega);
  }
  out += "],\"planned_cost\":";
  detail::put_num(out, s.planned_cost);
  out += ",\"obs_patch\":\"" + base64_encode(pack_bits(r.observation.patch)) + "\",\"obs_ranges\":[";
  for (std::size_t k = 0; k < r.observation.ranges.size(); ++k) {
    if (k) out += ',';
    detail::put_num(out, r.observation.ranges[k]);
  }
  out += "]}";
  return out;
}

/// Inverse of format_record. The pose is not part of the record; it lives in
/// the manifest.
inline DatasetRecord parse_record(const std::string& line, int patch_size) {
  const auto j = nlohmann::json::parse(line);
  DatasetRecord r;
  r.episode = j.at("episode").get<std::size_t>();
  auto& s = r.sample;
  s.step = j.at("step").get<std::size_t>();
  s.goal_rel = {j.at("goal_rel").at(0).get<double>(), j.at("goal_rel").at(1).get<double>()};
  s.control = {j.at("control").at(0).get<double>(), j.at("control").at(1).get<double>()};
  const auto& w = j.at("waypoint");
  s.waypoint = {w.at(0).get<double>(), w.at(1).get<double>(), w.at(2).get<double>()};
  for (const auto& u : j.at("control_seq")) s.control_seq.push_back({u.at(0).get<double>(), u.at(1).get<double>()});
  s.planned_cost = j.at("planned_cost").get<double>();
  r.observation.patch_size = patch_size;
  const std::size_t cells = static_cast<std::size_t>(patch_size) * static_cast<std::size_t>(patch_size);
  r.observation.patch = unpack_bits(base64_decode(j.at("obs_patch").get<std::string>()), cells);
  r.observation.ranges = j.at("obs_ranges").get<std::vector<double>>();
  return r;
}

struct DatasetEpisode {
  std::size_t id = 0;
  std::size_t map = 0;  // index into the manifest's map list
  RobotState start;
  Vec2 goal;
  Outcome outcome = Outcome::kFailure;
  std::size_t replans = 0;
  std::size_t samples = 0;
  std::vector<RobotState> replan_poses;
};

struct DatasetManifest {
  std::string format_version = kDatasetFormatVersion;
  RunConfig config;
  std::vector<std::string> map_files;
  std::vector<std::string> sample_files;
  std::vector<DatasetEpisode> episodes;
  std::size_t sample_count = 0;

  std::size_t episode_count() const { return episodes.size(); }
  bool has_collision() const {
    return std::any_of(episodes.begin(), episodes.end(),
                       [](const DatasetEpisode& e) { return e.outcome == Outcome::kCollision; });
  }
};

inline Outcome parse_outcome(const std::string& s) {
  for (Outcome o : {Outcome::kSuccess, Outcome::kCollision, Outcome::kTimeout, Outcome::kFailure}) {
    if (s == to_string(o)) return o;
  }
  throw DatasetError("unknown outcome '" + s + "'");
}

inline nlohmann::ordered_json manifest_to_json(const DatasetManifest& m) {
  nlohmann::ordered_json j;
  j["format_version"] = m.format_version;
  j["config"] = config_to_json(m.config);
  j["maps"] = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < m.map_files.size(); ++k) {
    j["maps"].push_back({{"grid", m.map_files[k]}, {"samples", m.sample_files[k]}});
  }
  j["episode_count"] = m.episode_count();
  j["sample_count"] = m.sample_count;
  j["has_collision"] = m.has_collision();
  j["episodes"] = nlohmann::ordered_json::array();
  for (const auto& e : m.episodes) {
    nlohmann::ordered_json je;
    je["id"] = e.id;
    je["map"] = e.map;
    je["start"] = {e.start.x, e.start.y, e.start.phi};
    je["goal"] = {e.goal.x, e.goal.y};
    je["outcome"] = to_string(e.outcome);
    je["replans"] = e.replans;
    je["samples"] = e.samples;
    je["replan_poses"] = nlohmann::ordered_json::array();
    for (const auto& p : e.replan_poses) je["replan_poses"].push_back({p.x, p.y, p.phi});
    j["episodes"].push_back(std::move(je));
  }
  return j;
}

inline DatasetManifest manifest_from_json(const nlohmann::ordered_json& j) {
  DatasetManifest m;
  m.format_version = j.at("format_version").get<std::string>();
  if (m.format_version != kDatasetFormatVersion) {
    throw DatasetError("unsupported dataset format_version '" + m.format_version + "'");
  }
  m.config = config_from_json(j.at("config"));
  for (const auto& jm : j.at("maps")) {
    m.map_files.push_back(jm.at("grid").get<std::string>());
    m.sample_files.push_back(jm.at("samples").get<std::string>());
  }
  for (const auto& je : j.at("episodes")) {
    DatasetEpisode e;
    e.id = je.at("id").get<std::size_t>();
    e.map = je.at("map").get<std::size_t>();
    const auto& s = je.at("start");
    e.start = {s.at(0).get<double>(), s.at(1).get<double>(), s.at(2).get<double>()};
    e.goal = {je.at("goal").at(0).get<double>(), je.at("goal").at(1).get<double>()};
    e.outcome = parse_outcome(je.at("outcome").get<std::string>());
    e.replans = je.at("replans").get<std::size_t>();
    e.samples = je.at("samples").get<std::size_t>();
    for (const auto& p : je.at("replan_poses")) {
      e.replan_poses.push_back({p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>()});
    }
    m.episodes.push_back(std::move(e));
  }
  m.sample_count = j.at("sample_count").get<std::size_t>();
  return m;
}

inline DatasetManifest load_manifest(const fs::path& dir) {
  const fs::path path = dir / "manifest.json";
  std::ifstream is(path);
  if (!is) throw DatasetError(path.string() + ": cannot open manifest");
  try {
    return manifest_from_json(nlohmann::ordered_json::parse(is));
  } catch (const nlohmann::json::exception& e) {
    throw DatasetError(path.string() + ": " + e.what());
  }
}

inline std::string map_file_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "map_%04zu", index + 1);
  return buf;
}

/// Refuses a non-empty directory unless `force`; creates it otherwise.
inline void prepare_output_dir(const fs::path& dir, bool force) {
  std::error_code ec;
  if (fs::exists(dir, ec)) {
    if (!fs::is_directory(dir, ec)) throw DatasetError(dir.string() + ": not a directory");
    if (!fs::is_empty(dir, ec) && !force) {
      throw DatasetError(dir.string() + ": output directory is not empty (use --force to overwrite)");
    }
  }
  fs::create_directories(dir, ec);
  if (ec) throw DatasetError(dir.string() + ": " + ec.message());
}

namespace detail {

struct EpisodeJob {
  std::size_t map = 0;
  EpisodeSpec spec;
};

struct EpisodeOutput {
  ExpertEpisode run;
  std::vector<Observation> observations;
};

template <typename Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn&& fn) {
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (jobs == 1) {
    for (std::size_t k = 0; k < n; ++k) fn(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < jobs; ++t) {
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < n; k = next++) {
        try {
          fn(k);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

inline void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DatasetError(path.string() + ": cannot open for writing");
  os << text;
  os.flush();
  if (!os) throw DatasetError(path.string() + ": write failed");
}

}  // namespace detail

/// Runs the expert on the given episodes and writes maps, per-map JSONL
/// records and the manifest (last) into `dir`.
inline DatasetManifest write_dataset(const RunConfig& config,
                                     const std::vector<std::shared_ptr<const OccupancyGrid>>& maps,
                                     const std::vector<detail::EpisodeJob>& jobs_in, const fs::path& dir,
                                     unsigned jobs = 1) {
  std::vector<detail::EpisodeOutput> outputs(jobs_in.size());
  detail::parallel_for(jobs_in.size(), jobs, [&](std::size_t k) {
    auto& out = outputs[k];
    out.run = run_expert_episode(jobs_in[k].spec);
    const Outcome o = out.run.result.outcome;
    if (o == Outcome::kSuccess || o == Outcome::kCollision) {
      for (const auto& s : out.run.samples) {
        out.observations.push_back(render_observation(*maps[jobs_in[k].map], s.pose, config.observation));
      }
    }
  });

  DatasetManifest m;
  m.config = config;
  fs::create_directories(dir / "maps");
  fs::create_directories(dir / "data");
  std::vector<std::string> shards(maps.size());
  for (std::size_t k = 0; k < jobs_in.size(); ++k) {
    const auto& r = outputs[k].run;
    DatasetEpisode e;
    e.id = k;
    e.map = jobs_in[k].map;
    e.start = jobs_in[k].spec.start;
    e.goal = jobs_in[k].spec.goal;
    e.outcome = r.result.outcome;
    e.replans = r.result.replans;
    e.replan_poses = r.result.replan_poses;
    for (std::size_t s = 0; s < outputs[k].observations.size(); ++s) {
      shards[e.map] += format_record({k, r.samples[s], outputs[k].observations[s]});
      shards[e.map] += '\n';
      ++e.samples;
    }
    m.sample_count += e.samples;
    m.episodes.push_back(std::move(e));
  }
  for (std::size_t i = 0; i < maps.size(); ++i) {
    const std::string stem = map_file_name(i);
    m.map_files.push_back("maps/" + stem + ".grid");
    m.sample_files.push_back("data/" + stem + ".jsonl");
    try {
      save_grid((dir / m.map_files.back()).string(), *maps[i]);
    } catch (const GridError& e) {
      throw DatasetError(e.what());
    }
    detail::write_text(dir / m.sample_files.back(), shards[i]);
  }
  detail::write_text(dir / "manifest.json", manifest_to_json(m).dump(1) + "\n");
  return m;
}

inline std::vector<std::shared_ptr<const OccupancyGrid>> generate_maps(const RunConfig& config) {
  std::vector<std::shared_ptr<const OccupancyGrid>> maps;
  for (const auto& spec : config.map_specs()) maps.push_back(std::make_shared<const OccupancyGrid>(generate_map(spec)));
  return maps;
}

/// Full pipeline: maps from the config's map specs, `suite.episodes` sampled
/// episodes per map (seed suite.seed + map index), expert runs, files.
inline DatasetManifest generate_dataset(RunConfig config, const fs::path& dir, unsigned jobs = 1) {
  config.resolve();
  config.validate();
  const auto maps = generate_maps(config);
  std::vector<detail::EpisodeJob> episode_jobs;
  for (std::size_t i = 0; i < maps.size(); ++i) {
    const auto eps = sample_episodes(maps[i], static_cast<std::size_t>(config.suite.episodes),
                                     config.suite.seed + i, config.vehicle, config.expert, config.scenario());
    for (const auto& e : eps) episode_jobs.push_back({i, e});
  }
  return write_dataset(config, maps, episode_jobs, dir, jobs);
}

/// Rebuilds a dataset from a manifest alone: maps from the stored config, the
/// episodes from the stored start/goal pairs.
inline DatasetManifest regenerate_dataset(const DatasetManifest& manifest, const fs::path& dir, unsigned jobs = 1) {
  const auto maps = generate_maps(manifest.config);
  std::vector<detail::EpisodeJob> episode_jobs;
  for (const auto& e : manifest.episodes) {
    if (e.map >= maps.size()) throw DatasetError("manifest episode refers to unknown map");
    episode_jobs.push_back({e.map, {maps[e.map], e.start, e.goal, manifest.config.vehicle, manifest.config.expert}});
  }
  return write_dataset(manifest.config, maps, episode_jobs, dir, jobs);
}

struct VerifyReport {
  std::size_t records = 0;
  double max_cost_error = 0.0;
  double max_frame_error = 0.0;
  std::size_t control_seq_mismatches = 0;
  std::size_t refit_failures = 0;
  bool counts_consistent = true;

  bool ok(double tol = 1e-9) const {
    return records > 0 && max_cost_error <= tol && max_frame_error <= tol && control_seq_mismatches == 0 &&
           refit_failures == 0 && counts_consistent;
  }
};

/// Re-fits every stored waypoint from the stored control, re-costs it and
/// compares against the stored labels.
inline VerifyReport verify_dataset(const fs::path& dir) {
  const DatasetManifest m = load_manifest(dir);
  const RunConfig& c = m.config;
  VerifyReport rep;
  std::vector<std::shared_ptr<const OccupancyGrid>> grids;
  for (const auto& f : m.map_files) grids.push_back(std::make_shared<const OccupancyGrid>(load_grid((dir / f).string())));
  const std::size_t n_exec = control_steps(c.expert, c.vehicle);
  std::vector<std::size_t> seen(m.episodes.size(), 0);

  for (std::size_t i = 0; i < m.sample_files.size(); ++i) {
    const fs::path path = dir / m.sample_files[i];
    std::ifstream is(path);
    if (!is) throw DatasetError(path.string() + ": cannot open");
    std::string line;
    std::size_t cached = static_cast<std::size_t>(-1);
    std::optional<EpisodeFields> fields;
    while (std::getline(is, line)) {
      const DatasetRecord r = parse_record(line, c.observation.patch_size);
      if (r.episode >= m.episodes.size()) throw DatasetError(path.string() + ": unknown episode id");
      const auto& e = m.episodes[r.episode];
      if (r.sample.step >= e.replan_poses.size()) throw DatasetError(path.string() + ": step out of range");
      if (cached != r.episode) {
        fields = EpisodeFields::build(*grids[e.map], e.goal, c.expert.goal_clearance);
        cached = r.episode;
      }
      ++rep.records;
      ++seen[r.episode];
      const RobotState& pose = e.replan_poses[r.sample.step];
      rep.max_frame_error = std::max(rep.max_frame_error, (ego_to_world(pose, r.sample.goal_rel) - e.goal).norm());
      const FitResult fit = fit_spline(r.sample.waypoint, r.sample.control, c.expert.planning_horizon, c.vehicle,
                                       c.expert.terminal_speed);
      const auto* traj = std::get_if<PlannedTrajectory>(&fit);
      if (traj == nullptr) {
        ++rep.refit_failures;
        continue;
      }
      const double cost = trajectory_cost(*traj, pose, *fields, c.expert);
      rep.max_cost_error = std::max(rep.max_cost_error, std::abs(cost - r.sample.planned_cost));
      bool same = r.sample.control_seq.size() == n_exec;
      for (std::size_t k = 0; same && k < n_exec; ++k) same = r.sample.control_seq[k] == traj->controls[k];
      if (!same) ++rep.control_seq_mismatches;
    }
  }
  std::size_t total = 0;
  for (std::size_t k = 0; k < m.episodes.size(); ++k) {
    const auto& e = m.episodes[k];
    const bool emits = e.outcome == Outcome::kSuccess || e.outcome == Outcome::kCollision;
    if (seen[k] != e.samples || e.samples != (emits ? e.replans : 0)) rep.counts_consistent = false;
    total += seen[k];
  }
  if (total != m.sample_count) rep.counts_consistent = false;
  return rep;
}

}  // namespace wpnav
