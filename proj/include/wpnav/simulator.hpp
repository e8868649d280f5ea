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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <limits>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "wpnav/agent.hpp"
#include "wpnav/lqr.hpp"
#include "wpnav/rng.hpp"

namespace wpnav {

/// Actuation disturbance added to every applied command before clamping.
/// Each step draws independent zero-mean Gaussian offsets.
struct DisturbanceModel {
  enum class Mode { kNone, kGaussianControl };
  Mode mode = Mode::kNone;
  double sigma_v = 0.0;
  double sigma_omega = 0.0;
  std::uint64_t seed = 0;

  static DisturbanceModel none() { return {}; }
  static DisturbanceModel gaussian(double sigma_v, double sigma_omega, std::uint64_t seed) {
    return {Mode::kGaussianControl, sigma_v, sigma_omega, seed};
  }
};

struct SimOptions {
  ExecutionMode mode = ExecutionMode::kOpenLoop;
  LqrWeights weights;
  DisturbanceModel disturbance;
};

/// Closed-loop rollout of one episode. Per step: command (nominal or LQR
/// tracked), add disturbance, clamp, integrate, then check collision, success,
/// timeout in that order.
inline EpisodeResult run_episode(Agent& agent, const EpisodeSpec& ep, const SimOptions& opts = {}) {
  if (!ep.grid) throw std::invalid_argument("run_episode: episode has no grid");
  ep.vehicle.validate();
  ep.expert.validate();
  const ExpertConfig cfg = ep.expert.resolved(ep.vehicle);
  const EpisodeFields truth = EpisodeFields::build(*ep.grid, ep.goal, cfg.goal_clearance);
  const std::size_t n_exec = control_steps(cfg, ep.vehicle);
  Rng noise(opts.disturbance.seed);
  const bool disturbed = opts.disturbance.mode == DisturbanceModel::Mode::kGaussianControl;

  agent.reset(ep);
  EpisodeResult r;
  r.trajectory.dt = ep.vehicle.dt;
  r.trajectory.states.push_back(ep.start);
  RobotState z = ep.start;
  ControlInput u_nominal{0.0, 0.0};

  auto terminated = [&]() {
    return detail::check_termination(z, r.trajectory.duration(), ep.goal, truth, cfg, &r.min_obstacle_distance);
  };
  if (auto o = terminated()) {
    detail::finalize(r, *o, truth);
    return r;
  }
  while (true) {
    const AgentContext ctx{ep, cfg, truth, z, u_nominal, r.trajectory.duration()};
    Segment seg = agent.act(ctx);
    if (seg.failed) {
      detail::finalize(r, Outcome::kFailure, truth);
      return r;
    }
    if (seg.controls.size() != n_exec) throw std::logic_error("run_episode: agent returned a wrong-length segment");
    ++r.replans;
    r.replan_poses.push_back(z);
    if (seg.waypoint) r.waypoints.push_back(ego_to_world(z, Vec2{seg.waypoint->x, seg.waypoint->y}));

    PlannedTrajectory reference;
    LqrGains gains;
    if (opts.mode == ExecutionMode::kLqr) {
      reference.dt = ep.vehicle.dt;
      reference.horizon = cfg.control_horizon;
      reference.controls = seg.controls;
      reference = rollout(reference, z);
      gains = solve_tvlqr(reference, opts.weights, ep.vehicle);
    }
    for (std::size_t k = 0; k < n_exec; ++k) {
      ControlInput cmd = opts.mode == ExecutionMode::kLqr ? feedback_control(z, k, reference, gains, ep.vehicle)
                                                          : seg.controls[k];
      if (disturbed) {
        cmd.v += opts.disturbance.sigma_v * noise.normal();
        cmd.omega += opts.disturbance.sigma_omega * noise.normal();
      }
      const ControlInput applied = clamp(cmd, ep.vehicle);
      if (!(applied == cmd)) ++r.saturated_steps;
      z = step(z, applied, ep.vehicle.dt);
      r.trajectory.controls.push_back(applied);
      r.trajectory.states.push_back(z);
      if (auto o = terminated()) {
        detail::finalize(r, *o, truth);
        return r;
      }
    }
    u_nominal = seg.controls.back();
  }
}

// ---------------------------------------------------------------------------
// Benchmark suites

struct AgentEntry {
  std::string name;
  std::function<std::unique_ptr<Agent>()> make;
  SimOptions options;
};

struct MeanStd {
  double mean = std::numeric_limits<double>::quiet_NaN();
  double std = std::numeric_limits<double>::quiet_NaN();
  std::size_t n = 0;

  bool empty() const { return n == 0; }
};

/// Population mean and standard deviation; NaN when empty.
inline MeanStd mean_std(const std::vector<double>& xs) {
  MeanStd m;
  m.n = xs.size();
  if (xs.empty()) return m;
  double s = 0.0;
  for (double x : xs) s += x;
  m.mean = s / static_cast<double>(xs.size());
  double v = 0.0;
  for (double x : xs) v += (x - m.mean) * (x - m.mean);
  m.std = std::sqrt(v / static_cast<double>(xs.size()));
  return m;
}

struct AgentSummary {
  std::string agent;
  double success_pct = 0.0;
  std::size_t collisions = 0;
  MeanStd time;   // successful episodes
  MeanStd accel;  // episodes every agent succeeded at
  MeanStd jerk;
};

struct SuiteReport {
  std::vector<AgentSummary> rows;
  std::vector<std::vector<EpisodeResult>> episodes;  // [agent][episode]
};

/// Aggregates per-agent results. Smoothness columns only use episodes that
/// every agent completed successfully.
inline std::vector<AgentSummary> summarize(const std::vector<std::string>& names,
                                           const std::vector<std::vector<EpisodeResult>>& results) {
  std::vector<AgentSummary> rows;
  if (results.empty()) return rows;
  const std::size_t n_ep = results.front().size();
  std::vector<char> mutual(n_ep, 1);
  for (const auto& per_agent : results)
    for (std::size_t e = 0; e < n_ep; ++e)
      if (per_agent[e].outcome != Outcome::kSuccess || !per_agent[e].metrics) mutual[e] = 0;
  for (std::size_t a = 0; a < results.size(); ++a) {
    AgentSummary row;
    row.agent = names[a];
    std::vector<double> times, accels, jerks;
    std::size_t successes = 0;
    for (std::size_t e = 0; e < n_ep; ++e) {
      const auto& r = results[a][e];
      if (r.outcome == Outcome::kCollision) ++row.collisions;
      if (r.outcome != Outcome::kSuccess) continue;
      ++successes;
      times.push_back(r.time_to_goal);
      if (mutual[e]) {
        accels.push_back(r.metrics->avg_accel);
        jerks.push_back(r.metrics->avg_jerk);
      }
    }
    row.success_pct = n_ep == 0 ? 0.0 : 100.0 * static_cast<double>(successes) / static_cast<double>(n_ep);
    row.time = mean_std(times);
    row.accel = mean_std(accels);
    row.jerk = mean_std(jerks);
    rows.push_back(row);
  }
  return rows;
}

/// Runs every agent on every episode, spreading episodes over `jobs` threads.
inline SuiteReport run_suite(const std::vector<EpisodeSpec>& specs, const std::vector<AgentEntry>& agents,
                             unsigned jobs = 1) {
  if (specs.empty()) throw std::invalid_argument("run_suite: empty episode suite");
  if (agents.empty()) throw std::invalid_argument("run_suite: no agents selected");
  SuiteReport report;
  report.episodes.assign(agents.size(), std::vector<EpisodeResult>(specs.size()));
  const std::size_t total = agents.size() * specs.size();
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t job = next++; job < total; job = next++) {
      const std::size_t a = job / specs.size();
      const std::size_t e = job % specs.size();
      auto agent = agents[a].make();
      report.episodes[a][e] = run_episode(*agent, specs[e], agents[a].options);
    }
  };
  jobs = std::max(1u, jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  std::vector<std::string> names;
  for (const auto& a : agents) names.push_back(a.name);
  report.rows = summarize(names, report.episodes);
  return report;
}

namespace detail {
inline std::string fmt_num(double x, int precision) {
  if (std::isnan(x)) return "NA";
  std::ostringstream os;
  os << std::fixed << std::setprecision(precision) << x;
  return os.str();
}
inline std::string fmt_pm(const MeanStd& m, int precision) {
  if (m.empty()) return "NA";
  return fmt_num(m.mean, precision) + " +- " + fmt_num(m.std, precision);
}
}  // namespace detail

inline void write_report_csv(std::ostream& os, const std::vector<AgentSummary>& rows) {
  os << "agent,success_pct,time_mean,time_std,accel_mean,accel_std,jerk_mean,jerk_std\n";
  for (const auto& r : rows) {
    os << r.agent << ',' << detail::fmt_num(r.success_pct, 2) << ',' << detail::fmt_num(r.time.mean, 4) << ','
       << detail::fmt_num(r.time.std, 4) << ',' << detail::fmt_num(r.accel.mean, 4) << ','
       << detail::fmt_num(r.accel.std, 4) << ',' << detail::fmt_num(r.jerk.mean, 4) << ','
       << detail::fmt_num(r.jerk.std, 4) << '\n';
  }
}

inline void write_report_text(std::ostream& os, const std::vector<AgentSummary>& rows) {
  const std::vector<std::string> header{"Agent", "Success (%)", "Time taken (s)", "Acceleration (m/s^2)",
                                        "Jerk (m/s^3)"};
  std::vector<std::vector<std::string>> table{header};
  for (const auto& r : rows) {
    table.push_back({r.agent, detail::fmt_num(r.success_pct, 2), detail::fmt_pm(r.time, 2),
                     detail::fmt_pm(r.accel, 2), detail::fmt_pm(r.jerk, 2)});
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& row : table)
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  for (std::size_t r = 0; r < table.size(); ++r) {
    for (std::size_t c = 0; c < table[r].size(); ++c) {
      os << std::left << std::setw(static_cast<int>(width[c])) << table[r][c];
      os << (c + 1 < table[r].size() ? "  " : "\n");
    }
    if (r == 0) {
      std::size_t total = 0;
      for (auto w : width) total += w + 2;
      os << std::string(total - 2, '-') << '\n';
    }
  }
}

}  // namespace wpnav
