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

#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "wpnav/dynamics.hpp"
#include "wpnav/fields.hpp"

namespace wpnav {

enum class Outcome { kSuccess, kCollision, kTimeout, kFailure };

inline const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::kSuccess: return "success";
    case Outcome::kCollision: return "collision";
    case Outcome::kTimeout: return "timeout";
    case Outcome::kFailure: return "failure";
  }
  return "unknown";
}

/// Obstacle and goal distance fields of one static episode.
struct EpisodeFields {
  ScalarField sdf;
  ScalarField fmm;

  /// The goal field is solved on the grid inflated by `clearance`, so gaps the
  /// planner cannot enter do not shortcut it. If inflation swallows the goal,
  /// the raw grid is used instead.
  static EpisodeFields build(const OccupancyGrid& grid, Vec2 goal, double clearance = 0.0) {
    ScalarField sdf = signed_distance_field(grid);
    if (clearance > 0.0) {
      const OccupancyGrid inflated = inflate(grid, sdf, clearance);
      if (!inflated.occupied_at(goal)) return {std::move(sdf), fmm_distance(inflated, goal)};
    }
    ScalarField fmm = fmm_distance(grid, goal);
    return {std::move(sdf), std::move(fmm)};
  }
  double obstacle_distance(Vec2 p) const { return sample_field(sdf, p); }
  double goal_distance(Vec2 p) const { return sample_field(fmm, p); }
};

/// What actually happened: states[k + 1] = step(states[k], controls[k], dt).
struct ExecutedTrajectory {
  double dt = 0.05;
  std::vector<RobotState> states;
  std::vector<ControlInput> controls;

  double duration() const { return dt * static_cast<double>(controls.size()); }
};

struct Metrics {
  double avg_accel = 0.0;  // m/s^2
  double avg_jerk = 0.0;   // m/s^3
  double path_length = 0.0;
  double min_obstacle_distance = 0.0;
};

struct MetricsError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Smoothness metrics from the executed linear speeds: a_i = (v_{i+1} - v_i) / dt,
/// j_i = (a_{i+1} - a_i) / dt, averaged in absolute value.
inline Metrics compute_metrics(const std::vector<ControlInput>& controls, double dt,
                               double min_obstacle_distance) {
  if (controls.size() < 3) throw MetricsError("compute_metrics: need at least 3 samples");
  std::vector<double> accel;
  accel.reserve(controls.size() - 1);
  for (std::size_t i = 0; i + 1 < controls.size(); ++i) accel.push_back((controls[i + 1].v - controls[i].v) / dt);
  Metrics m;
  double sum_a = 0.0;
  for (double a : accel) sum_a += std::abs(a);
  m.avg_accel = sum_a / static_cast<double>(accel.size());
  double sum_j = 0.0;
  for (std::size_t i = 0; i + 1 < accel.size(); ++i) sum_j += std::abs((accel[i + 1] - accel[i]) / dt);
  m.avg_jerk = sum_j / static_cast<double>(accel.size() - 1);
  for (const auto& u : controls) m.path_length += u.v * dt;
  m.min_obstacle_distance = min_obstacle_distance;
  return m;
}

inline Metrics compute_metrics(const ExecutedTrajectory& traj, const ScalarField& sdf) {
  double min_d = std::numeric_limits<double>::infinity();
  for (const auto& z : traj.states) min_d = std::min(min_d, sample_field(sdf, z.position()));
  return compute_metrics(traj.controls, traj.dt, min_d);
}

struct EpisodeResult {
  Outcome outcome = Outcome::kFailure;
  double time_to_goal = std::numeric_limits<double>::quiet_NaN();  // successes only
  double elapsed = 0.0;
  ExecutedTrajectory trajectory;
  std::optional<Metrics> metrics;  // absent with fewer than 3 executed steps
  double min_obstacle_distance = std::numeric_limits<double>::infinity();
  std::size_t replans = 0;
  std::size_t saturated_steps = 0;  // steps where clamping altered the command
  std::vector<RobotState> replan_poses;
  std::vector<Vec2> waypoints;  // world frame, one per successful replan
};

}  // namespace wpnav
