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
#include <functional>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "wpnav/episode.hpp"
#include "wpnav/spline.hpp"

namespace wpnav {

struct ExpertConfig {
  double lambda1 = 0.3;  // obstacle margin, m
  double lambda2 = 1.0;
  double planning_horizon = 6.0;   // H1, s
  double control_horizon = 1.5;    // H, s
  double r_min = 0.3;
  double r_max = -1.0;             // <= 0 resolves to v_max * planning_horizon
  int n_r = 10;
  int n_bearing = 15;
  int n_theta = 7;
  double fov = kPi / 2.0;
  double heading_window = kPi / 3.0;  // headings span bearing +- this
  double terminal_speed = -1.0;       // < 0 resolves to v_max / 2
  double success_radius = 0.3;
  double max_episode_time = 60.0;
  double robot_radius = 0.0;          // collision when d_obs <= robot_radius
  double goal_clearance = 0.1;        // obstacle inflation for the goal-distance field, m

  /// Copy with vehicle-dependent defaults filled in.
  ExpertConfig resolved(const VehicleSpec& spec) const {
    ExpertConfig c = *this;
    if (c.r_max <= 0.0) c.r_max = spec.v_max * c.planning_horizon;
    if (c.terminal_speed < 0.0) c.terminal_speed = 0.5 * spec.v_max;
    return c;
  }

  void validate() const {
    auto fail = [](const std::string& what) { throw std::invalid_argument("ExpertConfig: " + what); };
    if (!(planning_horizon > 0.0)) fail("planning_horizon must be > 0");
    if (!(control_horizon > 0.0 && control_horizon <= planning_horizon)) {
      fail("control_horizon must lie in (0, planning_horizon]");
    }
    if (!(r_min > 0.0)) fail("r_min must be > 0");
    if (r_max > 0.0 && r_max < r_min) fail("r_max must be >= r_min");
    if (n_r < 1 || n_bearing < 1 || n_theta < 1) fail("sample counts must be >= 1");
    if (!(success_radius > 0.0)) fail("success_radius must be > 0");
    if (!(lambda1 >= 0.0) || !(lambda2 >= 0.0)) fail("lambda1 and lambda2 must be >= 0");
    if (!(max_episode_time > 0.0)) fail("max_episode_time must be > 0");
    if (!(goal_clearance >= 0.0)) fail("goal_clearance must be >= 0");
  }
};

/// Steps executed per replan.
inline std::size_t control_steps(const ExpertConfig& cfg, const VehicleSpec& spec) {
  return static_cast<std::size_t>(std::lround(cfg.control_horizon / spec.dt));
}

/// J_i = max(0, lambda1 - d_obs)^3 + lambda2 * d_goal^2 at a world position.
/// An unreachable goal distance makes the cost infinite.
inline double stage_cost(Vec2 p, const EpisodeFields& fields, const ExpertConfig& cfg) {
  const double goal = fields.goal_distance(p);
  if (std::isinf(goal)) return kUnreachable;
  const double gap = std::max(0.0, cfg.lambda1 - fields.obstacle_distance(p));
  return gap * gap * gap + cfg.lambda2 * goal * goal;
}

/// Sum of stage costs over every sample of an ego-frame trajectory placed at `origin`.
inline double trajectory_cost(const PlannedTrajectory& traj, const RobotState& origin,
                              const EpisodeFields& fields, const ExpertConfig& cfg) {
  double total = 0.0;
  for (const auto& z : traj.states) {
    const double c = stage_cost(ego_to_world(origin, Vec2{z.x, z.y}), fields, cfg);
    if (std::isinf(c)) return kUnreachable;
    total += c;
  }
  return total;
}

namespace detail {
inline double spread(double lo, double hi, int n, int k) {
  return n == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * k / double(n - 1);
}
}  // namespace detail

/// Candidate waypoints over the ground-projected field of view, radius-major,
/// then bearing, then heading. A single radius sits at r_min; single bearing or
/// heading samples sit at the center of their range.
inline std::vector<Waypoint> sample_waypoints(const ExpertConfig& cfg) {
  const double r_max = cfg.r_max > 0.0 ? cfg.r_max : cfg.r_min;
  std::vector<Waypoint> out;
  out.reserve(static_cast<std::size_t>(cfg.n_r * cfg.n_bearing * cfg.n_theta));
  for (int ir = 0; ir < cfg.n_r; ++ir) {
    const double r = cfg.n_r == 1 ? cfg.r_min : detail::spread(cfg.r_min, r_max, cfg.n_r, ir);
    for (int ib = 0; ib < cfg.n_bearing; ++ib) {
      const double b = detail::spread(-0.5 * cfg.fov, 0.5 * cfg.fov, cfg.n_bearing, ib);
      for (int it = 0; it < cfg.n_theta; ++it) {
        const double th = detail::spread(b - cfg.heading_window, b + cfg.heading_window, cfg.n_theta, it);
        out.push_back({r * std::cos(b), r * std::sin(b), th});
      }
    }
  }
  return out;
}

struct PlanChoice {
  Waypoint waypoint;
  PlannedTrajectory trajectory;  // ego frame
  double cost = 0.0;
  std::size_t candidate = 0;     // index into sample_waypoints()
};

struct NoFeasibleWaypoint {
  std::size_t candidates = 0;
};

using PlanResult = std::variant<PlanChoice, NoFeasibleWaypoint>;

/// Sampling-based waypoint optimization: fit every candidate over the planning
/// horizon, drop infeasible or infinite-cost fits, keep the cheapest (first
/// candidate wins ties). `cfg` must be resolved.
inline PlanResult plan_waypoint(const RobotState& z, const ControlInput& u, const EpisodeFields& fields,
                                const ExpertConfig& cfg, const VehicleSpec& spec) {
  const auto candidates = sample_waypoints(cfg);
  std::optional<PlanChoice> best;
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    auto fit = fit_spline(candidates[k], u, cfg.planning_horizon, spec, cfg.terminal_speed);
    auto* traj = std::get_if<PlannedTrajectory>(&fit);
    if (traj == nullptr) continue;
    const double cost = trajectory_cost(*traj, z, fields, cfg);
    if (std::isinf(cost)) continue;
    if (!best || cost < best->cost) best = PlanChoice{candidates[k], std::move(*traj), cost, k};
  }
  if (!best) return NoFeasibleWaypoint{candidates.size()};
  return std::move(*best);
}

/// Planner signature shared by the expert and the mapping agents.
using PlanFn = std::function<PlanResult(const RobotState&, const ControlInput&, const EpisodeFields&,
                                        const ExpertConfig&, const VehicleSpec&)>;

inline PlanFn default_planner() { return &plan_waypoint; }

struct EpisodeSpec {
  std::shared_ptr<const OccupancyGrid> grid;
  RobotState start;
  Vec2 goal;
  VehicleSpec vehicle;
  ExpertConfig expert;
};

/// One supervision record, captured before the plan is executed.
struct TrainingSample {
  std::size_t step = 0;
  RobotState pose;                          // world frame at replan time
  Vec2 goal_rel;                            // goal in the ego frame of `pose`
  ControlInput control;                     // current control u_t
  Waypoint waypoint;                        // optimal waypoint
  std::vector<ControlInput> control_seq;    // first H / dt planned controls
  double planned_cost = 0.0;
};

struct ExpertEpisode {
  EpisodeResult result;
  std::vector<TrainingSample> samples;
};

namespace detail {

/// Termination at the current state, checked in the order collision, success, timeout.
inline std::optional<Outcome> check_termination(const RobotState& z, double t, Vec2 goal,
                                                const EpisodeFields& fields, const ExpertConfig& cfg,
                                                double* min_obstacle_distance) {
  const double d_obs = fields.obstacle_distance(z.position());
  *min_obstacle_distance = std::min(*min_obstacle_distance, d_obs);
  if (d_obs <= cfg.robot_radius) return Outcome::kCollision;
  if ((z.position() - goal).norm() <= cfg.success_radius) return Outcome::kSuccess;
  if (t >= cfg.max_episode_time - 1e-9) return Outcome::kTimeout;
  return std::nullopt;
}

inline void finalize(EpisodeResult& r, Outcome o, const EpisodeFields& fields) {
  r.outcome = o;
  r.elapsed = r.trajectory.duration();
  if (o == Outcome::kSuccess) r.time_to_goal = r.elapsed;
  if (r.trajectory.controls.size() >= 3) r.metrics = compute_metrics(r.trajectory, fields.sdf);
}

}  // namespace detail

/// Receding-horizon expert on the true map: plan over H1, record a sample,
/// execute the first H seconds open loop, repeat.
inline ExpertEpisode run_expert_episode(const EpisodeSpec& ep, const PlanFn& planner = default_planner()) {
  if (!ep.grid) throw std::invalid_argument("run_expert_episode: episode has no grid");
  ep.vehicle.validate();
  ep.expert.validate();
  const ExpertConfig cfg = ep.expert.resolved(ep.vehicle);
  const EpisodeFields fields = EpisodeFields::build(*ep.grid, ep.goal, cfg.goal_clearance);
  const std::size_t n_exec = control_steps(cfg, ep.vehicle);

  ExpertEpisode out;
  EpisodeResult& r = out.result;
  r.trajectory.dt = ep.vehicle.dt;
  r.trajectory.states.push_back(ep.start);
  RobotState z = ep.start;
  ControlInput u{0.0, 0.0};

  auto terminated = [&]() {
    return detail::check_termination(z, r.trajectory.duration(), ep.goal, fields, cfg,
                                     &r.min_obstacle_distance);
  };
  if (auto o = terminated()) {
    detail::finalize(r, *o, fields);
    return out;
  }
  while (true) {
    auto plan = planner(z, u, fields, cfg, ep.vehicle);
    auto* choice = std::get_if<PlanChoice>(&plan);
    if (choice == nullptr) {
      detail::finalize(r, Outcome::kFailure, fields);
      return out;
    }
    ++r.replans;
    r.replan_poses.push_back(z);
    r.waypoints.push_back(ego_to_world(z, Vec2{choice->waypoint.x, choice->waypoint.y}));
    const auto& planned = choice->trajectory.controls;
    TrainingSample sample;
    sample.step = out.samples.size();
    sample.pose = z;
    sample.goal_rel = world_to_ego(z, ep.goal);
    sample.control = u;
    sample.waypoint = choice->waypoint;
    sample.control_seq.assign(planned.begin(), planned.begin() + static_cast<std::ptrdiff_t>(n_exec));
    sample.planned_cost = choice->cost;
    out.samples.push_back(std::move(sample));

    for (std::size_t k = 0; k < n_exec; ++k) {
      const ControlInput applied = clamp(planned[k], ep.vehicle);
      if (!(applied == planned[k])) ++r.saturated_steps;
      z = step(z, applied, ep.vehicle.dt);
      r.trajectory.controls.push_back(applied);
      r.trajectory.states.push_back(z);
      if (auto o = terminated()) {
        detail::finalize(r, *o, fields);
        return out;
      }
    }
    u = planned[n_exec - 1];
  }
}

}  // namespace wpnav
