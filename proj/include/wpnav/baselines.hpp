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
#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "wpnav/agent.hpp"
#include "wpnav/observation.hpp"
#include "wpnav/raycast.hpp"

namespace wpnav {

enum class CellBelief : std::uint8_t { kUnknown = 0, kFree = 1, kOccupied = 2 };

/// Three-valued map built from range scans. Occupied is never downgraded.
class BeliefGrid {
 public:
  explicit BeliefGrid(GridGeometry geometry)
      : geometry_(geometry), cells_(geometry.size(), CellBelief::kUnknown) {}

  const GridGeometry& geometry() const { return geometry_; }
  CellBelief at(int i, int j) const { return cells_[geometry_.flat(i, j)]; }
  CellBelief at(CellIndex c) const { return at(c.i, c.j); }

  void mark_free(CellIndex c) {
    auto& b = cells_[geometry_.flat(c.i, c.j)];
    if (b != CellBelief::kOccupied) b = CellBelief::kFree;
  }
  void mark_occupied(CellIndex c) { cells_[geometry_.flat(c.i, c.j)] = CellBelief::kOccupied; }

  std::size_t count(CellBelief b) const {
    return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), b));
  }

  friend bool operator==(const BeliefGrid&, const BeliefGrid&) = default;

 private:
  GridGeometry geometry_;
  std::vector<CellBelief> cells_;
};

/// Integrates one scan taken at pose z: cells before each hit become Free, the
/// hit cell becomes Occupied unless the ray ran out at max_range.
inline void fuse_scan(BeliefGrid& belief, const RobotState& z, const std::vector<double>& ranges,
                      const SensorConfig& cfg) {
  const auto bearings = ray_bearings(z.phi, cfg);
  if (bearings.size() != ranges.size()) throw std::invalid_argument("fuse_scan: ray count mismatch");
  for (std::size_t k = 0; k < ranges.size(); ++k) {
    const double range = ranges[k];
    const Vec2 dir{std::cos(bearings[k]), std::sin(bearings[k])};
    traverse_ray(belief.geometry(), z.position(), dir, range, [&](CellIndex c, double t) {
      if (t < range) {
        belief.mark_free(c);
        return true;
      }
      if (range < cfg.max_range) belief.mark_occupied(c);
      return false;
    });
  }
}

/// Optimistic planning map: Unknown counts as free.
inline OccupancyGrid to_planning_grid(const BeliefGrid& belief) {
  const auto& g = belief.geometry();
  std::vector<std::uint8_t> cells(g.size());
  for (int j = 0; j < g.height; ++j)
    for (int i = 0; i < g.width; ++i) cells[g.flat(i, j)] = belief.at(i, j) == CellBelief::kOccupied ? 1 : 0;
  return OccupancyGrid(g, std::move(cells));
}

/// Plans on a belief with the expert's own waypoint optimizer. A planning
/// failure yields a hold segment (stop and rescan).
inline Segment mapping_agent_step(const BeliefGrid& belief, const RobotState& z, const ControlInput& u, Vec2 goal,
                                  const ExpertConfig& cfg, const VehicleSpec& spec,
                                  const PlanFn& planner = default_planner()) {
  const std::size_t n = control_steps(cfg, spec);
  const EpisodeFields fields = EpisodeFields::build(to_planning_grid(belief), goal, cfg.goal_clearance);
  const auto plan = planner(z, u, fields, cfg, spec);
  const auto* choice = std::get_if<PlanChoice>(&plan);
  if (choice == nullptr) return hold_segment(n);
  return {{choice->trajectory.controls.begin(), choice->trajectory.controls.begin() + static_cast<std::ptrdiff_t>(n)},
          choice->waypoint,
          false};
}

enum class MappingVariant { kMemoryless, kMemory };

/// Geometric mapping baseline driven by ideal range scans of the true world.
class MappingAgent final : public Agent {
 public:
  MappingAgent(MappingVariant variant, SensorConfig sensor, PlanFn planner = default_planner())
      : variant_(variant), sensor_(sensor), planner_(std::move(planner)) {}

  std::string name() const override {
    return variant_ == MappingVariant::kMemory ? "mapping-memory" : "mapping-memoryless";
  }

  void reset(const EpisodeSpec& episode) override { belief_ = std::make_unique<BeliefGrid>(episode.grid->geometry()); }

  Segment act(const AgentContext& ctx) override {
    if (!belief_ || variant_ == MappingVariant::kMemoryless) {
      belief_ = std::make_unique<BeliefGrid>(ctx.episode.grid->geometry());
    }
    fuse_scan(*belief_, ctx.state, raycast_depth(*ctx.episode.grid, ctx.state, sensor_), sensor_);
    return mapping_agent_step(*belief_, ctx.state, ctx.control, ctx.episode.goal, ctx.cfg, ctx.episode.vehicle,
                              planner_);
  }

  const BeliefGrid* belief() const { return belief_.get(); }

 private:
  MappingVariant variant_;
  SensorConfig sensor_;
  PlanFn planner_;
  std::unique_ptr<BeliefGrid> belief_;
};

/// Seam for a learned waypoint model.
class WaypointPredictor {
 public:
  virtual ~WaypointPredictor() = default;
  virtual Waypoint predict(const Observation& observation, Vec2 goal_rel, const ControlInput& control) = 0;
};

/// Fits a spline to the predicted waypoint and returns its first control
/// horizon; an infeasible or non-finite prediction holds still instead.
inline Segment predictor_agent_step(WaypointPredictor& predictor, const Observation& observation,
                                    const RobotState& z, const ControlInput& u, Vec2 goal,
                                    const ExpertConfig& cfg, const VehicleSpec& spec) {
  const std::size_t n = control_steps(cfg, spec);
  const Waypoint w = predictor.predict(observation, world_to_ego(z, goal), u);
  if (!std::isfinite(w.x) || !std::isfinite(w.y) || !std::isfinite(w.theta)) return hold_segment(n);
  const auto fit = fit_spline(w, u, cfg.planning_horizon, spec, cfg.terminal_speed);
  const auto* traj = std::get_if<PlannedTrajectory>(&fit);
  if (traj == nullptr) return hold_segment(n);
  return {{traj->controls.begin(), traj->controls.begin() + static_cast<std::ptrdiff_t>(n)}, w, false};
}

class PredictorAgent final : public Agent {
 public:
  PredictorAgent(std::shared_ptr<WaypointPredictor> predictor, ObservationConfig obs_cfg)
      : predictor_(std::move(predictor)), obs_cfg_(obs_cfg) {}

  std::string name() const override { return "predictor"; }

  Segment act(const AgentContext& ctx) override {
    const Observation obs = render_observation(*ctx.episode.grid, ctx.state, obs_cfg_);
    return predictor_agent_step(*predictor_, obs, ctx.state, ctx.control, ctx.episode.goal, ctx.cfg,
                                ctx.episode.vehicle);
  }

 private:
  std::shared_ptr<WaypointPredictor> predictor_;
  ObservationConfig obs_cfg_;
};

}  // namespace wpnav
