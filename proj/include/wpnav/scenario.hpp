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
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

#include "wpnav/expert.hpp"
#include "wpnav/rng.hpp"

namespace wpnav {

struct ScenarioConfig {
  double min_goal_distance = 2.0;   // FMM distance between start and goal, m
  int max_attempts = 20000;
};

/// Heading that points down the goal-distance field at p (steepest descent),
/// falling back to the straight line to the goal where the field is undefined.
inline double descent_heading(const ScalarField& fmm, Vec2 p, Vec2 goal) {
  const double h = fmm.geometry.resolution;
  const double gx = sample_field(fmm, {p.x + h, p.y}) - sample_field(fmm, {p.x - h, p.y});
  const double gy = sample_field(fmm, {p.x, p.y + h}) - sample_field(fmm, {p.x, p.y - h});
  if (std::isfinite(gx) && std::isfinite(gy) && (gx != 0.0 || gy != 0.0)) return std::atan2(-gy, -gx);
  return std::atan2(goal.y - p.y, goal.x - p.x);
}

/// Start heading for an episode that begins at rest. From rest only nearly
/// straight splines are feasible, so the heading is swept outward from the
/// descent direction in 15 degree steps until the expert finds a plan.
inline double feasible_start_heading(Vec2 start, Vec2 goal, const EpisodeFields& fields,
                                     const VehicleSpec& vehicle, const ExpertConfig& expert) {
  const ExpertConfig cfg = expert.resolved(vehicle);
  const double base = descent_heading(fields.fmm, start, goal);
  for (int k = 0; k <= 12; ++k) {
    for (int sign : {1, -1}) {
      if (k == 0 && sign < 0) continue;
      const double phi = wrap_angle(base + sign * k * kPi / 12.0);
      const auto plan = plan_waypoint({start.x, start.y, phi}, {0.0, 0.0}, fields, cfg, vehicle);
      if (std::holds_alternative<PlanChoice>(plan)) return phi;
    }
  }
  return wrap_angle(base);
}

/// Start/goal pairs drawn uniformly over free cells. Both endpoints must be
/// free on the grid inflated by lambda1, and the goal must be reachable from
/// the start on that inflated grid.
inline std::vector<EpisodeSpec> sample_episodes(std::shared_ptr<const OccupancyGrid> grid, std::size_t count,
                                                std::uint64_t seed, const VehicleSpec& vehicle,
                                                const ExpertConfig& expert, const ScenarioConfig& sc = {}) {
  const ScalarField sdf = signed_distance_field(*grid);
  const OccupancyGrid inflated = inflate(*grid, sdf, expert.lambda1);
  std::vector<CellIndex> free_cells;
  for (int j = 0; j < inflated.height(); ++j)
    for (int i = 0; i < inflated.width(); ++i)
      if (!inflated.occupied(i, j)) free_cells.push_back({i, j});
  if (free_cells.empty()) throw std::runtime_error("sample_episodes: no free space after inflation");

  Rng rng(seed);
  std::vector<EpisodeSpec> out;
  const auto& g = grid->geometry();
  for (int attempt = 0; attempt < sc.max_attempts && out.size() < count; ++attempt) {
    const CellIndex gc = free_cells[rng.index(free_cells.size())];
    const CellIndex sc_cell = free_cells[rng.index(free_cells.size())];
    const Vec2 goal = g.center(gc.i, gc.j);
    const Vec2 start = g.center(sc_cell.i, sc_cell.j);
    const ScalarField reach = fmm_distance(inflated, goal);
    const double d = reach.at(sc_cell);
    if (!std::isfinite(d) || d < sc.min_goal_distance) continue;
    const EpisodeFields fields = EpisodeFields::build(*grid, goal, expert.goal_clearance);
    const double phi = feasible_start_heading(start, goal, fields, vehicle, expert);
    EpisodeSpec ep{grid, {start.x, start.y, phi}, goal, vehicle, expert};
    out.push_back(std::move(ep));
  }
  if (out.size() < count) throw std::runtime_error("sample_episodes: could not find enough solvable episodes");
  return out;
}

}  // namespace wpnav
