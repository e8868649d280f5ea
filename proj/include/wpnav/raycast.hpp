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
#include <vector>

#include "wpnav/grid.hpp"

namespace wpnav {

struct SensorConfig {
  double fov = kPi / 2.0;  // rad
  int n_rays = 128;
  double max_range = 3.0;  // m
};

/// Amanatides-Woo traversal of the cells pierced by the ray p + t*dir
/// (|dir| = 1), t in [0, max_t]. `visit(cell, t_enter)` is called in order and
/// returns false to stop. Returns the parameter at which the ray left the grid
/// extent, or +inf if the traversal stopped or reached max_t inside the grid.
template <typename Visitor>
double traverse_ray(const GridGeometry& g, Vec2 p, Vec2 dir, double max_t, Visitor&& visit) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  const auto start = g.cell_of(p);
  if (!start) return 0.0;
  int i = start->i;
  int j = start->j;
  const double r = g.resolution;
  const int step_i = dir.x > 0 ? 1 : (dir.x < 0 ? -1 : 0);
  const int step_j = dir.y > 0 ? 1 : (dir.y < 0 ? -1 : 0);
  auto boundary = [&](int idx, int s, double origin, double pc, double d) {
    if (s == 0) return inf;
    const double edge = origin + (idx + 0.5 * s) * r;
    return (edge - pc) / d;
  };
  double t_max_x = boundary(i, step_i, g.origin.x, p.x, dir.x);
  double t_max_y = boundary(j, step_j, g.origin.y, p.y, dir.y);
  const double t_dx = step_i != 0 ? r / std::abs(dir.x) : inf;
  const double t_dy = step_j != 0 ? r / std::abs(dir.y) : inf;
  double t = 0.0;
  while (t <= max_t) {
    if (!visit(CellIndex{i, j}, t)) return inf;
    if (t_max_x < t_max_y) {
      t = t_max_x;
      t_max_x += t_dx;
      i += step_i;
    } else {
      t = t_max_y;
      t_max_y += t_dy;
      j += step_j;
    }
    if (!g.contains(i, j)) return t <= max_t ? t : inf;
  }
  return inf;
}

inline std::vector<double> ray_bearings(double heading, const SensorConfig& cfg) {
  std::vector<double> out(static_cast<std::size_t>(cfg.n_rays));
  for (int k = 0; k < cfg.n_rays; ++k) {
    const double offset =
        cfg.n_rays == 1 ? 0.0 : -0.5 * cfg.fov + cfg.fov * k / double(cfg.n_rays - 1);
    out[static_cast<std::size_t>(k)] = heading + offset;
  }
  return out;
}

/// Distance along one ray to the first occupied cell (or the grid boundary),
/// clamped to max_range.
inline double cast_ray(const OccupancyGrid& grid, Vec2 p, double bearing, double max_range) {
  const Vec2 dir{std::cos(bearing), std::sin(bearing)};
  double hit = max_range;
  const double exit_t =
      traverse_ray(grid.geometry(), p, dir, max_range, [&](CellIndex c, double t) {
        if (grid.occupied(c)) {
          hit = std::min(t, max_range);
          return false;
        }
        return true;
      });
  return std::min(hit, exit_t);
}

/// Planar range scan: bearings evenly spaced from heading - fov/2 to heading + fov/2.
inline std::vector<double> raycast_depth(const OccupancyGrid& grid, const RobotState& z,
                                         const SensorConfig& cfg) {
  std::vector<double> ranges;
  ranges.reserve(static_cast<std::size_t>(cfg.n_rays));
  for (double b : ray_bearings(z.phi, cfg)) ranges.push_back(cast_ray(grid, z.position(), b, cfg.max_range));
  return ranges;
}

}  // namespace wpnav
