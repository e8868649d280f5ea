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

#include <cstdint>
#include <vector>

#include "wpnav/grid.hpp"
#include "wpnav/raycast.hpp"

namespace wpnav {

struct ObservationConfig {
  int patch_size = 64;
  SensorConfig sensor;
};

/// Ego-centric top-down occupancy patch plus the planar range scan.
struct Observation {
  int patch_size = 0;
  std::vector<std::uint8_t> patch;  // row-major, 1 = occupied
  std::vector<double> ranges;

  bool occupied(int row, int col) const {
    return patch[static_cast<std::size_t>(row) * static_cast<std::size_t>(patch_size) +
                 static_cast<std::size_t>(col)] != 0;
  }
};

/// Patch geometry: the robot sits at (row patch_size - 1, col patch_size / 2)
/// facing row 0; columns left of center are to the robot's left. One patch
/// cell spans one world cell.
inline Vec2 patch_cell_to_ego(int row, int col, int patch_size, double resolution) {
  return {(patch_size - 1 - row) * resolution, (patch_size / 2 - col) * resolution};
}

inline std::vector<std::uint8_t> render_patch(const OccupancyGrid& grid, const RobotState& z, int patch_size) {
  std::vector<std::uint8_t> patch(static_cast<std::size_t>(patch_size) * static_cast<std::size_t>(patch_size));
  for (int r = 0; r < patch_size; ++r) {
    for (int c = 0; c < patch_size; ++c) {
      const Vec2 p = ego_to_world(z, patch_cell_to_ego(r, c, patch_size, grid.resolution()));
      patch[static_cast<std::size_t>(r) * static_cast<std::size_t>(patch_size) + static_cast<std::size_t>(c)] =
          grid.occupied_at(p) ? 1 : 0;
    }
  }
  return patch;
}

inline Observation render_observation(const OccupancyGrid& grid, const RobotState& z,
                                      const ObservationConfig& cfg) {
  return {cfg.patch_size, render_patch(grid, z, cfg.patch_size), raycast_depth(grid, z, cfg.sensor)};
}

}  // namespace wpnav
