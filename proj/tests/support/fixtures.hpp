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

// Hand-built maps shared by the unit and acceptance tests.

#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include "wpnav/grid.hpp"

namespace wpnav::fixture {

/// Open rectangle, `w` x `h` meters, with only the implicit outside wall.
inline OccupancyGrid open_map(double w, double h, double res = 0.05) {
  const GridGeometry g{res, {0.5 * res, 0.5 * res}, static_cast<int>(std::lround(w / res)),
                       static_cast<int>(std::lround(h / res))};
  return OccupancyGrid(g);
}

/// Straight corridor along +x: `length` long, `width` wide, walls outside.
inline OccupancyGrid straight_corridor(double length = 10.0, double width = 2.0) { return open_map(length, width); }

/// Solid block with corridors of width `w` carved along the polyline `pts`.
inline OccupancyGrid carved(double w_m, double h_m, double width, const std::vector<Vec2>& pts) {
  OccupancyGrid grid = open_map(w_m, h_m);
  grid.fill_box({-1, -1}, {w_m + 1, h_m + 1});
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const Vec2 a = pts[k], b = pts[k + 1];
    grid.fill_box({std::min(a.x, b.x) - width / 2, std::min(a.y, b.y) - width / 2},
                  {std::max(a.x, b.x) + width / 2, std::max(a.y, b.y) + width / 2}, false);
  }
  return grid;
}

/// Corridor with two 90 degree bends, 10 x 4 m, start near (1.2, 1), goal (8, 3).
inline OccupancyGrid bent_corridor(double width = 1.0) {
  return carved(10.0, 4.0, width, {{1, 1}, {5, 1}, {5, 3}, {8.5, 3}});
}

inline std::shared_ptr<const OccupancyGrid> share(OccupancyGrid g) {
  return std::make_shared<const OccupancyGrid>(std::move(g));
}

}  // namespace wpnav::fixture
