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

#include <gtest/gtest.h>

#include <algorithm>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "wpnav/observation.hpp"

namespace wpnav {
namespace {

TEST(Observation, EmptyWorldIsFreeInsideTheExtent) {
  const OccupancyGrid grid = fixture::open_map(10, 10);
  const RobotState z{5.025, 5.025, 0.0};
  const Observation o = render_observation(grid, z, ObservationConfig{});
  ASSERT_EQ(o.patch.size(), 64u * 64u);
  EXPECT_EQ(std::count(o.patch.begin(), o.patch.end(), 1), 0);
  ASSERT_EQ(o.ranges.size(), 128u);

  // near the left edge of the map the out-of-extent part reads occupied
  const Observation edge = render_observation(grid, {0.525, 5.025, kPi / 2}, ObservationConfig{});
  for (int row = 0; row < 64; ++row) {
    for (int col = 0; col < 64; ++col) {
      const Vec2 p = ego_to_world({0.525, 5.025, kPi / 2}, patch_cell_to_ego(row, col, 64, 0.05));
      EXPECT_EQ(edge.occupied(row, col), !grid.geometry().in_extent(p));
    }
  }
}

TEST(Observation, WallOneMeterAheadLandsOnKnownRow) {
  OccupancyGrid grid = fixture::open_map(10, 10);
  const RobotState z{1.025, 5.025, 0.0};
  grid.fill_box({2.0, 0}, {10, 10});  // first wall cell center at x = 2.025
  const auto patch = render_patch(grid, z, 64);
  const int bottom = 63;
  const int wall_row = bottom - static_cast<int>(std::lround(1.0 / 0.05));
  ASSERT_EQ(wall_row, 43);
  for (int col = 0; col < 64; ++col) {
    for (int row = 0; row < 64; ++row) {
      EXPECT_EQ(patch[static_cast<std::size_t>(row * 64 + col)], row <= wall_row ? 1 : 0) << row << "," << col;
    }
  }
}

TEST(Observation, LeftOfRobotIsLeftOfCenter) {
  OccupancyGrid grid = fixture::open_map(10, 10);
  const RobotState z{5.025, 5.025, 0.0};
  grid.set(100, 110, true);  // 0.5 m to the robot's left (world +y)
  const auto patch = render_patch(grid, z, 64);
  EXPECT_EQ(patch[63 * 64 + 32 - 10], 1);
  EXPECT_EQ(std::count(patch.begin(), patch.end(), 1), 1);
}

TEST(Observation, QuarterTurnEquivariance) {
  // rotate the scene by +90 degrees about the robot cell and the robot with it
  Rng rng(12);
  const OccupancyGrid a = oracle::random_grid(rng, 101, 101, 0.1);
  OccupancyGrid b(a.geometry());
  const int c = 50;
  for (int j = 0; j < 101; ++j)
    for (int i = 0; i < 101; ++i)
      if (a.occupied(i, j)) b.set(c - (j - c), c + (i - c), true);
  const Vec2 center = a.geometry().center(c, c);
  for (double phi : {0.0, 0.7, -2.0}) {
    const auto pa = render_patch(a, {center.x, center.y, phi}, 32);
    const auto pb = render_patch(b, {center.x, center.y, wrap_angle(phi + kPi / 2)}, 32);
    if (phi == 0.0) {
      EXPECT_EQ(pa, pb);
    } else {
      // off-axis headings sample between cells; most of the patch still agrees
      std::size_t same = 0;
      for (std::size_t k = 0; k < pa.size(); ++k) same += pa[k] == pb[k];
      EXPECT_GT(same, pa.size() * 9 / 10);
    }
  }
}

}  // namespace
}  // namespace wpnav
