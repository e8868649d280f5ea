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

#include <cmath>

#include "support/oracles.hpp"
#include "wpnav/fields.hpp"

namespace wpnav {
namespace {

TEST(Sdf, SingleObstacleCenterToCenter) {
  OccupancyGrid g(GridGeometry{1.0, {0.0, 0.0}, 9, 9});
  g.set(4, 4, true);
  const ScalarField f = signed_distance_field(g);
  EXPECT_EQ(f.role, FieldRole::kObstacleDistance);
  EXPECT_DOUBLE_EQ(f.at(5, 4), 1.0);
  EXPECT_DOUBLE_EQ(f.at(4, 3), 1.0);
  EXPECT_DOUBLE_EQ(f.at(5, 5), std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(f.at(0, 0), std::sqrt(32.0));
  EXPECT_DOUBLE_EQ(f.at(4, 4), -1.0);
}

TEST(Sdf, FullyOccupiedIsNonPositive) {
  GridGeometry geo{0.1, {}, 6, 5};
  OccupancyGrid g(geo, std::vector<std::uint8_t>(geo.size(), 1));
  const ScalarField f = signed_distance_field(g);
  for (double v : f.values) EXPECT_LE(v, 0.0);
}

TEST(Sdf, AllFreeIsCappedAtDiagonal) {
  OccupancyGrid g(GridGeometry{0.1, {}, 7, 4});
  const ScalarField f = signed_distance_field(g);
  for (double v : f.values) EXPECT_DOUBLE_EQ(v, g.geometry().diagonal());
}

TEST(Sdf, MatchesBruteForceOnRandomGrids) {
  Rng rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const int w = 1 + static_cast<int>(rng.index(64));
    const int h = 1 + static_cast<int>(rng.index(64));
    const OccupancyGrid g = oracle::random_grid(rng, w, h, rng.uniform(0.0, 0.6));
    const ScalarField f = signed_distance_field(g);
    const auto expect = oracle::brute_force_sdf(g);
    for (std::size_t k = 0; k < expect.size(); ++k) ASSERT_EQ(f.values[k], expect[k]) << "trial " << trial;
  }
}

TEST(Sdf, SignConvention) {
  Rng rng(23);
  const OccupancyGrid g = oracle::random_grid(rng, 40, 30, 0.3);
  const ScalarField f = signed_distance_field(g);
  for (int j = 0; j < 30; ++j)
    for (int i = 0; i < 40; ++i) {
      if (g.occupied(i, j)) EXPECT_LE(f.at(i, j), 0.0);
      else EXPECT_GT(f.at(i, j), 0.0);
    }
}

TEST(Fmm, GoalIsZeroAndWalledOffIsSentinel) {
  OccupancyGrid g(GridGeometry{0.1, {0.05, 0.05}, 20, 20});
  for (int j = 0; j < 20; ++j) g.set(10, j, true);  // splits the map
  const ScalarField f = fmm_distance(g, {0.25, 0.25});
  EXPECT_EQ(f.role, FieldRole::kGoalDistance);
  EXPECT_EQ(f.at(2, 2), 0.0);
  EXPECT_TRUE(std::isinf(f.at(15, 5)));
  EXPECT_TRUE(std::isinf(f.at(10, 5)));
  EXPECT_NEAR(f.at(7, 2), 0.5, 1e-12);
}

TEST(Fmm, GoalMustBeFreeAndInside) {
  OccupancyGrid g(GridGeometry{0.1, {0.05, 0.05}, 10, 10});
  g.set(3, 3, true);
  EXPECT_THROW(fmm_distance(g, {0.35, 0.35}), GridError);
  EXPECT_THROW(fmm_distance(g, {5.0, 0.35}), GridError);
}

TEST(Fmm, EmptyMapAgreesWithDijkstra) {
  OccupancyGrid g(GridGeometry{0.05, {0.025, 0.025}, 100, 100});
  const Vec2 goal{2.5, 1.0};
  const ScalarField f = fmm_distance(g, goal);
  const auto goal_cell = *g.geometry().cell_of(goal);
  const auto d = oracle::dijkstra8(g, goal_cell);
  const double slack = g.geometry().resolution * std::sqrt(2.0);
  for (std::size_t k = 0; k < d.size(); ++k) {
    ASSERT_TRUE(std::isfinite(f.values[k]));
    EXPECT_GE(f.values[k], 0.9 * d[k] - 1e-12);
    EXPECT_LE(f.values[k], d[k] + slack + 1e-12);
  }
}

TEST(Fmm, RandomGridsReachabilityAndBound) {
  Rng rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    const OccupancyGrid g = oracle::random_grid(rng, 60, 60, 0.1 + 0.005 * trial);
    CellIndex goal{static_cast<int>(rng.index(60)), static_cast<int>(rng.index(60))};
    if (g.occupied(goal)) continue;
    const ScalarField f = fmm_distance(g, g.geometry().center(goal.i, goal.j));
    const auto d = oracle::dijkstra8(g, goal);
    const double slack = g.geometry().resolution * std::sqrt(2.0);
    for (std::size_t k = 0; k < d.size(); ++k) {
      ASSERT_EQ(std::isfinite(f.values[k]), std::isfinite(d[k]));
      if (!std::isfinite(d[k])) continue;
      EXPECT_GE(f.values[k], 0.9 * d[k] - 1e-12);
      EXPECT_LE(f.values[k], d[k] + slack + 1e-12);
    }
  }
}

TEST(Fmm, SteepestDescentStrictlyDecreases) {
  Rng rng(37);
  const OccupancyGrid g = oracle::random_grid(rng, 50, 50, 0.2);
  CellIndex goal{25, 25};
  OccupancyGrid open = g;
  open.set(25, 25, false);
  const ScalarField f = fmm_distance(open, open.geometry().center(25, 25));
  int walks = 0;
  for (int trial = 0; trial < 200 && walks < 40; ++trial) {
    CellIndex c{static_cast<int>(rng.index(50)), static_cast<int>(rng.index(50))};
    if (!std::isfinite(f.at(c))) continue;
    ++walks;
    while (!(c == goal)) {
      CellIndex best = c;
      for (int dj = -1; dj <= 1; ++dj)
        for (int di = -1; di <= 1; ++di) {
          const CellIndex n{c.i + di, c.j + dj};
          if (!open.geometry().contains(n) || open.occupied(n)) continue;
          if (f.at(n) < f.at(best)) best = n;
        }
      ASSERT_LT(f.at(best), f.at(c));
      c = best;
    }
  }
  EXPECT_GT(walks, 10);
}

TEST(SampleField, CenterAndMidpoint) {
  ScalarField f{GridGeometry{0.5, {0.0, 0.0}, 3, 2}, {1.0, 3.0, 5.0, 2.0, 4.0, 6.0}, FieldRole::kObstacleDistance};
  EXPECT_DOUBLE_EQ(sample_field(f, {0.5, 0.0}), 3.0);
  EXPECT_DOUBLE_EQ(sample_field(f, {0.25, 0.0}), 2.0);
  EXPECT_DOUBLE_EQ(sample_field(f, {0.0, 0.25}), 1.5);
}

TEST(SampleField, MatchesIndependentBilinear) {
  Rng rng(41);
  GridGeometry geo{0.05, {0.3, -0.2}, 40, 30};
  ScalarField f{geo, std::vector<double>(geo.size()), FieldRole::kObstacleDistance};
  for (auto& v : f.values) v = rng.uniform(-2, 2);
  for (int k = 0; k < 1000; ++k) {
    const Vec2 p{rng.uniform(geo.origin.x, geo.origin.x + 39 * 0.05),
                 rng.uniform(geo.origin.y, geo.origin.y + 29 * 0.05)};
    EXPECT_NEAR(sample_field(f, p), oracle::bilinear(f, p), 1e-12);
  }
}

TEST(SampleField, OutsideExtentAndSentinel) {
  GridGeometry geo{1.0, {0.0, 0.0}, 2, 2};
  ScalarField sdf{geo, {1, 1, 1, 1}, FieldRole::kObstacleDistance};
  ScalarField goal{geo, {0, 1, kUnreachable, 2}, FieldRole::kGoalDistance};
  EXPECT_EQ(sample_field(sdf, {-0.6, 0.0}), 0.0);
  EXPECT_TRUE(std::isinf(sample_field(goal, {5.0, 0.0})));
  EXPECT_TRUE(std::isinf(sample_field(goal, {0.5, 0.5})));
  EXPECT_DOUBLE_EQ(sample_field(goal, {0.5, 0.0}), 0.5);  // sentinel corner has zero weight
}

TEST(Inflate, MarksCellsWithinRadius) {
  OccupancyGrid g(GridGeometry{0.1, {0.05, 0.05}, 11, 11});
  g.set(5, 5, true);
  const OccupancyGrid inflated = inflate(g, signed_distance_field(g), 0.2);
  EXPECT_TRUE(inflated.occupied(7, 5));
  EXPECT_FALSE(inflated.occupied(8, 5));
  EXPECT_FALSE(inflated.occupied(7, 7));  // 0.283 m away
  EXPECT_TRUE(inflated.occupied(6, 6));
}

}  // namespace
}  // namespace wpnav
