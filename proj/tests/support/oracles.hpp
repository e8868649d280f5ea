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

// Independent reference implementations used by the unit and acceptance tests.
// They are deliberately naive.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include <Eigen/Dense>

#include "wpnav/expert.hpp"
#include "wpnav/fields.hpp"
#include "wpnav/grid.hpp"
#include "wpnav/rng.hpp"

namespace wpnav::oracle {

/// O(n^2) signed distance: nearest opposite-class cell center, capped at the diagonal.
inline std::vector<double> brute_force_sdf(const OccupancyGrid& grid) {
  const auto& g = grid.geometry();
  const double cap = g.diagonal();
  std::vector<double> out(g.size());
  for (int j = 0; j < g.height; ++j) {
    for (int i = 0; i < g.width; ++i) {
      const bool occ = grid.occupied(i, j);
      double best2 = std::numeric_limits<double>::infinity();
      for (int jj = 0; jj < g.height; ++jj) {
        for (int ii = 0; ii < g.width; ++ii) {
          if (grid.occupied(ii, jj) == occ) continue;
          const double di = i - ii, dj = j - jj;
          best2 = std::min(best2, di * di + dj * dj);
        }
      }
      const double d = std::isinf(best2) ? cap : std::min(cap, std::sqrt(best2) * g.resolution);
      out[g.flat(i, j)] = occ ? -d : d;
    }
  }
  return out;
}

/// 8-connected Dijkstra with Euclidean edge lengths. Diagonal moves need both
/// side cells free, so it never squeezes between two diagonal obstacles, which
/// the 4-neighbour FMM cannot do either.
inline std::vector<double> dijkstra8(const OccupancyGrid& grid, CellIndex goal) {
  const auto& g = grid.geometry();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(g.size(), inf);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[g.flat(goal.i, goal.j)] = 0.0;
  pq.push({0.0, g.flat(goal.i, goal.j)});
  while (!pq.empty()) {
    const auto [d, k] = pq.top();
    pq.pop();
    if (d > dist[k]) continue;
    const int i = static_cast<int>(k % static_cast<std::size_t>(g.width));
    const int j = static_cast<int>(k / static_cast<std::size_t>(g.width));
    for (int dj = -1; dj <= 1; ++dj) {
      for (int di = -1; di <= 1; ++di) {
        if (di == 0 && dj == 0) continue;
        const int ni = i + di, nj = j + dj;
        if (!g.contains(ni, nj) || grid.occupied(ni, nj)) continue;
        if (di != 0 && dj != 0 && (grid.occupied(i + di, j) || grid.occupied(i, j + dj))) continue;
        const double nd = d + g.resolution * std::hypot(di, dj);
        const std::size_t nk = g.flat(ni, nj);
        if (nd < dist[nk]) {
          dist[nk] = nd;
          pq.push({nd, nk});
        }
      }
    }
  }
  return dist;
}

/// Bilinear interpolation written out from the four corner weights.
inline double bilinear(const ScalarField& f, Vec2 p) {
  const auto& g = f.geometry;
  const double u = (p.x - g.origin.x) / g.resolution;
  const double v = (p.y - g.origin.y) / g.resolution;
  const int i0 = std::clamp(static_cast<int>(std::floor(u)), 0, g.width - 1);
  const int j0 = std::clamp(static_cast<int>(std::floor(v)), 0, g.height - 1);
  const int i1 = std::min(i0 + 1, g.width - 1);
  const int j1 = std::min(j0 + 1, g.height - 1);
  const double a = std::clamp(u - i0, 0.0, 1.0);
  const double b = std::clamp(v - j0, 0.0, 1.0);
  return (1 - a) * (1 - b) * f.at(i0, j0) + a * (1 - b) * f.at(i1, j0) + (1 - a) * b * f.at(i0, j1) +
         a * b * f.at(i1, j1);
}

/// Central finite-difference Jacobians of step().
inline std::pair<Eigen::Matrix3d, Eigen::Matrix<double, 3, 2>> fd_jacobians(const RobotState& z,
                                                                           const ControlInput& u, double dt,
                                                                           double h = 1e-6) {
  auto f = [&](const Eigen::Vector3d& s, const Eigen::Vector2d& c) {
    // No wrapping here: the derivative of the unwrapped map is what linearize models.
    return Eigen::Vector3d(s(0) + dt * c(0) * std::cos(s(2)), s(1) + dt * c(0) * std::sin(s(2)), s(2) + dt * c(1));
  };
  const Eigen::Vector3d s(z.x, z.y, z.phi);
  const Eigen::Vector2d c(u.v, u.omega);
  Eigen::Matrix3d A;
  Eigen::Matrix<double, 3, 2> B;
  for (int k = 0; k < 3; ++k) {
    Eigen::Vector3d e = Eigen::Vector3d::Zero();
    e(k) = h;
    A.col(k) = (f(s + e, c) - f(s - e, c)) / (2 * h);
  }
  for (int k = 0; k < 2; ++k) {
    Eigen::Vector2d e = Eigen::Vector2d::Zero();
    e(k) = h;
    B.col(k) = (f(s, c + e) - f(s, c - e)) / (2 * h);
  }
  return {A, B};
}

/// Cross-check for the finite-difference oracle: step() itself, with the
/// heading difference unwrapped.
inline Eigen::Vector3d step_delta(const RobotState& a, const RobotState& b) {
  return {b.x - a.x, b.y - a.y, wrap_angle(b.phi - a.phi)};
}

struct ExhaustiveResult {
  bool found = false;
  std::size_t index = 0;
  double cost = 0.0;
};

/// Re-derives plan_waypoint's answer by building the candidate grid from the
/// documented product order and costing each candidate by hand.
inline ExhaustiveResult exhaustive_argmin(const RobotState& z, const ControlInput& u, const EpisodeFields& fields,
                                          const ExpertConfig& cfg, const VehicleSpec& spec) {
  const double half_fov = cfg.fov / 2.0;
  auto lin = [](double lo, double hi, int n, int k) { return n == 1 ? (lo + hi) / 2 : lo + (hi - lo) * k / (n - 1); };
  ExhaustiveResult best;
  std::size_t index = 0;
  for (int ir = 0; ir < cfg.n_r; ++ir) {
    const double r = cfg.n_r == 1 ? cfg.r_min : lin(cfg.r_min, cfg.r_max, cfg.n_r, ir);
    for (int ib = 0; ib < cfg.n_bearing; ++ib) {
      const double b = lin(-half_fov, half_fov, cfg.n_bearing, ib);
      for (int it = 0; it < cfg.n_theta; ++it, ++index) {
        const double th = lin(b - cfg.heading_window, b + cfg.heading_window, cfg.n_theta, it);
        const Waypoint w{r * std::cos(b), r * std::sin(b), th};
        const FitResult fit = fit_spline(w, u, cfg.planning_horizon, spec, cfg.terminal_speed);
        const auto* traj = std::get_if<PlannedTrajectory>(&fit);
        if (traj == nullptr) continue;
        double cost = 0.0;
        for (const auto& s : traj->states) {
          const Vec2 p = ego_to_world(z, Vec2{s.x, s.y});
          const double dg = sample_field(fields.fmm, p);
          if (std::isinf(dg)) {
            cost = std::numeric_limits<double>::infinity();
            break;
          }
          const double gap = std::max(0.0, cfg.lambda1 - sample_field(fields.sdf, p));
          cost += gap * gap * gap + cfg.lambda2 * dg * dg;
        }
        if (std::isinf(cost)) continue;
        if (!best.found || cost < best.cost) best = {true, index, cost};
      }
    }
  }
  return best;
}

/// Random occupancy grid with the given fill probability.
inline OccupancyGrid random_grid(Rng& rng, int w, int h, double fill, double resolution = 0.05) {
  GridGeometry g{resolution, {resolution / 2, resolution / 2}, w, h};
  std::vector<std::uint8_t> cells(g.size());
  for (auto& c : cells) c = rng.uniform() < fill ? 1 : 0;
  return OccupancyGrid(g, std::move(cells));
}

}  // namespace wpnav::oracle
