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
#include <queue>
#include <vector>

#include "wpnav/grid.hpp"

namespace wpnav {

inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

enum class FieldRole { kObstacleDistance, kGoalDistance };

/// Real-valued field over the cell centers of a grid, in meters.
struct ScalarField {
  GridGeometry geometry;
  std::vector<double> values;
  FieldRole role = FieldRole::kObstacleDistance;

  double at(int i, int j) const { return values[geometry.flat(i, j)]; }
  double at(CellIndex c) const { return at(c.i, c.j); }
};

namespace detail {

// Squared 1D distance transform of sampled function f (Felzenszwalb & Huttenlocher).
// All inputs are integers or +inf, so the output is exact.
inline void edt_1d(const std::vector<double>& f, std::vector<double>& d, std::vector<int>& v,
                   std::vector<double>& z) {
  const int n = static_cast<int>(f.size());
  constexpr double inf = std::numeric_limits<double>::infinity();
  int k = 0;
  int first = 0;
  while (first < n && f[static_cast<std::size_t>(first)] == inf) ++first;
  if (first == n) {
    std::fill(d.begin(), d.end(), inf);
    return;
  }
  v[0] = first;
  z[0] = -inf;
  z[1] = inf;
  for (int q = first + 1; q < n; ++q) {
    const double fq = f[static_cast<std::size_t>(q)];
    if (fq == inf) continue;
    double s = 0.0;
    while (true) {
      const int p = v[static_cast<std::size_t>(k)];
      s = ((fq + double(q) * q) - (f[static_cast<std::size_t>(p)] + double(p) * p)) / (2.0 * (q - p));
      if (s > z[static_cast<std::size_t>(k)]) break;
      --k;  // z[0] is -inf, so k never drops below 0
    }
    ++k;
    v[static_cast<std::size_t>(k)] = q;
    z[static_cast<std::size_t>(k)] = s;
    z[static_cast<std::size_t>(k) + 1] = inf;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[static_cast<std::size_t>(k) + 1] < q) ++k;
    const int p = v[static_cast<std::size_t>(k)];
    d[static_cast<std::size_t>(q)] = double(q - p) * (q - p) + f[static_cast<std::size_t>(p)];
  }
}

/// Squared Euclidean distance (in cells) from every cell to the nearest cell with seed != 0.
inline std::vector<double> squared_edt(const GridGeometry& g, const std::vector<char>& seed) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  const int w = g.width;
  const int h = g.height;
  std::vector<double> out(g.size(), inf);
  const int n = std::max(w, h);
  std::vector<double> f(static_cast<std::size_t>(n)), d(static_cast<std::size_t>(n));
  std::vector<int> v(static_cast<std::size_t>(n));
  std::vector<double> z(static_cast<std::size_t>(n) + 1);
  // Columns first.
  f.resize(static_cast<std::size_t>(h));
  d.resize(static_cast<std::size_t>(h));
  for (int i = 0; i < w; ++i) {
    for (int j = 0; j < h; ++j) f[static_cast<std::size_t>(j)] = seed[g.flat(i, j)] ? 0.0 : inf;
    edt_1d(f, d, v, z);
    for (int j = 0; j < h; ++j) out[g.flat(i, j)] = d[static_cast<std::size_t>(j)];
  }
  f.resize(static_cast<std::size_t>(w));
  d.resize(static_cast<std::size_t>(w));
  for (int j = 0; j < h; ++j) {
    for (int i = 0; i < w; ++i) f[static_cast<std::size_t>(i)] = out[g.flat(i, j)];
    edt_1d(f, d, v, z);
    for (int i = 0; i < w; ++i) out[g.flat(i, j)] = d[static_cast<std::size_t>(i)];
  }
  return out;
}

}  // namespace detail

/// Signed center-to-center distance to the obstacle boundary: positive on free
/// cells (distance to the nearest occupied center), negative on occupied cells
/// (minus the distance to the nearest free center). Values are capped in
/// magnitude by the grid diagonal, which only binds for all-free or
/// all-occupied grids.
inline ScalarField signed_distance_field(const OccupancyGrid& grid) {
  const GridGeometry& g = grid.geometry();
  std::vector<char> occ(g.size()), free(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    occ[k] = grid.cells()[k] != 0;
    free[k] = !occ[k];
  }
  const auto to_occ = detail::squared_edt(g, occ);
  const auto to_free = detail::squared_edt(g, free);
  const double cap = g.diagonal();
  ScalarField field{g, std::vector<double>(g.size()), FieldRole::kObstacleDistance};
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (occ[k]) {
      field.values[k] = -std::min(cap, std::sqrt(to_free[k]) * g.resolution);
    } else {
      field.values[k] = std::min(cap, std::sqrt(to_occ[k]) * g.resolution);
    }
  }
  return field;
}

/// First-order fast marching solution of |grad d| = 1 from the goal cell over
/// free cells. Each update takes the better of the axis-aligned stencil and the
/// 45-degree rotated one (spacing h*sqrt(2)); a diagonal neighbor only counts
/// when both cells sharing its corner are free. Unreachable and occupied cells
/// hold kUnreachable.
inline ScalarField fmm_distance(const OccupancyGrid& grid, Vec2 goal) {
  const GridGeometry& g = grid.geometry();
  const auto goal_cell = g.cell_of(goal);
  if (!goal_cell) throw GridError("fmm_distance: goal outside grid extent");
  if (grid.occupied(*goal_cell)) throw GridError("fmm_distance: goal lies on an occupied cell");

  ScalarField field{g, std::vector<double>(g.size(), kUnreachable), FieldRole::kGoalDistance};
  std::vector<char> frozen(g.size(), 0);
  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  const double hres = g.resolution;
  const double hdiag = hres * std::sqrt(2.0);

  const std::size_t start = g.flat(goal_cell->i, goal_cell->j);
  field.values[start] = 0.0;
  heap.emplace(0.0, start);

  auto free_cell = [&](int i, int j) { return g.contains(i, j) && !grid.occupied(i, j); };
  auto frozen_value = [&](int i, int j) {
    if (!g.contains(i, j)) return kUnreachable;
    const std::size_t k = g.flat(i, j);
    return frozen[k] ? field.values[k] : kUnreachable;
  };
  // diagonal neighbor (i + si, j + sj) seen from (i, j)
  auto frozen_diag = [&](int i, int j, int si, int sj) {
    if (!free_cell(i + si, j) || !free_cell(i, j + sj)) return kUnreachable;
    return frozen_value(i + si, j + sj);
  };
  auto solve = [](double a, double b, double h) {
    if (std::isinf(a) || std::isinf(b) || std::abs(a - b) >= h) return std::min(a, b) + h;
    return 0.5 * (a + b + std::sqrt(2.0 * h * h - (a - b) * (a - b)));
  };

  while (!heap.empty()) {
    const auto [d, k] = heap.top();
    heap.pop();
    if (frozen[k] || d > field.values[k]) continue;
    frozen[k] = 1;
    const int ci = static_cast<int>(k % static_cast<std::size_t>(g.width));
    const int cj = static_cast<int>(k / static_cast<std::size_t>(g.width));
    for (int dj = -1; dj <= 1; ++dj) {
      for (int di = -1; di <= 1; ++di) {
        if (di == 0 && dj == 0) continue;
        const int ni = ci + di;
        const int nj = cj + dj;
        if (!free_cell(ni, nj)) continue;
        if (di != 0 && dj != 0 && (!free_cell(ci + di, cj) || !free_cell(ci, cj + dj))) continue;
        const std::size_t nk = g.flat(ni, nj);
        if (frozen[nk]) continue;
        const double a = std::min(frozen_value(ni - 1, nj), frozen_value(ni + 1, nj));
        const double b = std::min(frozen_value(ni, nj - 1), frozen_value(ni, nj + 1));
        const double p = std::min(frozen_diag(ni, nj, 1, 1), frozen_diag(ni, nj, -1, -1));
        const double q = std::min(frozen_diag(ni, nj, 1, -1), frozen_diag(ni, nj, -1, 1));
        const double u = std::min(solve(a, b, hres), solve(p, q, hdiag));
        if (u < field.values[nk]) {
          field.values[nk] = u;
          heap.emplace(u, nk);
        }
      }
    }
  }
  return field;
}

/// Bilinear interpolation of cell-center values. Positions between the outer
/// cell centers and the extent boundary use the nearest edge value. Corners
/// with zero weight do not participate, so a sentinel corner only propagates
/// when it actually contributes.
inline double sample_field(const ScalarField& field, Vec2 p) {
  const GridGeometry& g = field.geometry;
  if (!g.in_extent(p)) {
    return field.role == FieldRole::kObstacleDistance ? 0.0 : kUnreachable;
  }
  const double fx = std::clamp((p.x - g.origin.x) / g.resolution, 0.0, double(g.width - 1));
  const double fy = std::clamp((p.y - g.origin.y) / g.resolution, 0.0, double(g.height - 1));
  const int i0 = std::min(static_cast<int>(std::floor(fx)), std::max(0, g.width - 2));
  const int j0 = std::min(static_cast<int>(std::floor(fy)), std::max(0, g.height - 2));
  const double tx = fx - i0;
  const double ty = fy - j0;
  const int i1 = std::min(i0 + 1, g.width - 1);
  const int j1 = std::min(j0 + 1, g.height - 1);
  const double w[4] = {(1 - tx) * (1 - ty), tx * (1 - ty), (1 - tx) * ty, tx * ty};
  const double v[4] = {field.at(i0, j0), field.at(i1, j0), field.at(i0, j1), field.at(i1, j1)};
  double acc = 0.0;
  for (int k = 0; k < 4; ++k) {
    if (w[k] == 0.0) continue;
    if (std::isinf(v[k])) return kUnreachable;
    acc += w[k] * v[k];
  }
  return acc;
}

/// Grid with every cell within `radius` (center-to-center) of an obstacle marked occupied.
inline OccupancyGrid inflate(const OccupancyGrid& grid, const ScalarField& sdf, double radius) {
  OccupancyGrid out = grid;
  for (int j = 0; j < grid.height(); ++j)
    for (int i = 0; i < grid.width(); ++i)
      if (sdf.at(i, j) <= radius) out.set(i, j, true);
  return out;
}

}  // namespace wpnav
