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
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wpnav/dynamics.hpp"
#include "wpnav/rng.hpp"

namespace wpnav {

struct GridError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CellIndex {
  int i = 0;  // column, along +x
  int j = 0;  // row, along +y
  friend bool operator==(const CellIndex&, const CellIndex&) = default;
};

/// Placement of a regular grid in the world. `origin` is the center of cell (0, 0).
struct GridGeometry {
  double resolution = 0.05;
  Vec2 origin{};
  int width = 1;
  int height = 1;

  void validate() const {
    if (!(resolution > 0.0) || width < 1 || height < 1) {
      throw GridError("grid geometry: resolution must be > 0 and width, height >= 1");
    }
  }

  std::size_t size() const {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }
  std::size_t flat(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(width) +
           static_cast<std::size_t>(i);
  }
  bool contains(int i, int j) const { return i >= 0 && j >= 0 && i < width && j < height; }
  bool contains(CellIndex c) const { return contains(c.i, c.j); }

  Vec2 center(int i, int j) const {
    return {origin.x + resolution * i, origin.y + resolution * j};
  }

  /// Lower-left corner of the covered area.
  Vec2 min_corner() const {
    return {origin.x - 0.5 * resolution, origin.y - 0.5 * resolution};
  }
  Vec2 max_corner() const {
    return {origin.x + (width - 0.5) * resolution, origin.y + (height - 0.5) * resolution};
  }

  bool in_extent(Vec2 p) const {
    const Vec2 lo = min_corner();
    const Vec2 hi = max_corner();
    return p.x >= lo.x && p.y >= lo.y && p.x < hi.x && p.y < hi.y;
  }

  /// Cell whose square contains `p`; nullopt outside the extent.
  std::optional<CellIndex> cell_of(Vec2 p) const {
    if (!in_extent(p)) return std::nullopt;
    CellIndex c{static_cast<int>(std::floor((p.x - origin.x) / resolution + 0.5)),
                static_cast<int>(std::floor((p.y - origin.y) / resolution + 0.5))};
    c.i = std::clamp(c.i, 0, width - 1);
    c.j = std::clamp(c.j, 0, height - 1);
    return c;
  }

  double diagonal() const { return resolution * std::hypot(width, height); }

  friend bool operator==(const GridGeometry&, const GridGeometry&) = default;
};

/// Binary occupancy map. Anything outside the extent counts as occupied.
class OccupancyGrid {
 public:
  OccupancyGrid() = default;
  OccupancyGrid(GridGeometry geometry, std::vector<std::uint8_t> cells)
      : geometry_(geometry), cells_(std::move(cells)) {
    geometry_.validate();
    if (cells_.size() != geometry_.size()) {
      throw GridError("occupancy grid: cell count does not match width*height");
    }
  }
  explicit OccupancyGrid(GridGeometry geometry)
      : OccupancyGrid(geometry, std::vector<std::uint8_t>(geometry.size(), 0)) {}

  const GridGeometry& geometry() const { return geometry_; }
  int width() const { return geometry_.width; }
  int height() const { return geometry_.height; }
  double resolution() const { return geometry_.resolution; }

  bool occupied(int i, int j) const {
    return !geometry_.contains(i, j) || cells_[geometry_.flat(i, j)] != 0;
  }
  bool occupied(CellIndex c) const { return occupied(c.i, c.j); }
  bool occupied_at(Vec2 p) const {
    const auto c = geometry_.cell_of(p);
    return !c || occupied(*c);
  }
  void set(int i, int j, bool occ) { cells_.at(geometry_.flat(i, j)) = occ ? 1 : 0; }

  /// Marks every cell whose center lies in the axis-aligned world box.
  void fill_box(Vec2 lo, Vec2 hi, bool occ = true) {
    const double r = geometry_.resolution;
    const int i0 = std::max(0, static_cast<int>(std::ceil((lo.x - geometry_.origin.x) / r)));
    const int j0 = std::max(0, static_cast<int>(std::ceil((lo.y - geometry_.origin.y) / r)));
    const int i1 = std::min(width() - 1, static_cast<int>(std::floor((hi.x - geometry_.origin.x) / r)));
    const int j1 = std::min(height() - 1, static_cast<int>(std::floor((hi.y - geometry_.origin.y) / r)));
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i) set(i, j, occ);
  }

  std::size_t occupied_count() const {
    return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), std::uint8_t{1}));
  }
  double occupied_fraction() const {
    return static_cast<double>(occupied_count()) / static_cast<double>(cells_.size());
  }

  const std::vector<std::uint8_t>& cells() const { return cells_; }

  friend bool operator==(const OccupancyGrid&, const OccupancyGrid&) = default;

 private:
  GridGeometry geometry_{};
  std::vector<std::uint8_t> cells_{0};
};

// ---------------------------------------------------------------------------
// Procedural maps

enum class ObstacleStyle { kRandomBoxes, kRoomsAndCorridors };

inline const char* to_string(ObstacleStyle s) {
  return s == ObstacleStyle::kRandomBoxes ? "random-boxes" : "rooms-and-corridors";
}

inline ObstacleStyle parse_obstacle_style(const std::string& s) {
  if (s == "random-boxes") return ObstacleStyle::kRandomBoxes;
  if (s == "rooms-and-corridors") return ObstacleStyle::kRoomsAndCorridors;
  throw GridError("unknown obstacle style '" + s + "'");
}

struct MapSpec {
  std::uint64_t seed = 0;
  double width = 10.0;   // m
  double height = 10.0;  // m
  ObstacleStyle style = ObstacleStyle::kRandomBoxes;
  double density = 0.1;  // target occupied fraction of the interior
  double min_size = 0.3;  // box side range, m
  double max_size = 1.2;
  double resolution = 0.05;
  // rooms-and-corridors only
  double room_size = 3.0;
  double door_width = 1.0;
  double wall_thickness = 0.1;

  void validate() const {
    auto fail = [](const std::string& key, const std::string& why) {
      throw GridError("map spec: '" + key + "' " + why);
    };
    if (!(resolution > 0.0)) fail("resolution", "must be > 0");
    if (!(width >= 3 * resolution)) fail("width", "must span at least 3 cells");
    if (!(height >= 3 * resolution)) fail("height", "must span at least 3 cells");
    if (!(density >= 0.0 && density < 1.0)) fail("density", "must lie in [0, 1)");
    if (!(min_size > 0.0)) fail("min_size", "must be > 0");
    if (!(max_size >= min_size)) fail("max_size", "must be >= min_size");
    if (style == ObstacleStyle::kRoomsAndCorridors) {
      if (!(room_size > door_width)) fail("room_size", "must exceed door_width");
      if (!(door_width > 0.0)) fail("door_width", "must be > 0");
      if (!(wall_thickness > 0.0)) fail("wall_thickness", "must be > 0");
    }
  }
};

namespace detail {

inline void place_boxes(OccupancyGrid& grid, const MapSpec& spec, Rng& rng,
                        const OccupancyGrid* keep_out) {
  if (spec.density <= 0.0) return;
  const int w = grid.width();
  const int h = grid.height();
  const double interior = static_cast<double>((w - 2) * (h - 2));
  if (interior <= 0.0) return;
  auto interior_fraction = [&] {
    std::size_t n = 0;
    for (int j = 1; j < h - 1; ++j)
      for (int i = 1; i < w - 1; ++i) n += grid.occupied(i, j) ? 1 : 0;
    return static_cast<double>(n) / interior;
  };
  const double base = interior_fraction();
  const Vec2 lo = grid.geometry().min_corner();
  const Vec2 hi = grid.geometry().max_corner();
  double frac = base;
  for (int attempt = 0; attempt < 5000 && frac - base < spec.density; ++attempt) {
    const double bw = rng.uniform(spec.min_size, spec.max_size);
    const double bh = rng.uniform(spec.min_size, spec.max_size);
    const double x0 = rng.uniform(lo.x, hi.x - bw);
    const double y0 = rng.uniform(lo.y, hi.y - bh);
    if (keep_out != nullptr) {
      OccupancyGrid probe(grid.geometry());
      probe.fill_box({x0, y0}, {x0 + bw, y0 + bh});
      bool blocked = false;
      for (std::size_t k = 0; k < probe.cells().size() && !blocked; ++k)
        blocked = probe.cells()[k] != 0 && keep_out->cells()[k] != 0;
      if (blocked) continue;
    }
    grid.fill_box({x0, y0}, {x0 + bw, y0 + bh});
    frac = interior_fraction();
  }
}

inline void add_border(OccupancyGrid& grid) {
  for (int i = 0; i < grid.width(); ++i) {
    grid.set(i, 0, true);
    grid.set(i, grid.height() - 1, true);
  }
  for (int j = 0; j < grid.height(); ++j) {
    grid.set(0, j, true);
    grid.set(grid.width() - 1, j, true);
  }
}

inline void build_rooms(OccupancyGrid& grid, OccupancyGrid& keep_out, const MapSpec& spec,
                        Rng& rng) {
  const int nx = std::max(1, static_cast<int>(std::floor(spec.width / spec.room_size)));
  const int ny = std::max(1, static_cast<int>(std::floor(spec.height / spec.room_size)));
  const double rw = spec.width / nx;
  const double rh = spec.height / ny;
  const double half_t = 0.5 * spec.wall_thickness;
  // Walls between room columns and rows.
  for (int k = 1; k < nx; ++k)
    grid.fill_box({k * rw - half_t, 0.0}, {k * rw + half_t, spec.height});
  for (int k = 1; k < ny; ++k)
    grid.fill_box({0.0, k * rh - half_t}, {spec.width, k * rh + half_t});

  // Random spanning tree over rooms (iterative DFS), then a few extra doors.
  const int n = nx * ny;
  std::vector<char> visited(static_cast<std::size_t>(n), 0);
  std::vector<std::pair<int, int>> doors;
  std::vector<int> stack{static_cast<int>(rng.index(static_cast<std::uint64_t>(n)))};
  visited[static_cast<std::size_t>(stack.back())] = 1;
  while (!stack.empty()) {
    const int cur = stack.back();
    const int cx = cur % nx;
    const int cy = cur / nx;
    std::vector<int> options;
    if (cx > 0) options.push_back(cur - 1);
    if (cx + 1 < nx) options.push_back(cur + 1);
    if (cy > 0) options.push_back(cur - nx);
    if (cy + 1 < ny) options.push_back(cur + nx);
    std::erase_if(options, [&](int o) { return visited[static_cast<std::size_t>(o)] != 0; });
    if (options.empty()) {
      stack.pop_back();
      continue;
    }
    const int next = options[rng.index(options.size())];
    visited[static_cast<std::size_t>(next)] = 1;
    doors.emplace_back(std::min(cur, next), std::max(cur, next));
    stack.push_back(next);
  }
  for (int r = 0; r < n; ++r) {
    const int cx = r % nx;
    const int cy = r / nx;
    for (int other : {cx + 1 < nx ? r + 1 : -1, cy + 1 < ny ? r + nx : -1}) {
      if (other < 0) continue;
      const bool exists = std::find(doors.begin(), doors.end(), std::pair{r, other}) != doors.end();
      if (!exists && rng.uniform() < 0.3) doors.emplace_back(r, other);
    }
  }
  const double clearance = 0.5;
  for (const auto& [a, b] : doors) {
    const int ax = a % nx;
    const int ay = a / nx;
    if (b == a + 1) {  // vertical wall at x = (ax + 1) * rw
      const double x = (ax + 1) * rw;
      const double y_lo = ay * rh + half_t + 0.05;
      const double y_hi = (ay + 1) * rh - half_t - 0.05 - spec.door_width;
      const double y0 = y_hi > y_lo ? rng.uniform(y_lo, y_hi) : ay * rh + 0.5 * (rh - spec.door_width);
      grid.fill_box({x - spec.wall_thickness, y0}, {x + spec.wall_thickness, y0 + spec.door_width}, false);
      keep_out.fill_box({x - clearance - spec.door_width, y0 - clearance},
                        {x + clearance + spec.door_width, y0 + spec.door_width + clearance});
    } else {  // horizontal wall at y = (ay + 1) * rh
      const double y = (ay + 1) * rh;
      const double x_lo = ax * rw + half_t + 0.05;
      const double x_hi = (ax + 1) * rw - half_t - 0.05 - spec.door_width;
      const double x0 = x_hi > x_lo ? rng.uniform(x_lo, x_hi) : ax * rw + 0.5 * (rw - spec.door_width);
      grid.fill_box({x0, y - spec.wall_thickness}, {x0 + spec.door_width, y + spec.wall_thickness}, false);
      keep_out.fill_box({x0 - clearance, y - clearance - spec.door_width},
                        {x0 + spec.door_width + clearance, y + clearance + spec.door_width});
    }
  }
}

}  // namespace detail

/// Procedural closed-world map. The same spec always yields the same grid.
inline OccupancyGrid generate_map(const MapSpec& spec) {
  spec.validate();
  GridGeometry geo;
  geo.resolution = spec.resolution;
  geo.width = static_cast<int>(std::lround(spec.width / spec.resolution));
  geo.height = static_cast<int>(std::lround(spec.height / spec.resolution));
  geo.origin = {0.5 * spec.resolution, 0.5 * spec.resolution};
  OccupancyGrid grid(geo);
  Rng rng(spec.seed);
  if (spec.style == ObstacleStyle::kRoomsAndCorridors) {
    OccupancyGrid keep_out(geo);
    detail::build_rooms(grid, keep_out, spec, rng);
    detail::place_boxes(grid, spec, rng, &keep_out);
  } else {
    detail::place_boxes(grid, spec, rng, nullptr);
  }
  detail::add_border(grid);
  if (grid.occupied_count() == grid.geometry().size()) {
    throw GridError("map generation left no free space");
  }
  return grid;
}

// ---------------------------------------------------------------------------
// NAVGRID1 text format:
//   NAVGRID1 <resolution> <origin_x> <origin_y> <width> <height>
//   <height rows of width chars, '#' occupied, '.' free; first row is the top (j = height-1)>

inline void write_grid(std::ostream& os, const OccupancyGrid& grid) {
  const auto& g = grid.geometry();
  std::ostringstream header;
  header << std::setprecision(17) << "NAVGRID1 " << g.resolution << ' ' << g.origin.x << ' '
         << g.origin.y << ' ' << g.width << ' ' << g.height << '\n';
  os << header.str();
  std::string row(static_cast<std::size_t>(g.width), '.');
  for (int j = g.height - 1; j >= 0; --j) {
    for (int i = 0; i < g.width; ++i) row[static_cast<std::size_t>(i)] = grid.occupied(i, j) ? '#' : '.';
    os << row << '\n';
  }
}

inline OccupancyGrid read_grid(std::istream& is, const std::string& source = "<stream>") {
  std::string line;
  if (!std::getline(is, line)) throw GridError(source + ": empty grid file");
  std::istringstream header(line);
  std::string magic;
  GridGeometry g;
  header >> magic >> g.resolution >> g.origin.x >> g.origin.y >> g.width >> g.height;
  if (magic != "NAVGRID1") throw GridError(source + ": bad magic '" + magic + "'");
  if (!header) throw GridError(source + ": malformed header");
  try {
    g.validate();
  } catch (const GridError& e) {
    throw GridError(source + ": " + e.what());
  }
  std::vector<std::uint8_t> cells(g.size(), 0);
  for (int j = g.height - 1; j >= 0; --j) {
    if (!std::getline(is, line)) throw GridError(source + ": truncated grid rows");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.size() != static_cast<std::size_t>(g.width)) {
      throw GridError(source + ": row " + std::to_string(g.height - 1 - j) + " has wrong length");
    }
    for (int i = 0; i < g.width; ++i) {
      const char ch = line[static_cast<std::size_t>(i)];
      if (ch != '#' && ch != '.') throw GridError(source + ": unexpected character in grid row");
      cells[g.flat(i, j)] = ch == '#' ? 1 : 0;
    }
  }
  return OccupancyGrid(g, std::move(cells));
}

inline void save_grid(const std::string& path, const OccupancyGrid& grid) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw GridError(path + ": cannot open for writing");
  write_grid(os, grid);
  if (!os) throw GridError(path + ": write failed");
}

inline OccupancyGrid load_grid(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw GridError(path + ": cannot open for reading");
  return read_grid(is, path);
}

}  // namespace wpnav
