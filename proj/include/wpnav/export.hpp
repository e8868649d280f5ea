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

#include <cstdio>
#include <ostream>
#include <string>

#include "wpnav/episode.hpp"
#include "wpnav/expert.hpp"

namespace wpnav {

/// One row per executed pose: t, x, y, phi, v, omega, d_obs, d_goal. The
/// command columns hold the control applied from that pose; the final pose
/// repeats the last command, i.e. the velocity it arrived with.
inline void write_trajectory_csv(std::ostream& os, const EpisodeResult& result, const EpisodeFields& fields) {
  const auto& tr = result.trajectory;
  os << "t,x,y,phi,v,omega,d_obs,d_goal\n";
  char buf[256];
  for (std::size_t k = 0; k < tr.states.size(); ++k) {
    const RobotState& z = tr.states[k];
    ControlInput u{};
    if (k < tr.controls.size()) {
      u = tr.controls[k];
    } else if (!tr.controls.empty()) {
      u = tr.controls.back();
    }
    std::snprintf(buf, sizeof buf, "%.4f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n", tr.dt * static_cast<double>(k),
                  z.x, z.y, z.phi, u.v, u.omega, fields.obstacle_distance(z.position()),
                  fields.goal_distance(z.position()));
    os << buf;
  }
}

/// Top view: obstacles, start, goal disc, executed path, replan waypoints.
inline void write_trajectory_svg(std::ostream& os, const EpisodeSpec& ep, const EpisodeResult& result,
                                 double goal_radius, double px_per_m = 50.0) {
  const OccupancyGrid& grid = *ep.grid;
  const GridGeometry& g = grid.geometry();
  const double res = g.resolution;
  const double x0 = g.origin.x - 0.5 * res, y0 = g.origin.y - 0.5 * res;
  const double w_m = res * g.width, h_m = res * g.height;
  char buf[256];
  // world (x, y) -> pixels, y flipped
  auto px = [&](double x) { return (x - x0) * px_per_m; };
  auto py = [&](double y) { return (y0 + h_m - y) * px_per_m; };

  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" viewBox=\"0 0 %.2f %.2f\">\n",
                w_m * px_per_m, h_m * px_per_m, w_m * px_per_m, h_m * px_per_m);
  os << buf;
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n<g fill=\"#444\" shape-rendering=\"crispEdges\">\n";
  // one rect per horizontal run of occupied cells
  for (int j = 0; j < g.height; ++j) {
    for (int i = 0; i < g.width;) {
      if (!grid.occupied(i, j)) {
        ++i;
        continue;
      }
      int end = i;
      while (end < g.width && grid.occupied(end, j)) ++end;
      std::snprintf(buf, sizeof buf, "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\"/>\n",
                    px(x0 + res * i), py(y0 + res * (j + 1)), res * (end - i) * px_per_m, res * px_per_m);
      os << buf;
      i = end;
    }
  }
  os << "</g>\n";
  std::snprintf(buf, sizeof buf, "<circle class=\"goal\" cx=\"%.2f\" cy=\"%.2f\" r=\"%.2f\" fill=\"#2a2\" fill-opacity=\"0.4\"/>\n",
                px(ep.goal.x), py(ep.goal.y), goal_radius * px_per_m);
  os << buf;
  std::snprintf(buf, sizeof buf, "<circle class=\"start\" cx=\"%.2f\" cy=\"%.2f\" r=\"5\" fill=\"#22c\"/>\n",
                px(ep.start.x), py(ep.start.y));
  os << buf;
  os << "<polyline class=\"path\" fill=\"none\" stroke=\"#c22\" stroke-width=\"2\" points=\"";
  for (std::size_t k = 0; k < result.trajectory.states.size(); ++k) {
    const auto& z = result.trajectory.states[k];
    std::snprintf(buf, sizeof buf, "%s%.2f,%.2f", k ? " " : "", px(z.x), py(z.y));
    os << buf;
  }
  os << "\"/>\n";
  for (const Vec2& w : result.waypoints) {
    std::snprintf(buf, sizeof buf,
                  "<circle class=\"waypoint\" cx=\"%.2f\" cy=\"%.2f\" r=\"3\" fill=\"none\" stroke=\"#e80\"/>\n",
                  px(w.x), py(w.y));
    os << buf;
  }
  os << "</svg>\n";
}

}  // namespace wpnav
