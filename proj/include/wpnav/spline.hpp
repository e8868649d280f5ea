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
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "wpnav/dynamics.hpp"

namespace wpnav {

/// Target pose expressed in the robot's ego frame.
struct Waypoint {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  friend bool operator==(const Waypoint&, const Waypoint&) = default;
};

/// A cubic per axis in normalized time s in [0, 1].
struct CubicSpline2D {
  std::array<double, 4> cx{};  // x(s) = cx[0] + cx[1] s + cx[2] s^2 + cx[3] s^3
  std::array<double, 4> cy{};
  double horizon = 1.0;        // seconds covered by s in [0, 1]

  /// Hermite segment from (p0, m0) to (p1, m1); m are d/ds derivatives.
  static CubicSpline2D hermite(Vec2 p0, Vec2 m0, Vec2 p1, Vec2 m1, double horizon) {
    auto coeffs = [](double a, double ma, double b, double mb) {
      return std::array<double, 4>{a, ma, 3.0 * (b - a) - 2.0 * ma - mb, 2.0 * (a - b) + ma + mb};
    };
    return {coeffs(p0.x, m0.x, p1.x, m1.x), coeffs(p0.y, m0.y, p1.y, m1.y), horizon};
  }

  Vec2 position(double s) const {
    return {((cx[3] * s + cx[2]) * s + cx[1]) * s + cx[0], ((cy[3] * s + cy[2]) * s + cy[1]) * s + cy[0]};
  }
  /// d/ds
  Vec2 d1(double s) const {
    return {(3.0 * cx[3] * s + 2.0 * cx[2]) * s + cx[1], (3.0 * cy[3] * s + 2.0 * cy[2]) * s + cy[1]};
  }
  /// d^2/ds^2
  Vec2 d2(double s) const { return {6.0 * cx[3] * s + 2.0 * cx[2], 6.0 * cy[3] * s + 2.0 * cy[2]}; }
};

struct PlannedTrajectory {
  double dt = 0.05;
  double horizon = 0.0;
  std::vector<RobotState> states;      // N + 1 samples, states[0] at t = 0
  std::vector<ControlInput> controls;  // N, controls[k] applied from states[k]
  CubicSpline2D spline;

  std::size_t steps() const { return controls.size(); }
};

enum class InfeasibleReason { kSpeedBound, kOmegaBound, kDegenerateHeading };

inline const char* to_string(InfeasibleReason r) {
  switch (r) {
    case InfeasibleReason::kSpeedBound: return "speed-bound";
    case InfeasibleReason::kOmegaBound: return "omega-bound";
    case InfeasibleReason::kDegenerateHeading: return "degenerate-heading";
  }
  return "unknown";
}

struct Infeasible {
  InfeasibleReason reason;
  std::size_t sample = 0;  // first offending sample
};

using FitResult = std::variant<PlannedTrajectory, Infeasible>;

struct SplineOptions {
  /// Bounds are checked against (1 - margin) * bound at every sample.
  double bound_margin = 0.01;
  /// Stand-in initial speed when starting from rest, keeps the heading defined.
  double rest_speed = 1e-3;
  /// Squared-speed threshold (m^2/s^2) below which the heading is undefined.
  double degenerate_speed_sq = 1e-12;
  /// Waypoints closer than this (m) to the origin count as pure rotations.
  double min_chord = 1e-9;
};

/// Heading, speed and turn rate at normalized time s from analytic derivatives.
struct SplineKinematics {
  double heading;
  double v;
  double omega;
  double speed_sq;
};

inline SplineKinematics spline_kinematics(const CubicSpline2D& sp, double s) {
  const Vec2 d = sp.d1(s);
  const Vec2 dd = sp.d2(s);
  const double h = sp.horizon;
  const double xd = d.x / h, yd = d.y / h;
  const double xdd = dd.x / (h * h), ydd = dd.y / (h * h);
  const double sq = xd * xd + yd * yd;
  return {std::atan2(yd, xd), std::sqrt(sq), (xd * ydd - yd * xdd) / sq, sq};
}

/// Controls at each of the `n` transition samples t_k = k * dt, from the
/// analytic spline derivatives. Throws on an undefined heading.
inline std::vector<ControlInput> recover_controls(const CubicSpline2D& sp, std::size_t n,
                                                  const SplineOptions& opt = {}) {
  if (n < 1) throw std::invalid_argument("recover_controls: need at least 2 samples");
  std::vector<ControlInput> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto kin = spline_kinematics(sp, double(k) / double(n));
    if (kin.speed_sq < opt.degenerate_speed_sq) {
      throw std::domain_error("recover_controls: degenerate heading at sample " + std::to_string(k));
    }
    out.push_back({kin.v, kin.omega});
  }
  return out;
}

/// Cubic boundary-value trajectory from the ego origin (speed u0.v along +x)
/// to waypoint w (speed terminal_speed along w.theta), reached after `horizon`
/// seconds and sampled every spec.dt.
inline FitResult fit_spline(const Waypoint& w, const ControlInput& u0, double horizon,
                            const VehicleSpec& spec, double terminal_speed,
                            const SplineOptions& opt = {}) {
  if (!(horizon > 0.0)) throw std::invalid_argument("fit_spline: horizon must be > 0");
  if (!(terminal_speed >= 0.0 && terminal_speed <= spec.v_max)) {
    throw std::invalid_argument("fit_spline: terminal speed outside [0, v_max]");
  }
  const std::size_t n = static_cast<std::size_t>(std::lround(horizon / spec.dt));
  if (n < 1) throw std::invalid_argument("fit_spline: horizon shorter than one step");

  // A waypoint on the current position asks for rotation in place, which a
  // moving unicycle cannot do. The cubic would answer it with a loop.
  if (u0.v > 0.0 && std::hypot(w.x, w.y) < opt.min_chord) {
    return Infeasible{InfeasibleReason::kDegenerateHeading, 0};
  }

  const double v0 = u0.v > 0.0 ? u0.v : opt.rest_speed;
  const double vf = terminal_speed > 0.0 ? terminal_speed : opt.rest_speed;
  const auto sp = CubicSpline2D::hermite({0.0, 0.0}, {v0 * horizon, 0.0}, {w.x, w.y},
                                         {vf * horizon * std::cos(w.theta), vf * horizon * std::sin(w.theta)},
                                         horizon);

  // The margin guards against overshoot between samples. Speeds the boundary
  // conditions themselves demand are admissible by precondition.
  const double v_cap = std::max((1.0 - opt.bound_margin) * spec.v_max, std::min(spec.v_max, std::max(v0, vf)) + 1e-12);
  const double w_cap = (1.0 - opt.bound_margin) * spec.omega_max;
  const double dt = horizon / double(n);

  PlannedTrajectory traj;
  traj.dt = dt;
  traj.horizon = horizon;
  traj.spline = sp;
  traj.states.reserve(n + 1);
  traj.controls.reserve(n);
  for (std::size_t k = 0; k <= n; ++k) {
    const double s = double(k) / double(n);
    const auto kin = spline_kinematics(sp, s);
    if (kin.speed_sq < opt.degenerate_speed_sq) return Infeasible{InfeasibleReason::kDegenerateHeading, k};
    if (kin.v > v_cap) return Infeasible{InfeasibleReason::kSpeedBound, k};
    if (std::abs(kin.omega) > w_cap) return Infeasible{InfeasibleReason::kOmegaBound, k};
    const Vec2 p = sp.position(s);
    const RobotState z{p.x, p.y, wrap_angle(kin.heading)};
    // A heading swing larger than omega_max * dt between samples means the
    // turn rate exceeded its bound in between (e.g. a near-cusp).
    if (k > 0 && std::abs(wrap_angle(z.phi - traj.states.back().phi)) > spec.omega_max * dt) {
      return Infeasible{InfeasibleReason::kOmegaBound, k};
    }
    traj.states.push_back(z);
    if (k < n) traj.controls.push_back({kin.v, kin.omega});
  }
  traj.states.front() = RobotState{0.0, 0.0, 0.0};
  return traj;
}

/// Trajectory re-expressed in the world frame of `origin`.
inline PlannedTrajectory to_world(const PlannedTrajectory& ego, const RobotState& origin) {
  PlannedTrajectory out = ego;
  for (auto& z : out.states) z = pose_to_world(origin, z);
  return out;
}

/// Reference obtained by Euler-rolling the controls from `start`. It satisfies
/// the discrete dynamics exactly, which is what time-varying LQR linearizes.
inline PlannedTrajectory rollout(const PlannedTrajectory& traj, const RobotState& start) {
  PlannedTrajectory out = traj;
  out.states.assign(1, start);
  for (const auto& u : traj.controls) out.states.push_back(step(out.states.back(), u, traj.dt));
  return out;
}

}  // namespace wpnav
