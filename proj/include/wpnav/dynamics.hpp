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

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wpnav {

inline constexpr double kPi = std::numbers::pi;

/// Wraps an angle to (-pi, pi].
inline double wrap_angle(double a) {
  double r = std::remainder(a, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(const Vec2&, const Vec2&) = default;
  double norm() const { return std::hypot(x, y); }
};

/// Planar pose. `phi` is kept in (-pi, pi] by every operation that writes it.
struct RobotState {
  double x = 0.0;
  double y = 0.0;
  double phi = 0.0;

  Vec2 position() const { return {x, y}; }
  friend bool operator==(const RobotState&, const RobotState&) = default;
};

struct ControlInput {
  double v = 0.0;      // m/s
  double omega = 0.0;  // rad/s

  friend bool operator==(const ControlInput&, const ControlInput&) = default;
};

struct VehicleSpec {
  double v_max = 0.6;
  double omega_max = 1.1;
  double dt = 0.05;

  void validate() const {
    if (!(v_max > 0.0) || !(omega_max > 0.0) || !(dt > 0.0)) {
      throw std::invalid_argument("VehicleSpec: v_max, omega_max and dt must be > 0");
    }
  }

  bool admits(const ControlInput& u) const {
    return u.v >= 0.0 && u.v <= v_max && std::abs(u.omega) <= omega_max;
  }
};

/// One explicit Euler step of the unicycle model.
inline RobotState step(const RobotState& z, const ControlInput& u, double dt) {
  return {z.x + dt * u.v * std::cos(z.phi), z.y + dt * u.v * std::sin(z.phi),
          wrap_angle(z.phi + dt * u.omega)};
}

inline ControlInput clamp(const ControlInput& u, const VehicleSpec& spec) {
  return {std::clamp(u.v, 0.0, spec.v_max),
          std::clamp(u.omega, -spec.omega_max, spec.omega_max)};
}

struct Linearization {
  Eigen::Matrix3d A;
  Eigen::Matrix<double, 3, 2> B;
};

/// Jacobians of `step` with respect to state and control at (z_ref, u_ref).
inline Linearization linearize(const RobotState& z_ref, const ControlInput& u_ref,
                               double dt) {
  const double c = std::cos(z_ref.phi);
  const double s = std::sin(z_ref.phi);
  Linearization lin;
  lin.A << 1.0, 0.0, -dt * u_ref.v * s,
           0.0, 1.0, dt * u_ref.v * c,
           0.0, 0.0, 1.0;
  lin.B << dt * c, 0.0,
           dt * s, 0.0,
           0.0, dt;
  return lin;
}

// Frame helpers. The ego frame of `pose` has the robot at the origin facing +x.

inline Vec2 ego_to_world(const RobotState& pose, Vec2 p) {
  const double c = std::cos(pose.phi);
  const double s = std::sin(pose.phi);
  return {pose.x + c * p.x - s * p.y, pose.y + s * p.x + c * p.y};
}

inline Vec2 world_to_ego(const RobotState& pose, Vec2 p) {
  const double c = std::cos(pose.phi);
  const double s = std::sin(pose.phi);
  const double dx = p.x - pose.x;
  const double dy = p.y - pose.y;
  return {c * dx + s * dy, -s * dx + c * dy};
}

inline RobotState pose_to_world(const RobotState& pose, const RobotState& z) {
  const Vec2 p = ego_to_world(pose, Vec2{z.x, z.y});
  return {p.x, p.y, wrap_angle(pose.phi + z.phi)};
}

}  // namespace wpnav
