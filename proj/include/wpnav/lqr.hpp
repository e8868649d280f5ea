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

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "wpnav/dynamics.hpp"
#include "wpnav/spline.hpp"

namespace wpnav {

using Matrix23 = Eigen::Matrix<double, 2, 3>;

struct LqrWeights {
  Eigen::Matrix3d Q = Eigen::Vector3d(1.0, 1.0, 0.5).asDiagonal();
  Eigen::Matrix2d R = Eigen::Matrix2d::Identity();
  Eigen::Matrix3d Qf = 10.0 * Eigen::Vector3d(1.0, 1.0, 0.5).asDiagonal().toDenseMatrix();

  void validate() const {
    const double tol = 1e-12;
    if (!Q.isApprox(Q.transpose(), tol) || !R.isApprox(R.transpose(), tol) ||
        !Qf.isApprox(Qf.transpose(), tol)) {
      throw std::invalid_argument("LqrWeights: Q, R and Qf must be symmetric");
    }
    if (Eigen::LLT<Eigen::Matrix2d>(R).info() != Eigen::Success) {
      throw std::invalid_argument("LqrWeights: R must be positive definite");
    }
  }
};

/// Per-step affine feedback u = u_ref + k + K e.
struct LqrGains {
  std::vector<Eigen::Vector2d> k;
  std::vector<Matrix23> K;

  std::size_t size() const { return K.size(); }
};

/// Tracking error with the heading difference wrapped to (-pi, pi].
inline Eigen::Vector3d tracking_error(const RobotState& z, const RobotState& ref) {
  return {z.x - ref.x, z.y - ref.y, wrap_angle(z.phi - ref.phi)};
}

/// Largest one-step deviation between the reference states and the discrete
/// dynamics driven by the reference controls.
inline double dynamics_residual(const PlannedTrajectory& ref) {
  double worst = 0.0;
  for (std::size_t t = 0; t < ref.controls.size(); ++t) {
    const auto e = tracking_error(ref.states[t + 1], step(ref.states[t], ref.controls[t], ref.dt));
    worst = std::max(worst, e.cwiseAbs().maxCoeff());
  }
  return worst;
}

/// Backward Riccati recursion around a world-frame reference.
///
/// The reference must satisfy the discrete dynamics it is linearized with
/// (see `rollout`); the affine term of the error dynamics then vanishes and
/// every feedforward k_t is zero.
inline LqrGains solve_tvlqr(const PlannedTrajectory& ref, const LqrWeights& weights,
                            const VehicleSpec& spec) {
  weights.validate();
  spec.validate();
  const std::size_t n = ref.controls.size();
  if (ref.states.size() != n + 1) {
    throw std::invalid_argument("solve_tvlqr: reference needs one more state than controls");
  }
  if (const double r = dynamics_residual(ref); r > 1e-9) {
    throw std::invalid_argument("solve_tvlqr: reference is not dynamically consistent (residual " +
                                std::to_string(r) + ")");
  }
  LqrGains gains;
  gains.k.assign(n, Eigen::Vector2d::Zero());
  gains.K.resize(n);
  Eigen::Matrix3d P = weights.Qf;
  for (std::size_t t = n; t-- > 0;) {
    const auto lin = linearize(ref.states[t], ref.controls[t], ref.dt);
    const Eigen::Matrix2d S = weights.R + lin.B.transpose() * P * lin.B;
    Eigen::LDLT<Eigen::Matrix2d> ldlt(S);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
      throw std::runtime_error("solve_tvlqr: R + B'PB is not positive definite");
    }
    const Matrix23 K = -ldlt.solve(lin.B.transpose() * P * lin.A);
    gains.K[t] = K;
    P = weights.Q + lin.A.transpose() * P * (lin.A + lin.B * K);
    P = 0.5 * (P + P.transpose()).eval();
  }
  return gains;
}

inline ControlInput feedback_control(const RobotState& z, std::size_t t, const PlannedTrajectory& ref,
                                     const LqrGains& gains, const VehicleSpec& spec) {
  if (t >= gains.size() || t >= ref.controls.size()) {
    throw std::out_of_range("feedback_control: time index beyond reference horizon");
  }
  const Eigen::Vector2d du = gains.k[t] + gains.K[t] * tracking_error(z, ref.states[t]);
  const ControlInput& u = ref.controls[t];
  return clamp({u.v + du.x(), u.omega + du.y()}, spec);
}

}  // namespace wpnav
