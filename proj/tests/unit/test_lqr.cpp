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

#include "wpnav/lqr.hpp"
#include "wpnav/rng.hpp"

namespace wpnav {
namespace {

const VehicleSpec kSpec{};

PlannedTrajectory straight_ref(double v, double seconds, RobotState start = {}) {
  PlannedTrajectory t;
  t.dt = kSpec.dt;
  t.horizon = seconds;
  const auto n = static_cast<std::size_t>(std::lround(seconds / kSpec.dt));
  t.controls.assign(n, {v, 0.0});
  return rollout(t, start);
}

PlannedTrajectory curved_ref(const RobotState& start = {0.5, -0.3, 0.2}) {
  FitResult r = fit_spline({2.0, 0.9, 0.7}, {0.3, 0.0}, 6.0, kSpec, 0.3);
  return rollout(std::get<PlannedTrajectory>(r), start);
}

Eigen::Matrix<double, 2, 3> infinite_horizon_gain(const Linearization& lin, const LqrWeights& w) {
  Eigen::Matrix3d P = w.Q;
  for (int i = 0; i < 200000; ++i) {
    const Eigen::Matrix2d S = w.R + lin.B.transpose() * P * lin.B;
    const Eigen::Matrix3d next =
        w.Q + lin.A.transpose() * P * lin.A -
        lin.A.transpose() * P * lin.B * S.inverse() * lin.B.transpose() * P * lin.A;
    if ((next - P).cwiseAbs().maxCoeff() < 1e-14) {
      P = next;
      break;
    }
    P = next;
  }
  const Eigen::Matrix2d S = w.R + lin.B.transpose() * P * lin.B;
  return -S.inverse() * lin.B.transpose() * P * lin.A;
}

TEST(SolveTvlqr, FeedforwardIsZeroAndLengthsMatch) {
  const auto ref = curved_ref();
  const auto g = solve_tvlqr(ref, LqrWeights{}, kSpec);
  ASSERT_EQ(g.size(), ref.controls.size());
  ASSERT_EQ(g.k.size(), ref.controls.size());
  for (std::size_t t = 0; t < g.size(); ++t) {
    EXPECT_EQ(g.k[t], Eigen::Vector2d::Zero());
    EXPECT_TRUE(g.K[t].allFinite());
  }
}

TEST(SolveTvlqr, ExpensiveControlKillsGains) {
  LqrWeights w;
  w.R *= 1e9;
  const auto g = solve_tvlqr(curved_ref(), w, kSpec);
  for (const auto& K : g.K) EXPECT_LT(K.norm(), 1e-6);
}

TEST(SolveTvlqr, LongStraightReferenceConvergesToStationaryGain) {
  LqrWeights w;
  w.Q = Eigen::Matrix3d::Identity();
  w.R = Eigen::Matrix2d::Identity();
  w.Qf = Eigen::Matrix3d::Identity();
  const auto ref = straight_ref(0.3, 200.0);
  const auto g = solve_tvlqr(ref, w, kSpec);
  const auto K_inf = infinite_horizon_gain(linearize(ref.states[0], ref.controls[0], kSpec.dt), w);
  EXPECT_LT((g.K.front() - K_inf).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_LT((g.K[g.size() / 4] - K_inf).cwiseAbs().maxCoeff(), 1e-8);
  // the tail differs: it still feels the terminal weight
  EXPECT_GT((g.K.back() - K_inf).cwiseAbs().maxCoeff(), 1e-4);
}

TEST(SolveTvlqr, MirroredReferenceMirrorsGains) {
  const auto ref = curved_ref({0.0, 0.0, 0.0});
  PlannedTrajectory mirrored = ref;
  for (auto& z : mirrored.states) z = {z.x, -z.y, wrap_angle(-z.phi)};
  for (auto& u : mirrored.controls) u.omega = -u.omega;
  mirrored = rollout(mirrored, mirrored.states.front());
  const auto a = solve_tvlqr(ref, LqrWeights{}, kSpec);
  const auto b = solve_tvlqr(mirrored, LqrWeights{}, kSpec);
  const Eigen::Matrix3d M = Eigen::Vector3d(1, -1, -1).asDiagonal();
  const Eigen::Matrix2d N = Eigen::Vector2d(1, -1).asDiagonal();
  for (std::size_t t = 0; t < a.size(); ++t) {
    EXPECT_LT((b.K[t] - N * a.K[t] * M).cwiseAbs().maxCoeff(), 1e-9) << t;
  }
}

TEST(SolveTvlqr, RejectsInconsistentReference) {
  auto ref = curved_ref();
  ref.states[10].x += 1e-6;
  EXPECT_THROW(solve_tvlqr(ref, LqrWeights{}, kSpec), std::invalid_argument);
  auto short_ref = curved_ref();
  short_ref.states.pop_back();
  EXPECT_THROW(solve_tvlqr(short_ref, LqrWeights{}, kSpec), std::invalid_argument);
}

TEST(SolveTvlqr, RejectsBadWeights) {
  LqrWeights w;
  w.R(0, 0) = -1.0;
  EXPECT_THROW(solve_tvlqr(curved_ref(), w, kSpec), std::invalid_argument);
  LqrWeights asym;
  asym.Q(0, 1) = 0.5;
  EXPECT_THROW(solve_tvlqr(curved_ref(), asym, kSpec), std::invalid_argument);
}

TEST(FeedbackControl, ZeroErrorGivesReferenceControl) {
  const auto ref = curved_ref();
  const auto g = solve_tvlqr(ref, LqrWeights{}, kSpec);
  for (std::size_t t = 0; t < g.size(); t += 7) {
    EXPECT_EQ(feedback_control(ref.states[t], t, ref, g, kSpec), ref.controls[t]);
  }
  EXPECT_THROW(feedback_control(ref.states[0], g.size(), ref, g, kSpec), std::out_of_range);
}

TEST(FeedbackControl, HeadingErrorIsWrapped) {
  const RobotState ref_z{0, 0, -kPi + 0.01};
  const RobotState z{0, 0, kPi - 0.01};
  EXPECT_NEAR(tracking_error(z, ref_z).z(), -0.02, 1e-12);

  PlannedTrajectory ref = straight_ref(0.3, 1.0, ref_z);
  const auto g = solve_tvlqr(ref, LqrWeights{}, kSpec);
  const auto u = feedback_control(z, 0, ref, g, kSpec);
  const Eigen::Vector2d du = g.K[0] * Eigen::Vector3d(0, 0, -0.02);
  EXPECT_NEAR(u.v, 0.3 + du.x(), 1e-12);
  EXPECT_NEAR(u.omega, du.y(), 1e-12);
}

TEST(FeedbackControl, OutputIsAlwaysAdmissible) {
  const auto ref = curved_ref();
  const auto g = solve_tvlqr(ref, LqrWeights{}, kSpec);
  Rng rng(3);
  for (int i = 0; i < 2000; ++i) {
    const std::size_t t = static_cast<std::size_t>(rng.uniform(0.0, double(g.size()) - 1e-9));
    RobotState z = ref.states[t];
    z.x += rng.uniform(-5, 5);
    z.y += rng.uniform(-5, 5);
    z.phi = wrap_angle(z.phi + rng.uniform(-4, 4));
    EXPECT_TRUE(kSpec.admits(feedback_control(z, t, ref, g, kSpec)));
  }
}

TEST(Tracking, ExactStartReproducesReference) {
  const auto ref = curved_ref();
  const auto g = solve_tvlqr(ref, LqrWeights{}, kSpec);
  RobotState z = ref.states.front();
  for (std::size_t t = 0; t < g.size(); ++t) {
    z = step(z, feedback_control(z, t, ref, g, kSpec), ref.dt);
    const auto e = tracking_error(z, ref.states[t + 1]);
    ASSERT_LT(e.cwiseAbs().maxCoeff(), 1e-9) << t;
  }
}

TEST(Tracking, InitialPerturbationDecays) {
  for (const auto& ref : {curved_ref(), straight_ref(0.3, 6.0, {1, 1, 0.3})}) {
    const auto g = solve_tvlqr(ref, LqrWeights{}, kSpec);
    RobotState z = ref.states.front();
    z.x += 0.1;
    z.y += 0.1;
    z.phi += 0.1;
    const double e0 = tracking_error(z, ref.states.front()).norm();
    for (std::size_t t = 0; t < g.size(); ++t) z = step(z, feedback_control(z, t, ref, g, kSpec), ref.dt);
    const double e1 = tracking_error(z, ref.states.back()).norm();
    EXPECT_LT(e1, e0 / 5.0) << e1;
  }
}

}  // namespace
}  // namespace wpnav
