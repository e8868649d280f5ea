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

#include <optional>
#include <string>
#include <vector>

#include "wpnav/expert.hpp"

namespace wpnav {

enum class ExecutionMode { kOpenLoop, kLqr };

inline const char* to_string(ExecutionMode m) { return m == ExecutionMode::kOpenLoop ? "open-loop" : "lqr"; }

/// Everything an agent may look at when it replans.
struct AgentContext {
  const EpisodeSpec& episode;
  const ExpertConfig& cfg;      // resolved
  const EpisodeFields& truth;   // privileged; only the expert reads it
  RobotState state;
  ControlInput control;         // last nominal command
  double time = 0.0;
};

/// Nominal commands for one control horizon.
struct Segment {
  std::vector<ControlInput> controls;
  std::optional<Waypoint> waypoint;  // ego frame of the replan pose, when one was chosen
  bool failed = false;               // agent gives up; the episode ends in Failure
};

class Agent {
 public:
  virtual ~Agent() = default;
  virtual std::string name() const = 0;
  /// Called once before an episode starts.
  virtual void reset(const EpisodeSpec& /*episode*/) {}
  virtual Segment act(const AgentContext& ctx) = 0;
};

/// Zero commands for one control horizon.
inline Segment hold_segment(std::size_t n) { return {std::vector<ControlInput>(n), std::nullopt, false}; }

/// Receding-horizon expert with access to the true fields.
class ExpertAgent final : public Agent {
 public:
  explicit ExpertAgent(PlanFn planner = default_planner()) : planner_(std::move(planner)) {}

  std::string name() const override { return "expert"; }

  Segment act(const AgentContext& ctx) override {
    const auto plan = planner_(ctx.state, ctx.control, ctx.truth, ctx.cfg, ctx.episode.vehicle);
    const auto* choice = std::get_if<PlanChoice>(&plan);
    if (choice == nullptr) return {{}, std::nullopt, true};
    const std::size_t n = control_steps(ctx.cfg, ctx.episode.vehicle);
    return {{choice->trajectory.controls.begin(), choice->trajectory.controls.begin() + static_cast<std::ptrdiff_t>(n)},
            choice->waypoint,
            false};
  }

 private:
  PlanFn planner_;
};

}  // namespace wpnav
