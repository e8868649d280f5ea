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

#include <memory>
#include <string>
#include <vector>

#include "wpnav/baselines.hpp"
#include "wpnav/config.hpp"

namespace wpnav {

/// Simulator entry for one agent name from the config.
inline AgentEntry make_agent_entry(const std::string& name, const RunConfig& config) {
  AgentEntry e;
  e.name = name;
  e.options.mode = config.execution_mode();
  e.options.weights = config.lqr.weights();
  e.options.disturbance = config.disturbance_model();
  const SensorConfig sensor = config.observation.sensor;
  if (name == "expert") {
    e.make = [] { return std::make_unique<ExpertAgent>(); };
  } else if (name == "mapping-memory") {
    e.make = [sensor] { return std::make_unique<MappingAgent>(MappingVariant::kMemory, sensor); };
  } else if (name == "mapping-memoryless") {
    e.make = [sensor] { return std::make_unique<MappingAgent>(MappingVariant::kMemoryless, sensor); };
  } else {
    throw ConfigError("agents.list: unknown agent '" + name + "'");
  }
  return e;
}

inline std::vector<AgentEntry> make_agent_entries(const RunConfig& config) {
  std::vector<AgentEntry> out;
  for (const auto& name : config.agents) out.push_back(make_agent_entry(name, config));
  return out;
}

/// `suite.episodes` episodes on each configured map; map k draws with seed
/// suite.seed + k. `config` must be resolved.
inline std::vector<EpisodeSpec> sample_suite(const RunConfig& config,
                                             const std::vector<std::shared_ptr<const OccupancyGrid>>& maps) {
  std::vector<EpisodeSpec> specs;
  for (std::size_t k = 0; k < maps.size(); ++k) {
    auto eps = sample_episodes(maps[k], static_cast<std::size_t>(config.suite.episodes), config.suite.seed + k,
                               config.vehicle, config.expert, config.scenario());
    for (auto& e : eps) specs.push_back(std::move(e));
  }
  return specs;
}

}  // namespace wpnav
