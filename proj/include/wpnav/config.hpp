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

#include <json.hpp>

#include <charconv>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "wpnav/expert.hpp"
#include "wpnav/grid.hpp"
#include "wpnav/lqr.hpp"
#include "wpnav/observation.hpp"
#include "wpnav/scenario.hpp"
#include "wpnav/simulator.hpp"

namespace wpnav {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LqrWeightConfig {
  double q_x = 1.0;
  double q_y = 1.0;
  double q_phi = 0.5;
  double r_v = 1.0;
  double r_omega = 1.0;
  double qf_scale = 10.0;

  LqrWeights weights() const {
    LqrWeights w;
    w.Q = Eigen::Vector3d(q_x, q_y, q_phi).asDiagonal();
    w.R = Eigen::Vector2d(r_v, r_omega).asDiagonal();
    w.Qf = qf_scale * w.Q;
    return w;
  }
};

struct SuiteConfig {
  int episodes = 10;  // per map
  std::uint64_t seed = 0;
  double min_goal_distance = 2.0;
};

/// Everything a CLI run needs. Every field has a default; `resolve()` fills in
/// the vehicle-dependent ones.
struct RunConfig {
  VehicleSpec vehicle;
  ExpertConfig expert;
  LqrWeightConfig lqr;
  ObservationConfig observation;
  MapSpec map;
  int map_count = 1;  // maps use seeds map.seed, map.seed + 1, ...
  SuiteConfig suite;
  std::vector<std::string> agents{"expert"};
  std::string execution = "open-loop";
  std::string disturbance = "none";
  double sigma_v = 0.05;
  double sigma_omega = 0.05;
  std::uint64_t disturbance_seed = 0;

  void resolve() { expert = expert.resolved(vehicle); }

  std::vector<MapSpec> map_specs() const {
    std::vector<MapSpec> out;
    for (int k = 0; k < map_count; ++k) {
      MapSpec m = map;
      m.seed = map.seed + static_cast<std::uint64_t>(k);
      out.push_back(m);
    }
    return out;
  }

  ScenarioConfig scenario() const { return {suite.min_goal_distance, 20000}; }

  ExecutionMode execution_mode() const {
    if (execution == "open-loop") return ExecutionMode::kOpenLoop;
    if (execution == "lqr") return ExecutionMode::kLqr;
    throw ConfigError("agents.execution: expected 'open-loop' or 'lqr', got '" + execution + "'");
  }

  DisturbanceModel disturbance_model() const {
    if (disturbance == "none") return DisturbanceModel::none();
    if (disturbance == "gaussian") return DisturbanceModel::gaussian(sigma_v, sigma_omega, disturbance_seed);
    throw ConfigError("disturbance.mode: expected 'none' or 'gaussian', got '" + disturbance + "'");
  }

  void validate() const {
    auto wrap = [](const std::string& section, auto&& fn) {
      try {
        fn();
      } catch (const std::invalid_argument& e) {
        throw ConfigError(section + ": " + e.what());
      } catch (const GridError& e) {
        throw ConfigError(e.what());
      }
    };
    wrap("vehicle", [&] { vehicle.validate(); });
    wrap("expert", [&] { expert.validate(); });
    wrap("map", [&] { map.validate(); });
    wrap("lqr", [&] { lqr.weights().validate(); });
    if (map_count < 1) throw ConfigError("map.count: must be >= 1");
    if (suite.episodes < 1) throw ConfigError("suite.episodes: must be >= 1");
    if (observation.patch_size < 1) throw ConfigError("sensor.patch_size: must be >= 1");
    if (observation.sensor.n_rays < 1) throw ConfigError("sensor.n_rays: must be >= 1");
    if (!(observation.sensor.max_range > 0.0)) throw ConfigError("sensor.max_range: must be > 0");
    if (agents.empty()) throw ConfigError("agents.list: no agents selected");
    for (const auto& a : agents) {
      if (a != "expert" && a != "mapping-memory" && a != "mapping-memoryless") {
        throw ConfigError("agents.list: unknown agent '" + a + "'");
      }
    }
    execution_mode();
    disturbance_model();
  }
};

namespace detail {

enum class Kind { kDouble, kInt, kUInt, kString, kStringList };

struct ConfigField {
  std::string key;  // section.name
  Kind kind;
  void* target;
};

inline std::vector<ConfigField> config_fields(RunConfig& c) {
  return {
      {"vehicle.v_max", Kind::kDouble, &c.vehicle.v_max},
      {"vehicle.omega_max", Kind::kDouble, &c.vehicle.omega_max},
      {"vehicle.dt", Kind::kDouble, &c.vehicle.dt},
      {"expert.lambda1", Kind::kDouble, &c.expert.lambda1},
      {"expert.lambda2", Kind::kDouble, &c.expert.lambda2},
      {"expert.planning_horizon", Kind::kDouble, &c.expert.planning_horizon},
      {"expert.control_horizon", Kind::kDouble, &c.expert.control_horizon},
      {"expert.r_min", Kind::kDouble, &c.expert.r_min},
      {"expert.r_max", Kind::kDouble, &c.expert.r_max},
      {"expert.n_r", Kind::kInt, &c.expert.n_r},
      {"expert.n_bearing", Kind::kInt, &c.expert.n_bearing},
      {"expert.n_theta", Kind::kInt, &c.expert.n_theta},
      {"expert.fov", Kind::kDouble, &c.expert.fov},
      {"expert.heading_window", Kind::kDouble, &c.expert.heading_window},
      {"expert.terminal_speed", Kind::kDouble, &c.expert.terminal_speed},
      {"expert.success_radius", Kind::kDouble, &c.expert.success_radius},
      {"expert.max_episode_time", Kind::kDouble, &c.expert.max_episode_time},
      {"expert.robot_radius", Kind::kDouble, &c.expert.robot_radius},
      {"expert.goal_clearance", Kind::kDouble, &c.expert.goal_clearance},
      {"lqr.q_x", Kind::kDouble, &c.lqr.q_x},
      {"lqr.q_y", Kind::kDouble, &c.lqr.q_y},
      {"lqr.q_phi", Kind::kDouble, &c.lqr.q_phi},
      {"lqr.r_v", Kind::kDouble, &c.lqr.r_v},
      {"lqr.r_omega", Kind::kDouble, &c.lqr.r_omega},
      {"lqr.qf_scale", Kind::kDouble, &c.lqr.qf_scale},
      {"sensor.fov", Kind::kDouble, &c.observation.sensor.fov},
      {"sensor.n_rays", Kind::kInt, &c.observation.sensor.n_rays},
      {"sensor.max_range", Kind::kDouble, &c.observation.sensor.max_range},
      {"sensor.patch_size", Kind::kInt, &c.observation.patch_size},
      {"map.seed", Kind::kUInt, &c.map.seed},
      {"map.count", Kind::kInt, &c.map_count},
      {"map.width", Kind::kDouble, &c.map.width},
      {"map.height", Kind::kDouble, &c.map.height},
      {"map.style", Kind::kString, nullptr},
      {"map.density", Kind::kDouble, &c.map.density},
      {"map.min_size", Kind::kDouble, &c.map.min_size},
      {"map.max_size", Kind::kDouble, &c.map.max_size},
      {"map.resolution", Kind::kDouble, &c.map.resolution},
      {"map.room_size", Kind::kDouble, &c.map.room_size},
      {"map.door_width", Kind::kDouble, &c.map.door_width},
      {"map.wall_thickness", Kind::kDouble, &c.map.wall_thickness},
      {"suite.episodes", Kind::kInt, &c.suite.episodes},
      {"suite.seed", Kind::kUInt, &c.suite.seed},
      {"suite.min_goal_distance", Kind::kDouble, &c.suite.min_goal_distance},
      {"agents.list", Kind::kStringList, &c.agents},
      {"agents.execution", Kind::kString, &c.execution},
      {"disturbance.mode", Kind::kString, &c.disturbance},
      {"disturbance.sigma_v", Kind::kDouble, &c.sigma_v},
      {"disturbance.sigma_omega", Kind::kDouble, &c.sigma_omega},
      {"disturbance.seed", Kind::kUInt, &c.disturbance_seed},
  };
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::string unquote(const std::string& s) {
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

inline std::vector<std::string> parse_list(std::string s) {
  s = trim(s);
  if (!s.empty() && s.front() == '[') {
    if (s.back() != ']') throw ConfigError("unterminated list '" + s + "'");
    s = s.substr(1, s.size() - 2);
  } else {
    s = unquote(s);
  }
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = unquote(trim(item));
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

/// Shortest text that reads back to the same double.
inline std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

}  // namespace detail

/// Sets one `section.key` from its textual value.
inline void set_config_value(RunConfig& c, const std::string& key, const std::string& raw) {
  const std::string value = detail::trim(raw);
  for (const auto& f : detail::config_fields(c)) {
    if (f.key != key) continue;
    try {
      std::size_t used = 0;
      const std::string v = detail::unquote(value);
      switch (f.kind) {
        case detail::Kind::kDouble:
          *static_cast<double*>(f.target) = std::stod(v, &used);
          break;
        case detail::Kind::kInt:
          *static_cast<int*>(f.target) = std::stoi(v, &used);
          break;
        case detail::Kind::kUInt:
          if (!v.empty() && v.front() == '-') throw std::invalid_argument("negative");
          *static_cast<std::uint64_t*>(f.target) = std::stoull(v, &used);
          break;
        case detail::Kind::kString:
          used = v.size();
          if (key == "map.style") {
            c.map.style = parse_obstacle_style(v);
          } else {
            *static_cast<std::string*>(f.target) = v;
          }
          break;
        case detail::Kind::kStringList:
          *static_cast<std::vector<std::string>*>(f.target) = detail::parse_list(value);
          return;
      }
      if (used != v.size()) throw std::invalid_argument("trailing characters");
    } catch (const GridError&) {
      throw ConfigError("invalid value for '" + key + "': '" + value + "'");
    } catch (const std::logic_error&) {
      throw ConfigError("invalid value for '" + key + "': '" + value + "'");
    }
    return;
  }
  throw ConfigError("unknown config key '" + key + "'");
}

inline std::string get_config_value(const RunConfig& config, const std::string& key) {
  auto& c = const_cast<RunConfig&>(config);
  for (const auto& f : detail::config_fields(c)) {
    if (f.key != key) continue;
    switch (f.kind) {
      case detail::Kind::kDouble: return detail::format_double(*static_cast<const double*>(f.target));
      case detail::Kind::kInt: return std::to_string(*static_cast<const int*>(f.target));
      case detail::Kind::kUInt: return std::to_string(*static_cast<const std::uint64_t*>(f.target));
      case detail::Kind::kString:
        return key == "map.style" ? to_string(c.map.style) : *static_cast<const std::string*>(f.target);
      case detail::Kind::kStringList: {
        std::string out;
        for (const auto& s : *static_cast<const std::vector<std::string>*>(f.target)) out += (out.empty() ? "" : ",") + s;
        return out;
      }
    }
  }
  throw ConfigError("unknown config key '" + key + "'");
}

inline std::vector<std::string> config_keys() {
  RunConfig c;
  std::vector<std::string> out;
  for (const auto& f : detail::config_fields(c)) out.push_back(f.key);
  return out;
}

/// Parses the `[section]` / `key = value` document. Unknown keys are errors.
inline void apply_config_text(RunConfig& c, std::istream& is, const std::string& source = "<config>") {
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(lineno) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + "malformed section header");
      section = detail::trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string full = section.empty() ? key : section + "." + key;
    try {
      set_config_value(c, full, line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
}

inline RunConfig load_config(const std::string& path) {
  RunConfig c;
  std::ifstream is(path);
  if (!is) throw ConfigError(path + ": cannot open config file");
  apply_config_text(c, is, path);
  return c;
}

/// `section.key = value` lines for every field, grouped by section.
inline void write_config_text(std::ostream& os, const RunConfig& c) {
  std::string section;
  for (const auto& key : config_keys()) {
    const auto dot = key.find('.');
    const std::string sec = key.substr(0, dot);
    if (sec != section) {
      os << (section.empty() ? "" : "\n") << '[' << sec << "]\n";
      section = sec;
    }
    const std::string value = get_config_value(c, key);
    const bool quoted = key == "map.style" || key == "agents.execution" || key == "disturbance.mode";
    if (key == "agents.list") {
      os << key.substr(dot + 1) << " = [";
      const auto items = detail::parse_list(value);
      for (std::size_t k = 0; k < items.size(); ++k) os << (k ? ", " : "") << '"' << items[k] << '"';
      os << "]\n";
    } else {
      os << key.substr(dot + 1) << " = " << (quoted ? "\"" + value + "\"" : value) << '\n';
    }
  }
}

/// Typed JSON snapshot; `config_from_json` inverts it exactly.
inline nlohmann::ordered_json config_to_json(const RunConfig& config) {
  auto& c = const_cast<RunConfig&>(config);
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& f : detail::config_fields(c)) {
    const auto dot = f.key.find('.');
    auto& sec = j[f.key.substr(0, dot)];
    const std::string name = f.key.substr(dot + 1);
    switch (f.kind) {
      case detail::Kind::kDouble: sec[name] = *static_cast<const double*>(f.target); break;
      case detail::Kind::kInt: sec[name] = *static_cast<const int*>(f.target); break;
      case detail::Kind::kUInt: sec[name] = *static_cast<const std::uint64_t*>(f.target); break;
      case detail::Kind::kString: sec[name] = get_config_value(c, f.key); break;
      case detail::Kind::kStringList: sec[name] = *static_cast<const std::vector<std::string>*>(f.target); break;
    }
  }
  return j;
}

inline RunConfig config_from_json(const nlohmann::ordered_json& j) {
  RunConfig c;
  for (const auto& f : detail::config_fields(c)) {
    const auto dot = f.key.find('.');
    const auto& sec = j.at(f.key.substr(0, dot));
    const auto& v = sec.at(f.key.substr(dot + 1));
    switch (f.kind) {
      case detail::Kind::kDouble: *static_cast<double*>(f.target) = v.get<double>(); break;
      case detail::Kind::kInt: *static_cast<int*>(f.target) = v.get<int>(); break;
      case detail::Kind::kUInt: *static_cast<std::uint64_t*>(f.target) = v.get<std::uint64_t>(); break;
      case detail::Kind::kString: set_config_value(c, f.key, v.get<std::string>()); break;
      case detail::Kind::kStringList:
        *static_cast<std::vector<std::string>*>(f.target) = v.get<std::vector<std::string>>();
        break;
    }
  }
  return c;
}

}  // namespace wpnav
