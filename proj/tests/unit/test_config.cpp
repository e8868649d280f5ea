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

#include <sstream>

#include "wpnav/config.hpp"

namespace wpnav {
namespace {

TEST(Config, Defaults) {
  const RunConfig c;
  EXPECT_EQ(get_config_value(c, "vehicle.v_max"), "0.6");
  EXPECT_EQ(get_config_value(c, "vehicle.omega_max"), "1.1");
  EXPECT_EQ(get_config_value(c, "vehicle.dt"), "0.05");
  EXPECT_EQ(get_config_value(c, "expert.lambda1"), "0.3");
  EXPECT_EQ(get_config_value(c, "expert.planning_horizon"), "6");
  EXPECT_EQ(get_config_value(c, "expert.control_horizon"), "1.5");
  EXPECT_EQ(get_config_value(c, "expert.success_radius"), "0.3");
  EXPECT_EQ(get_config_value(c, "sensor.n_rays"), "128");
  EXPECT_EQ(get_config_value(c, "sensor.patch_size"), "64");
  EXPECT_EQ(get_config_value(c, "agents.list"), "expert");
  EXPECT_EQ(get_config_value(c, "map.style"), "random-boxes");
  EXPECT_NO_THROW(c.validate());
}

TEST(Config, TextRoundTrip) {
  RunConfig c;
  set_config_value(c, "map.style", "rooms-and-corridors");
  set_config_value(c, "expert.lambda2", "2.5");
  set_config_value(c, "agents.list", "[\"expert\", \"mapping-memory\"]");
  set_config_value(c, "map.seed", "18446744073709551615");
  set_config_value(c, "disturbance.mode", "gaussian");
  std::ostringstream os;
  write_config_text(os, c);
  RunConfig back;
  std::istringstream is(os.str());
  apply_config_text(back, is);
  for (const auto& key : config_keys()) EXPECT_EQ(get_config_value(back, key), get_config_value(c, key)) << key;
  EXPECT_EQ(back.expert.fov, c.expert.fov);
  EXPECT_EQ(back.agents, (std::vector<std::string>{"expert", "mapping-memory"}));
}

TEST(Config, JsonRoundTrip) {
  RunConfig c;
  c.resolve();
  c.expert.lambda2 = 0.1 + 0.2;
  const RunConfig back = config_from_json(config_to_json(c));
  EXPECT_EQ(config_to_json(back).dump(), config_to_json(c).dump());
  EXPECT_EQ(back.expert.lambda2, c.expert.lambda2);
}

TEST(Config, FileSyntax) {
  RunConfig c;
  std::istringstream is(
      "# comment\n"
      "[map]\n"
      "density = 0.2   # inline\n"
      "count = 3\n"
      "\n"
      "[agents]\n"
      "list = expert, mapping-memoryless\n");
  apply_config_text(c, is, "x.toml");
  EXPECT_EQ(c.map.density, 0.2);
  EXPECT_EQ(c.map_count, 3);
  EXPECT_EQ(c.agents.size(), 2u);
}

TEST(Config, ErrorsNameTheKeyAndLine) {
  RunConfig c;
  std::istringstream is("[map]\nwidth = 5\ndenisty = 0.2\n");
  try {
    apply_config_text(c, is, "bad.toml");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_STREQ(e.what(), "bad.toml:3: unknown config key 'map.denisty'");
  }
  EXPECT_THROW(set_config_value(c, "map.width", "wide"), ConfigError);
  EXPECT_THROW(set_config_value(c, "map.width", "5m"), ConfigError);
  EXPECT_THROW(set_config_value(c, "map.seed", "-1"), ConfigError);
  EXPECT_THROW(set_config_value(c, "map.style", "caves"), ConfigError);
  std::istringstream bad_header("[map\n");
  EXPECT_THROW(apply_config_text(c, bad_header), ConfigError);
  std::istringstream no_eq("[map]\nwidth\n");
  EXPECT_THROW(apply_config_text(c, no_eq), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/wpnav.toml"), ConfigError);
}

TEST(Config, ValidationMessages) {
  auto message = [](auto&& mutate) {
    RunConfig c;
    mutate(c);
    try {
      c.validate();
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_EQ(message([](RunConfig& c) { c.map.resolution = -1; }), "map spec: 'resolution' must be > 0");
  EXPECT_EQ(message([](RunConfig& c) { c.agents.clear(); }), "agents.list: no agents selected");
  EXPECT_EQ(message([](RunConfig& c) { c.agents = {"cnn"}; }), "agents.list: unknown agent 'cnn'");
  EXPECT_NE(message([](RunConfig& c) { c.expert.control_horizon = 9; }).find("expert"), std::string::npos);
  EXPECT_NE(message([](RunConfig& c) { c.execution = "pid"; }).find("agents.execution"), std::string::npos);
  EXPECT_NE(message([](RunConfig& c) { c.lqr.r_v = 0; }).find("lqr"), std::string::npos);
}

TEST(Config, Derived) {
  RunConfig c;
  c.map.seed = 10;
  c.map_count = 3;
  const auto specs = c.map_specs();
  ASSERT_EQ(specs.size(), 3u);
  EXPECT_EQ(specs[2].seed, 12u);
  c.disturbance = "gaussian";
  c.sigma_v = 0.1;
  EXPECT_EQ(c.disturbance_model().mode, DisturbanceModel::Mode::kGaussianControl);
  EXPECT_EQ(c.disturbance_model().sigma_v, 0.1);
  const LqrWeights w = c.lqr.weights();
  EXPECT_EQ(w.Qf(2, 2), 5.0);
}

}  // namespace
}  // namespace wpnav
