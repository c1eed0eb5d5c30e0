// Copyright 2026 The lqrflow Authors
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


#include "lqrflow/config.hpp"

#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

#include "lqrflow/presets.hpp"

namespace lqrflow {
namespace {

std::string message_of(std::string_view text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

TEST(Config, MinimalPresetParses) {
  const ExperimentConfig cfg =
      parse_config(R"({"system": {"preset": "G1"}, "init": {"K": [[0,0,0,0,0],[0,0,0,0,0],[0,0,0,0,0]]}})");
  EXPECT_EQ(cfg.system.preset, "G1");
  EXPECT_EQ(cfg.init.kind, InitKind::kGain);
  const LtiSystem sys = cfg.system.build();
  EXPECT_EQ(sys.A(), presets::a_minus());
  EXPECT_EQ(sys.Q(), Mat::Identity(5, 5));
  EXPECT_EQ(cfg.seed(), 0u);
}

TEST(Config, CanonicalEchoRoundTrips) {
  const ExperimentConfig cfg = parse_config(R"({
    "system": {"A": [[0.5]], "B": [[1]], "Q": [[2]]},
    "init": {"remark2": {"eta": 0.5, "kappa": 3, "seed": 7}},
    "integrator": {"rtol": 1e-7, "t_end": 12.5},
    "output": {"directory": "out", "stride": 0.25, "formats": ["csv"]}
  })");
  EXPECT_EQ(cfg.init.kind, InitKind::kRemark2);
  EXPECT_EQ(cfg.init.remark2.kappa, 3);
  EXPECT_EQ(cfg.seed(), 7u);
  EXPECT_EQ(cfg.integrator.record_stride, 0.25);
  EXPECT_TRUE(cfg.output.csv);
  EXPECT_FALSE(cfg.output.summary);
  const std::string echo = config_to_json(cfg);
  const ExperimentConfig again = parse_config(echo);
  EXPECT_EQ(config_to_json(again), echo);
  EXPECT_EQ(again.system.build().Q()(0, 0), 2.0);
  EXPECT_EQ(again.system.build().R()(0, 0), 1.0);
  EXPECT_EQ(again.integrator.t_end, 12.5);
}

TEST(Config, PresetEchoSpellsOutWeights) {
  const ExperimentConfig cfg =
      parse_config(R"({"system": {"preset": "G2"}, "init": {"remark2": {"eta": 1}}})");
  const std::string echo = config_to_json(cfg);
  EXPECT_NE(echo.find("\"Sigma\""), std::string::npos);
  EXPECT_NE(echo.find("\"G2\""), std::string::npos);
}

TEST(Config, FactorsInit) {
  const ExperimentConfig cfg = parse_config(
      R"({"system": {"A": [[0]], "B": [[1]]}, "init": {"K1": [[1],[2]], "K2": [[0.5, 0.25]]}})");
  EXPECT_EQ(cfg.init.kind, InitKind::kFactors);
  EXPECT_EQ(cfg.init.k1.rows(), 2);
  EXPECT_EQ(cfg.init.k2(0, 1), 0.25);
}

TEST(Config, RaggedMatrixNamesTheRow) {
  const std::string msg = message_of(
      R"({"system": {"A": [[1, 0], [0]], "B": [[1], [1]]}, "init": {"K": [[1, 1]]}})");
  EXPECT_NE(msg.find("system.A"), std::string::npos) << msg;
  EXPECT_NE(msg.find("row 2"), std::string::npos) << msg;
}

TEST(Config, SyntaxErrorNamesTheLine) {
  const std::string msg = message_of("{\n  \"system\": {\"preset\": \"G1\"},\n  \"init\": ]\n}");
  EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
}

TEST(Config, SchemaViolations) {
  EXPECT_NE(message_of(R"({"system": {"preset": "G1"}, "init": {"K": [[1]]}, "extra": 1})")
                .find("extra"),
            std::string::npos);
  EXPECT_NE(message_of(R"({"system": {"preset": "G3"}, "init": {"remark2": {"eta": 1}}})"), "");
  // No init variant / two init variants.
  EXPECT_NE(message_of(R"({"system": {"preset": "G1"}, "init": {}})"), "");
  EXPECT_NE(message_of(R"({"system": {"preset": "G1"},
                          "init": {"K": [[1]], "remark2": {"eta": 1}}})"),
            "");
  // Preset and literals together.
  EXPECT_NE(message_of(R"({"system": {"preset": "G1", "A": [[1]]}, "init": {"K": [[1]]}})"), "");
  // Invalid integrator values.
  EXPECT_NE(message_of(R"({"system": {"preset": "G1"}, "init": {"remark2": {"eta": 1}},
                          "integrator": {"rtol": 2}})"),
            "");
  EXPECT_NE(message_of(R"({"system": {"preset": "G1"}, "init": {"remark2": {"eta": 1}},
                          "integrator": {"bogus": 2}})")
                .find("bogus"),
            std::string::npos);
  EXPECT_NE(message_of(R"([1, 2])"), "");
}

TEST(Config, LoadFromFile) {
  const auto path = std::filesystem::temp_directory_path() / "lqrflow_config_test.json";
  {
    std::ofstream out(path);
    out << R"({"system": {"preset": "G2"}, "init": {"remark2": {"eta": 2, "seed": 3}}})";
  }
  EXPECT_EQ(load_config(path).init.remark2.eta, 2.0);
  std::filesystem::remove(path);
  EXPECT_THROW(load_config(path), ConfigError);
}

}  // namespace
}  // namespace lqrflow
