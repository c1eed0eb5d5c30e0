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


// Experiment configuration documents (JSON):
//
//   {
//     "system": {"preset": "G1"}                       // or "A", "B" literals
//               + optional "Q", "R", "Sigma" (default identity),
//     "init": {"K": [[...], ...]}                      // exactly one of
//           | {"K1": [[...]], "K2": [[...]]}
//           | {"remark2": {"eta": 1.0, "s0": 1.05, "growth": 1.25,
//                          "kappa": 10, "seed": 7}},
//     "integrator": {"rtol": 1e-8, "atol": 1e-10, "t_end": 20, "max_step": 0.1,
//                    "record_stride": 0.1, "guard_margin": 1e-8},
//     "output": {"directory": "out", "stride": 0.1, "formats": ["csv", "summary"]}
//   }
//
// Matrices are arrays of rows. Unknown keys are rejected.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "lqrflow/flow.hpp"
#include "lqrflow/linalg.hpp"
#include "lqrflow/lqr.hpp"
#include "lqrflow/overparam.hpp"

namespace lqrflow {

/// Syntax or schema error; the message names the line or the field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SystemBlock {
  /// "G1", "G2" or empty when A and B are given as literals.
  std::string preset;
  std::optional<Mat> a;
  std::optional<Mat> b;
  std::optional<Mat> q;
  std::optional<Mat> r;
  std::optional<Mat> sigma;

  /// Missing Q, R, Σ default to identities of the matching size.
  LtiSystem build() const;
};

enum class InitKind { kGain, kFactors, kRemark2 };

struct Remark2Block {
  double eta = 1.0;
  double s0 = 1.05;
  double growth = 1.25;
  Eigen::Index kappa = 10;
  std::uint64_t seed = 0;
};

struct InitBlock {
  InitKind kind = InitKind::kGain;
  Mat k;
  Mat k1;
  Mat k2;
  Remark2Block remark2;
};

struct OutputBlock {
  std::string directory;
  /// Recording stride; when given it overrides integrator.record_stride.
  std::optional<double> stride;
  bool csv = true;
  bool summary = true;
};

struct ExperimentConfig {
  SystemBlock system;
  InitBlock init;
  IntegratorConfig integrator;
  OutputBlock output;

  /// Seed recorded in summaries (the remark2 seed when present).
  std::uint64_t seed() const;
};

ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical document: every field explicit, preset weights spelled out.
/// parse_config(config_to_json(c)) reproduces c exactly.
std::string config_to_json(const ExperimentConfig& config);

}  // namespace lqrflow
