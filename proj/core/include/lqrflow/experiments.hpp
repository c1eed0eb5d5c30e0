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


// Experiment orchestration: the G1 / G2 comparisons, the near-saddle run and
// the scalar demonstrations. Every leg writes <stem>.csv and
// <stem>.summary.json; an empty output directory disables writing.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "lqrflow/config.hpp"
#include "lqrflow/flow.hpp"
#include "lqrflow/lqr.hpp"
#include "lqrflow/trajectory_io.hpp"

namespace lqrflow {

inline constexpr std::uint64_t kDefaultSeed = 20260101;

struct LegResult {
  std::string name;
  Trajectory trajectory;
  RunSummary summary;
};

struct ComparisonResult {
  LegResult standard;
  LegResult factored;
};

enum class FigVariant { kStable, kUnstable };

/// Integrator defaults for the preset comparisons (t_end = 20).
IntegratorConfig comparison_integrator();
/// Integrator defaults for the near-saddle run (t_end = 200).
IntegratorConfig saddle_integrator();

/// Standard flow from the preset's printed initial gain against the factored
/// flow (κ = 10) from a seeded full-rank factorization of the same gain, so
/// both legs start at the same cost. Legs run concurrently. Stems:
/// "<fig>_standard", "<fig>_factored" with fig = fig2a (G1) or fig2b (G2).
/// Throws NumericalError if the printed gain does not stabilize the preset.
ComparisonResult run_fig_comparison(FigVariant variant, const std::filesystem::path& out_dir,
                                    std::uint64_t seed = kDefaultSeed,
                                    const IntegratorConfig& cfg = comparison_integrator());

/// Factored flow on G1 from the balanced factorization of
/// K0 = k0_scale · N (N a seeded standard-normal 3×5 matrix), against the
/// standard flow from the same K0. Stems "fig3_standard", "fig3_factored".
ComparisonResult run_saddle(const std::filesystem::path& out_dir, double k0_scale = 1e-3,
                            std::uint64_t seed = kDefaultSeed,
                            const IntegratorConfig& cfg = saddle_integrator());

struct ScalarDemoResult {
  /// "scalar_standard", "scalar_factored_c0", "scalar_factored_c4", and
  /// "scalar_reparam" when a > 0.
  std::vector<LegResult> legs;
  /// CSV "c,gamma,mu_gamma,mu_lower_bound".
  std::string mu_table_csv;
};

/// Scalar flows from matched initial cost J(10³ k*): standard, factored with
/// c = 0 and c = 4, and (for a > 0) the reparameterized flow, plus the
/// μ_γ table written to mu_table.csv.
ScalarDemoResult run_scalar_demo(const ScalarProblem& p, const std::filesystem::path& out_dir);

/// μ_γ / μ̲ table over c ∈ {0, 0.5, 1, 2, 4, 8, 16} and
/// γ ∈ max(0, 4a) + {0.5, 1, 2, 4, 10}.
std::string mu_table_csv(const ScalarProblem& p);

/// Runs a configuration: an explicit K gives a standard leg; factors or a
/// remark2 block give a factored leg plus the standard leg from the composed
/// gain (equal initial cost). Stems "standard" and "factored".
std::vector<LegResult> run_config(const ExperimentConfig& config,
                                  const std::filesystem::path& out_dir);

}  // namespace lqrflow
