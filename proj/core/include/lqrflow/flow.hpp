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

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "lqrflow/linalg.hpp"
#include "lqrflow/lqr.hpp"
#include "lqrflow/overparam.hpp"

namespace lqrflow {

/// Adaptive Dormand–Prince 5(4) settings.
struct IntegratorConfig {
  double rtol = 1e-8;
  double atol = 1e-10;
  double t_end = 50.0;
  double max_step = 0.1;
  double record_stride = 0.1;
  /// A run stops with guard_stop once the closed-loop spectral abscissa
  /// rises above -guard_margin.
  double guard_margin = 1e-8;

  /// Throws std::invalid_argument unless every field is positive and
  /// rtol, atol lie in (0, 1).
  void validate() const;
};

enum class TerminalStatus { kReachedTEnd, kConverged, kGuardStop, kIntegratorFailure };

std::string_view to_string(TerminalStatus status);
std::optional<TerminalStatus> parse_terminal_status(std::string_view text);

/// Gradient-flow solution sampled every `record_stride` time units.
///
/// `d_values` and `invariant_drift` are filled for factored runs only; d is
/// NaN when the factor shapes do not admit ‖K1 + K2ᵀ‖ (m ≠ n).
struct Trajectory {
  std::vector<double> times;
  std::vector<double> gaps;
  std::vector<double> grad_norms;
  std::vector<double> d_values;
  std::vector<double> invariant_drift;
  TerminalStatus status = TerminalStatus::kReachedTEnd;

  /// Parameters at the last accepted step (vec(K), or [vec(K1); vec(K2)]).
  Vec final_state;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;

  std::size_t size() const { return times.size(); }
  bool factored() const { return !invariant_drift.empty(); }
  double final_gap() const { return gaps.empty() ? 0.0 : gaps.back(); }
  double max_invariant_drift() const;
};

/// A cost over a gain matrix together with its admissibility measure.
struct GainModel {
  Eigen::Index inputs = 0;
  Eigen::Index states = 0;
  /// Throws UnstableGainError / InadmissibleGainError outside the domain.
  std::function<CostAndGradient(const Mat&)> evaluate;
  /// Closed-loop spectral abscissa; admissible gains give a negative value.
  std::function<double(const Mat&)> abscissa;
};

GainModel make_lqr_model(const LtiSystem& sys);
/// Closed forms for ẋ = a x + u; the gain is a 1×1 matrix.
GainModel make_scalar_model(const ScalarProblem& p);

/// Value and gradient of a flow objective over flattened parameters.
struct FlowEval {
  double cost = 0.0;
  Vec gradient;
};

/// Generic gradient flow ẏ = −∇f(y).
struct GradientFlowProblem {
  std::function<FlowEval(const Vec&)> evaluate;
  std::function<double(const Vec&)> abscissa;
  /// Called at every record point after times/gaps/grad_norms are appended.
  std::function<void(const Vec&, Trajectory&)> record_extra;
};

Trajectory integrate_gradient_flow(const GradientFlowProblem& problem, const Vec& y0,
                                   const IntegratorConfig& cfg, double j_min);

/// K̇ = −∇J(K).
Trajectory flow_standard(const GainModel& model, const Mat& k0, const IntegratorConfig& cfg,
                         double j_min);
Trajectory flow_standard(const LtiSystem& sys, const Mat& k0, const IntegratorConfig& cfg,
                         double j_min);
/// Scalar closed forms; j_min is taken from scalar_optimum.
Trajectory flow_standard(const ScalarProblem& p, double k0, const IntegratorConfig& cfg);

/// K̇1 = −K2ᵀ ∇J(K2K1), K̇2 = −∇J(K2K1) K1ᵀ.
Trajectory flow_factored(const GainModel& model, const FactoredGain& fg0,
                         const IntegratorConfig& cfg, double j_min);
Trajectory flow_factored(const LtiSystem& sys, const FactoredGain& fg0,
                         const IntegratorConfig& cfg, double j_min);
Trajectory flow_factored(const ScalarProblem& p, const FactoredGain& fg0,
                         const IntegratorConfig& cfg);

/// Splits a factored flow state back into (K1, K2) with the shapes of `like`.
FactoredGain unflatten_factors(const Vec& state, const FactoredGain& like);

/// k̇ = −f'(k) for f(k) = J(k²), requires a > 0 and k0² > a. The gap is
/// J(k²) − J(k*).
Trajectory scalar_flow_reparam(const ScalarProblem& p, double k0, const IntegratorConfig& cfg);

}  // namespace lqrflow
