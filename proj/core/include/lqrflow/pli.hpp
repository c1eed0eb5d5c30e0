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

// Polyak–Łojasiewicz rate formulas for the scalar overparameterized LQR,
// Monte-Carlo certification of the inequality, saturated-PŁI evidence for the
// standard formulation, and the GECS / GLECS trajectory classifier.
//
// Notation: 𝐤 = k2 k1 is the composed gain, θ = J(𝐤) − J(k*) the gap,
// ℓ = 1 / (2 (𝐤 − a)) and ε = 𝐤 − k*. With these, θ = r ℓ ε² and
// ∇J = 2 r ℓ ε (1 − ℓ ε), so the factored flow satisfies the exact identity
//
//   ‖∇L‖² / θ = ∇J² (‖k1‖² + ‖k2‖²) / θ = 4 ϑ₁(ε) ϑ₂(𝐤),
//
// with ϑ₁ = r (ℓ²ε² − 2ℓε + 1) and ϑ₂ = ℓ sqrt(c + 4𝐤²).

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lqrflow/flow.hpp"
#include "lqrflow/lqr.hpp"

namespace lqrflow {

/// γ does not satisfy γ > max(0, 4a).
class HypothesisError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// c̃ = a γ² / (a − γ): the imbalance at which the a < 0 rate switches
/// branches. Positive for a < 0 < γ.
double c_tilde(const ScalarProblem& p, double gamma);

/// k̲ = (γ² − c) / (4γ): smallest composed gain with d ≥ γ.
double k_lower(double gamma, double c);

/// Piecewise rate μ_γ(c, γ):
///   a ≥ 0:         (r/4) sqrt((4c + γ²) / (γ − 4a)²)
///   a < 0, c < c̃:  (r/4) sqrt((γ² + c)² / (γ² − c − 4aγ)²)
///   a < 0, c ≥ c̃:  (r/4) sqrt(c / (4a² + c))
/// Throws HypothesisError unless γ > max(0, 4a), std::invalid_argument for c < 0.
double mu_gamma(const ScalarProblem& p, double c, double gamma);

/// μ̲ = (r/4) min{1, |γ / (γ − 4a)|}, the smallest μ_γ over c ≥ 0.
double mu_lower_bound(const ScalarProblem& p, double gamma);

/// True iff μ_γ(p, ·, γ) is non-decreasing along `c_grid` (1e-12 slack).
bool monotonicity_check(const ScalarProblem& p, double gamma, std::span<const double> c_grid);

struct RatioComponents {
  double theta1 = 0.0;  ///< r (ℓ²ε² − 2ℓε + 1)
  double theta2 = 0.0;  ///< ℓ sqrt(c + 4𝐤²)
};

/// ϑ₁ and ϑ₂ at composed gain k > a with imbalance c.
RatioComponents pli_ratio_components(const ScalarProblem& p, double k, double c);

/// ‖∇L‖² / θ for a factored gain with composed gain k and imbalance c,
/// evaluated by the direct quotient away from k* and by 4 ϑ₁ ϑ₂ within a
/// 1e-6 relative neighbourhood of k*, where the quotient is 0/0.
double factored_pli_ratio(const ScalarProblem& p, double k, double c);

/// ∇J² / θ for the standard (unfactored) scalar cost; 4 r ℓ* at k = k*.
double standard_pli_ratio(const ScalarProblem& p, double k);

enum class CertificateKind { kGlobalPli, kSaturatedPli };

std::string_view to_string(CertificateKind kind);

/// A sampled point where the inequality under test failed (or, for accepted
/// certificates, the tightest point seen).
struct PliWitness {
  double k = 0.0;      ///< composed gain
  double c = 0.0;      ///< imbalance
  double d = 0.0;      ///< ‖k1 + k2ᵀ‖²
  double ratio = 0.0;  ///< ‖∇L‖² / θ
  double mu = 0.0;     ///< μ_γ(c, γ)
  std::vector<double> k1;
  std::vector<double> k2;
};

struct PliCertificate {
  CertificateKind kind = CertificateKind::kGlobalPli;
  bool accepted = false;

  /// gPLI: the uniform rate μ̲ certified over the sampled domain.
  double mu = 0.0;
  /// satPLI: ‖∇L‖² ≥ a_sat θ / (b_sat + θ) and ‖∇L‖ ≤ grad_bound.
  double a_sat = 0.0;
  double b_sat = 0.0;
  double grad_bound = 0.0;

  std::string domain_descriptor;
  std::size_t samples_checked = 0;
  double min_ratio_observed = 0.0;
  std::size_t violations = 0;
  /// Worst violation when rejected, tightest sample otherwise.
  std::optional<PliWitness> witness;

  /// satPLI only: ∇J²/θ at 2k* and at k_max.
  double ratio_at_reference = 0.0;
  double ratio_at_k_max = 0.0;
};

/// Samples factored gains (k1, k2ᵀ ∈ ℝ^κ) with d ≥ γ and 𝐤 > a and checks
/// ‖∇L‖² ≥ μ_γ(c, γ) (L − L̲) (1 − 1e-9) at each. Samples are stratified over
/// the imbalance c (zero, around c̃, log-spread) and the composed gain 𝐤
/// (the d = γ boundary, k*, k_inf, log-spread offsets up to 1e4).
PliCertificate verify_gpli_samples(const ScalarProblem& p, double gamma, Eigen::Index kappa,
                                   std::size_t n_samples, std::uint64_t seed);

/// Evidence that the standard scalar cost satisfies a saturated PŁI but no
/// global one on (k*, k_max]: bounded gradient |∇J| ≤ (r/2)(1 + 0.02), a
/// ratio ∇J²/θ that decreases monotonically, and (for k_max ≥ 100 k*) a
/// ratio at k_max below a tenth of the ratio at 2k*.
PliCertificate satpli_witness(const ScalarProblem& p, double k_max,
                              std::size_t grid_points = 4000);

/// Infimum of f'(k)² / (f(k) − f̲) for f(k) = J(k²) over a log grid on
/// [epsilon, k_max]; requires a > 0 and epsilon > sqrt(a).
double reparam_mu_estimate(const ScalarProblem& p, double epsilon, double k_max,
                           std::size_t grid_points = 4000);

/// Infimum of ∇J² / θ over a log grid on [k_lo, k_max] for the standard cost.
double standard_ratio_infimum(const ScalarProblem& p, double k_lo, double k_max,
                              std::size_t grid_points = 4000);

enum class ProfileVerdict { kGecsLike, kGlecsLike };

std::string_view to_string(ProfileVerdict verdict);

/// Competing fits of a gap series.
///
/// Residuals of both models are measured on log(gap), so the two SSEs are
/// comparable. The linear phase is fitted by least squares on gap weighted by
/// 1/gap² (relative error), the tail by ordinary least squares on log(gap).
struct ProfileFit {
  double beta = 0.0;      ///< linear-phase slope (−d gap/dt)
  double t_star = 0.0;    ///< switch time
  double mu_tail = 0.0;   ///< exponential tail rate
  double mu_pure = 0.0;   ///< rate of the single-exponential fit
  double sse_piecewise = 0.0;
  double sse_pure_exp = 0.0;
  std::size_t points = 0;
  ProfileVerdict verdict = ProfileVerdict::kGecsLike;
};

/// Minimum number of points with gap above the floor.
inline constexpr std::size_t kMinProfilePoints = 50;

/// Fits a pure exponential and a linear-then-exponential model to the points
/// with gap > gap_floor, choosing t* exhaustively over recorded times. The
/// verdict is GECS-like iff sse_pure_exp ≤ 1.05 · sse_piecewise (plus a 1e-20
/// per-point floor for noise-free inputs). Throws std::invalid_argument
/// ("trajectory too short") with fewer than 50 usable points.
ProfileFit classify_profile(std::span<const double> times, std::span<const double> gaps,
                            double gap_floor = 1e-10);
ProfileFit classify_profile(const Trajectory& traj, double gap_floor = 1e-10);

}  // namespace lqrflow
