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

#include <cstdint>

#include "lqrflow/linalg.hpp"
#include "lqrflow/lqr.hpp"

namespace lqrflow {

/// Two-layer linear factorization 𝐊 = K2 K1 of an m×n gain through κ hidden
/// units: K1 is κ×n, K2 is m×κ.
struct FactoredGain {
  Mat k1;
  Mat k2;

  FactoredGain() = default;
  /// Throws std::invalid_argument if the inner dimensions disagree or κ = 0.
  FactoredGain(Mat k1_in, Mat k2_in);

  Eigen::Index kappa() const { return k1.rows(); }
  Eigen::Index states() const { return k1.cols(); }
  Eigen::Index inputs() const { return k2.rows(); }
};

struct ImbalanceReport {
  Mat invariant;  ///< 𝒞 = K1 K1ᵀ − K2ᵀ K2
  double c = 0.0;  ///< 2 tr(𝒞²) − (tr 𝒞)²
  double d = 0.0;  ///< ‖K1 + K2ᵀ‖²; NaN when m ≠ n
};

/// K2 K1.
Mat compose(const FactoredGain& fg);

/// 𝒞 = K1 K1ᵀ − K2ᵀ K2, conserved by the factored gradient flow.
Mat invariant_matrix(const FactoredGain& fg);

/// c = 2 tr(𝒞²) − (tr 𝒞)². Nonnegative for scalar-output gains.
double imbalance(const FactoredGain& fg);

/// d = ‖K1 + K2ᵀ‖² (squared Frobenius norm). Requires K2ᵀ to have the shape
/// of K1 (m = n); throws std::invalid_argument otherwise.
double distance_measure(const FactoredGain& fg);

ImbalanceReport imbalance_report(const FactoredGain& fg);

/// Draws K1 (κ×n, i.i.d. standard normal from `seed`) until its condition
/// number is at most 1e6, then sets K2 = K (K1ᵀK1)⁻¹ K1ᵀ so that K2 K1 = K.
/// Requires κ ≥ n. Throws NumericalError after 10 rank-deficient draws.
FactoredGain remark2_factorize(const Mat& target, Eigen::Index kappa, std::uint64_t seed);

/// Balanced factorization through the SVD K = U S Vᵀ: K2 = U S^½ [I 0],
/// K1 = [I; 0] S^½ Vᵀ, hence 𝒞 = 0. Requires κ ≥ min(m, n).
FactoredGain balanced_factorize(const Mat& target, Eigen::Index kappa);

struct ScaledGain {
  Mat gain;           ///< s K*
  double scale = 0;   ///< accepted s
  double gap = 0;     ///< J(s K*) − J(K*)
  double j_min = 0;   ///< J(K*)
  Mat optimal_gain;   ///< K*
  int attempts = 0;   ///< candidates examined, including skipped unstable ones
};

/// Smallest s in {s0·growthʲ : j = 0..200} with A − B s K* Hurwitz and
/// J(s K*) − J(K*) ≥ eta. K* comes from a Newton–Kleinman Riccati solve.
ScaledGain remark2_scale(const LtiSystem& sys, double eta, double s0 = 1.05,
                         double growth = 1.25);

}  // namespace lqrflow
