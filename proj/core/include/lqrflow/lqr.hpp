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

#include <functional>
#include <optional>
#include <stdexcept>

#include "lqrflow/linalg.hpp"

namespace lqrflow {

/// Continuous-time LQR instance ẋ = A x + B u, cost E ∫ xᵀQx + uᵀRu dt with
/// x(0) drawn with second moment Sigma.
class LtiSystem {
 public:
  /// Validates shapes, symmetry, Q ⪰ 0, R ≻ 0 and Sigma ≻ 0. Throws
  /// std::invalid_argument on violation.
  LtiSystem(Mat a, Mat b, Mat q, Mat r, Mat sigma);

  /// Q = I, R = I, Sigma = I.
  static LtiSystem with_identity_weights(Mat a, Mat b);

  const Mat& A() const { return a_; }
  const Mat& B() const { return b_; }
  const Mat& Q() const { return q_; }
  const Mat& R() const { return r_; }
  const Mat& Sigma() const { return sigma_; }

  Eigen::Index states() const { return a_.rows(); }
  Eigen::Index inputs() const { return b_.cols(); }

  Mat closed_loop(const Mat& k) const { return a_ - b_ * k; }

 private:
  Mat a_, b_, q_, r_, sigma_;
};

/// Scalar problem ẋ = a x + u with weights q, r > 0 and gain 𝐤; admissible
/// gains are 𝐤 > a.
struct ScalarProblem {
  double a = 0.0;
  double q = 1.0;
  double r = 1.0;

  /// Throws std::invalid_argument unless q > 0 and r > 0.
  void validate() const;

  /// Equivalent 1-D LtiSystem (B = 1, Sigma = 1).
  LtiSystem as_system() const;
};

/// The closed loop A − BK is not Hurwitz.
class UnstableGainError : public std::domain_error {
 public:
  UnstableGainError(const std::string& what, double max_real_part)
      : std::domain_error(what), max_real_part_(max_real_part) {}
  double max_real_part() const { return max_real_part_; }

 private:
  double max_real_part_;
};

/// Scalar gain outside 𝒦 = {𝐤 > a}.
class InadmissibleGainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct CostAndGradient {
  double cost = 0.0;
  Mat gradient;
};

/// J(K) = tr(P Sigma) with (A−BK)ᵀP + P(A−BK) + Q + KᵀRK = 0.
double lqr_cost(const LtiSystem& sys, const Mat& k);

/// ∇J(K) = 2 (RK − BᵀP) L with (A−BK)L + L(A−BK)ᵀ + Sigma = 0.
Mat lqr_gradient(const LtiSystem& sys, const Mat& k);

/// Cost and gradient sharing one stability check and one P solve.
CostAndGradient lqr_cost_and_gradient(const LtiSystem& sys, const Mat& k);

/// (q + r k²) / (2 (k − a)). Throws InadmissibleGainError for k ≤ a.
double scalar_cost(const ScalarProblem& p, double k);

/// (r k² − 2 a r k − q) / (2 (a − k)²). Throws InadmissibleGainError for k ≤ a.
double scalar_gradient(const ScalarProblem& p, double k);

struct ScalarOptimum {
  double k_star;
  double j_min;
};

/// k* = a + sqrt(a² + q/r), j_min = J(k*) = r k*.
ScalarOptimum scalar_optimum(const ScalarProblem& p);

using MatCost = std::function<double(const Mat&)>;

/// Central differences (cost(K + h Eᵢⱼ) − cost(K − h Eᵢⱼ)) / 2h per entry.
Mat finite_diff_gradient(const MatCost& cost, const Mat& k, double h = 1e-5);

struct RiccatiSolution {
  Mat gain;  ///< K* = R⁻¹ Bᵀ P
  Mat p;     ///< stabilizing solution of the CARE
  double cost = 0.0;
  int iterations = 0;
};

/// Gain K with A − BK Hurwitz by Bass' method; requires (A, B) controllable.
/// Returns the zero gain when A is already Hurwitz.
Mat stabilizing_gain(const LtiSystem& sys);

/// Newton–Kleinman iteration on the CARE, each step one Lyapunov solve.
/// `initial_gain` must be stabilizing; defaults to stabilizing_gain(sys).
RiccatiSolution solve_riccati(const LtiSystem& sys,
                              std::optional<Mat> initial_gain = std::nullopt,
                              double tol = 1e-12, int max_iterations = 100);

}  // namespace lqrflow
