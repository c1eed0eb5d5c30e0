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

#include "lqrflow/lqr.hpp"

#include <cmath>
#include <utility>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <fmt/format.h>

namespace lqrflow {
namespace {

constexpr double kSymmetryTol = 1e-10;
constexpr double kStabilityTol = 1e-12;

void require_symmetric(const Mat& m, const char* name) {
  if (!is_square(m)) {
    throw std::invalid_argument(fmt::format("{} must be square", name));
  }
  if ((m - m.transpose()).norm() > kSymmetryTol * (1.0 + m.norm())) {
    throw std::invalid_argument(fmt::format("{} must be symmetric", name));
  }
}

void require_stable(const Mat& a_cl) {
  const double abscissa = spectral_abscissa(a_cl);
  if (!(abscissa < -kStabilityTol)) {
    throw UnstableGainError(
        fmt::format("unstable gain: closed-loop max real eigenvalue part {:.6g}", abscissa),
        abscissa);
  }
}

void require_admissible(const ScalarProblem& p, double k) {
  if (!(k > p.a)) {
    throw InadmissibleGainError(fmt::format(
        "gain k = {:.17g} is outside admissible set 𝒦 = {{k > {:.17g}}}", k, p.a));
  }
}

void require_gain_shape(const LtiSystem& sys, const Mat& k) {
  if (k.rows() != sys.inputs() || k.cols() != sys.states()) {
    throw std::invalid_argument(fmt::format("gain must be {}x{}, got {}x{}", sys.inputs(),
                                            sys.states(), k.rows(), k.cols()));
  }
}

}  // namespace

LtiSystem::LtiSystem(Mat a, Mat b, Mat q, Mat r, Mat sigma)
    : a_(std::move(a)), b_(std::move(b)), q_(std::move(q)), r_(std::move(r)),
      sigma_(std::move(sigma)) {
  const Eigen::Index n = a_.rows();
  if (!is_square(a_) || n == 0) throw std::invalid_argument("A must be square and non-empty");
  if (b_.rows() != n || b_.cols() == 0) {
    throw std::invalid_argument(fmt::format("B must be {}xm with m >= 1", n));
  }
  const Eigen::Index m = b_.cols();
  if (q_.rows() != n || q_.cols() != n) throw std::invalid_argument("Q must be n x n");
  if (r_.rows() != m || r_.cols() != m) throw std::invalid_argument("R must be m x m");
  if (sigma_.rows() != n || sigma_.cols() != n) {
    throw std::invalid_argument("Sigma must be n x n");
  }
  for (const Mat* mat : {&a_, &b_, &q_, &r_, &sigma_}) {
    if (!mat->allFinite()) throw std::invalid_argument("system matrices must be finite");
  }
  require_symmetric(q_, "Q");
  require_symmetric(r_, "R");
  require_symmetric(sigma_, "Sigma");
  q_ = symmetrize(q_);
  r_ = symmetrize(r_);
  sigma_ = symmetrize(sigma_);
  if (min_symmetric_eigenvalue(q_) < -kSymmetryTol * (1.0 + q_.norm())) {
    throw std::invalid_argument("Q must be positive semidefinite");
  }
  if (!(min_symmetric_eigenvalue(r_) > 0.0)) {
    throw std::invalid_argument("R must be positive definite");
  }
  if (!(min_symmetric_eigenvalue(sigma_) > 0.0)) {
    throw std::invalid_argument("Sigma must be positive definite");
  }
}

LtiSystem LtiSystem::with_identity_weights(Mat a, Mat b) {
  const Eigen::Index n = a.rows();
  const Eigen::Index m = b.cols();
  return LtiSystem(std::move(a), std::move(b), Mat::Identity(n, n), Mat::Identity(m, m),
                   Mat::Identity(n, n));
}

void ScalarProblem::validate() const {
  if (!std::isfinite(a)) throw std::invalid_argument("scalar problem: a must be finite");
  if (!(q > 0.0) || !(r > 0.0) || !std::isfinite(q) || !std::isfinite(r)) {
    throw std::invalid_argument("scalar problem: q and r must be positive");
  }
}

LtiSystem ScalarProblem::as_system() const {
  validate();
  return LtiSystem(Mat::Constant(1, 1, a), Mat::Ones(1, 1), Mat::Constant(1, 1, q),
                   Mat::Constant(1, 1, r), Mat::Ones(1, 1));
}

CostAndGradient lqr_cost_and_gradient(const LtiSystem& sys, const Mat& k) {
  require_gain_shape(sys, k);
  const Mat a_cl = sys.closed_loop(k);
  require_stable(a_cl);
  const Mat p = solve_lyapunov(a_cl, sys.Q() + k.transpose() * sys.R() * k);
  // (A−BK) L + L (A−BK)ᵀ + Sigma = 0 is the same equation with A_clᵀ.
  const Mat l = solve_lyapunov(a_cl.transpose(), sys.Sigma());
  CostAndGradient out;
  out.cost = (p * sys.Sigma()).trace();
  out.gradient = 2.0 * (sys.R() * k - sys.B().transpose() * p) * l;
  return out;
}

double lqr_cost(const LtiSystem& sys, const Mat& k) {
  require_gain_shape(sys, k);
  const Mat a_cl = sys.closed_loop(k);
  require_stable(a_cl);
  const Mat p = solve_lyapunov(a_cl, sys.Q() + k.transpose() * sys.R() * k);
  return (p * sys.Sigma()).trace();
}

Mat lqr_gradient(const LtiSystem& sys, const Mat& k) {
  return lqr_cost_and_gradient(sys, k).gradient;
}

double scalar_cost(const ScalarProblem& p, double k) {
  require_admissible(p, k);
  return (p.q + p.r * k * k) / (2.0 * (k - p.a));
}

double scalar_gradient(const ScalarProblem& p, double k) {
  require_admissible(p, k);
  const double gap = p.a - k;
  return (p.r * k * k - 2.0 * p.a * p.r * k - p.q) / (2.0 * gap * gap);
}

ScalarOptimum scalar_optimum(const ScalarProblem& p) {
  p.validate();
  const double k_star = p.a + std::sqrt(p.a * p.a + p.q / p.r);
  return {k_star, scalar_cost(p, k_star)};
}

Mat finite_diff_gradient(const MatCost& cost, const Mat& k, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("finite_diff_gradient: h must be positive");
  Mat grad(k.rows(), k.cols());
  Mat probe = k;
  for (Eigen::Index j = 0; j < k.cols(); ++j) {
    for (Eigen::Index i = 0; i < k.rows(); ++i) {
      probe(i, j) = k(i, j) + h;
      const double plus = cost(probe);
      probe(i, j) = k(i, j) - h;
      const double minus = cost(probe);
      probe(i, j) = k(i, j);
      grad(i, j) = (plus - minus) / (2.0 * h);
    }
  }
  return grad;
}

Mat stabilizing_gain(const LtiSystem& sys) {
  const Mat& a = sys.A();
  const Eigen::Index n = sys.states();
  if (is_hurwitz(a)) return Mat::Zero(sys.inputs(), n);

  // Bass: with −(A + βI) Hurwitz, (A+βI)Z + Z(A+βI)ᵀ = 2 B R⁻¹ Bᵀ gives Z ≻ 0
  // for controllable (A, B), and A − B R⁻¹ Bᵀ Z⁻¹ has all eigenvalues at −β.
  const double beta = a.operatorNorm() + 1.0;
  const Mat shifted = -(a + beta * Mat::Identity(n, n));
  const Mat r_inv_bt = sys.R().llt().solve(sys.B().transpose());
  const Mat z = solve_lyapunov(shifted.transpose(), 2.0 * sys.B() * r_inv_bt);
  Eigen::LLT<Mat> z_llt(z);
  if (z_llt.info() != Eigen::Success) {
    throw NumericalError("stabilizing_gain: (A, B) is not controllable");
  }
  Mat k = r_inv_bt * z_llt.solve(Mat::Identity(n, n));
  if (!is_hurwitz(sys.closed_loop(k))) {
    throw NumericalError("stabilizing_gain: Bass gain failed to stabilize");
  }
  return k;
}

RiccatiSolution solve_riccati(const LtiSystem& sys, std::optional<Mat> initial_gain, double tol,
                              int max_iterations) {
  Mat k = initial_gain ? std::move(*initial_gain) : stabilizing_gain(sys);
  require_gain_shape(sys, k);
  require_stable(sys.closed_loop(k));
  const Eigen::LLT<Mat> r_llt(sys.R());

  Mat p_prev;
  for (int it = 1; it <= max_iterations; ++it) {
    const Mat a_cl = sys.closed_loop(k);
    Mat p = solve_lyapunov(a_cl, sys.Q() + k.transpose() * sys.R() * k);
    k = r_llt.solve(sys.B().transpose() * p);
    const bool done = it > 1 && (p - p_prev).norm() <= tol * (1.0 + p.norm());
    p_prev = std::move(p);
    if (done) {
      RiccatiSolution sol;
      sol.gain = k;
      sol.p = p_prev;
      sol.cost = lqr_cost(sys, k);
      sol.iterations = it;
      return sol;
    }
  }
  throw NumericalError("solve_riccati: Newton-Kleinman did not converge");
}

}  // namespace lqrflow
