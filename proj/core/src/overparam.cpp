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

#include "lqrflow/overparam.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <utility>

#include <Eigen/Cholesky>
#include <Eigen/SVD>
#include <fmt/format.h>

namespace lqrflow {
namespace {

constexpr double kMaxFactorCondition = 1e6;
constexpr int kMaxFactorDraws = 10;
constexpr int kMaxScaleSteps = 200;

}  // namespace

FactoredGain::FactoredGain(Mat k1_in, Mat k2_in) : k1(std::move(k1_in)), k2(std::move(k2_in)) {
  if (k1.rows() == 0) throw std::invalid_argument("factored gain needs kappa >= 1");
  if (k2.cols() != k1.rows()) {
    throw std::invalid_argument(fmt::format(
        "factored gain: K1 is {}x{} but K2 is {}x{}", k1.rows(), k1.cols(), k2.rows(), k2.cols()));
  }
}

Mat compose(const FactoredGain& fg) { return fg.k2 * fg.k1; }

Mat invariant_matrix(const FactoredGain& fg) {
  return fg.k1 * fg.k1.transpose() - fg.k2.transpose() * fg.k2;
}

double imbalance(const FactoredGain& fg) {
  const Mat c = invariant_matrix(fg);
  const double tr = c.trace();
  // tr(𝒞²) = ‖𝒞‖_F² for symmetric 𝒞.
  return 2.0 * c.squaredNorm() - tr * tr;
}

double distance_measure(const FactoredGain& fg) {
  if (fg.k2.cols() != fg.k1.rows() || fg.k2.rows() != fg.k1.cols()) {
    throw std::invalid_argument("distance_measure: K2ᵀ must have the shape of K1 (m = n)");
  }
  return (fg.k1 + fg.k2.transpose()).squaredNorm();
}

ImbalanceReport imbalance_report(const FactoredGain& fg) {
  ImbalanceReport rep;
  rep.invariant = invariant_matrix(fg);
  const double tr = rep.invariant.trace();
  rep.c = 2.0 * rep.invariant.squaredNorm() - tr * tr;
  rep.d = fg.inputs() == fg.states() ? distance_measure(fg)
                                     : std::numeric_limits<double>::quiet_NaN();
  return rep;
}

FactoredGain remark2_factorize(const Mat& target, Eigen::Index kappa, std::uint64_t seed) {
  const Eigen::Index n = target.cols();
  if (kappa < n || kappa < 1) {
    throw std::invalid_argument(
        fmt::format("remark2_factorize: kappa = {} must be >= n = {}", kappa, n));
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  for (int draw = 0; draw < kMaxFactorDraws; ++draw) {
    Mat k1(kappa, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index i = 0; i < kappa; ++i) k1(i, j) = normal(rng);
    }
    const Eigen::JacobiSVD<Mat> svd(k1);
    const auto& sv = svd.singularValues();
    if (!(sv(sv.size() - 1) > 0.0) || sv(0) / sv(sv.size() - 1) > kMaxFactorCondition) continue;

    // K2 = K (K1ᵀK1)⁻¹ K1ᵀ; the Gram matrix is SPD once K1 has full column rank.
    const Eigen::LLT<Mat> gram(k1.transpose() * k1);
    Mat k2 = gram.solve(target.transpose()).transpose() * k1.transpose();
    return FactoredGain(std::move(k1), std::move(k2));
  }
  throw NumericalError("remark2_factorize: could not draw a full column rank K1");
}

FactoredGain balanced_factorize(const Mat& target, Eigen::Index kappa) {
  const Eigen::Index m = target.rows();
  const Eigen::Index n = target.cols();
  const Eigen::Index r = std::min(m, n);
  if (kappa < r || kappa < 1) {
    throw std::invalid_argument(
        fmt::format("balanced_factorize: kappa = {} must be >= min(m, n) = {}", kappa, r));
  }
  const Eigen::JacobiSVD<Mat> svd(target, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vec root = svd.singularValues().cwiseSqrt();
  Mat k1 = Mat::Zero(kappa, n);
  Mat k2 = Mat::Zero(m, kappa);
  k1.topRows(r) = root.asDiagonal() * svd.matrixV().transpose();
  k2.leftCols(r) = svd.matrixU() * root.asDiagonal();
  return FactoredGain(std::move(k1), std::move(k2));
}

ScaledGain remark2_scale(const LtiSystem& sys, double eta, double s0, double growth) {
  if (!(eta > 0.0) || !(s0 > 0.0) || !(growth > 1.0)) {
    throw std::invalid_argument("remark2_scale: need eta > 0, s0 > 0, growth > 1");
  }
  const RiccatiSolution opt = solve_riccati(sys);

  ScaledGain out;
  out.optimal_gain = opt.gain;
  out.j_min = opt.cost;
  double s = s0;
  for (int j = 0; j <= kMaxScaleSteps; ++j, s *= growth) {
    ++out.attempts;
    const Mat candidate = s * opt.gain;
    if (!is_hurwitz(sys.closed_loop(candidate))) continue;
    const double gap = lqr_cost(sys, candidate) - opt.cost;
    if (gap >= eta) {
      out.gain = candidate;
      out.scale = s;
      out.gap = gap;
      return out;
    }
  }
  throw NumericalError(fmt::format(
      "remark2_scale: no admissible scale reaches gap {:.6g} within {} steps", eta, kMaxScaleSteps));
}

}  // namespace lqrflow
