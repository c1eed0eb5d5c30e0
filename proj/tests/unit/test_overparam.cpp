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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "lqrflow/presets.hpp"
#include "oracles.hpp"

namespace lqrflow {
namespace {

FactoredGain vec_pair(const Vec& k1, const Vec& k2t) {
  return FactoredGain(Mat(k1), Mat(k2t.transpose()));
}

TEST(Compose, Examples) {
  EXPECT_EQ(compose(FactoredGain(Mat::Constant(1, 1, 2), Mat::Constant(1, 1, 2)))(0, 0), 4.0);
  const FactoredGain orth = vec_pair(Vec::Unit(2, 0), Vec::Unit(2, 1));
  EXPECT_EQ(compose(orth)(0, 0), 0.0);
}

TEST(Compose, ShapeMismatchRejected) {
  EXPECT_THROW(FactoredGain(Mat::Ones(2, 3), Mat::Ones(1, 3)), std::invalid_argument);
}

TEST(Invariant, Examples) {
  const FactoredGain orth = vec_pair(Vec::Unit(2, 0), Vec::Unit(2, 1));
  const Mat c = invariant_matrix(orth);
  EXPECT_EQ(c, (Mat(2, 2) << 1, 0, 0, -1).finished());
  EXPECT_EQ(invariant_matrix(FactoredGain(Mat::Constant(1, 1, 3), Mat::Constant(1, 1, 1)))(0, 0),
            8.0);
  const Vec v = (Vec(3) << 1, -2, 0.5).finished();
  EXPECT_LT(invariant_matrix(vec_pair(v, v)).norm(), 1e-15);
}

TEST(Imbalance, Examples) {
  const Vec v = (Vec(3) << 1, -2, 0.5).finished();
  EXPECT_NEAR(imbalance(vec_pair(v, v)), 0.0, 1e-14);
  EXPECT_NEAR(imbalance(vec_pair(Vec::Unit(2, 0), Vec::Unit(2, 1))), 4.0, 1e-14);
  EXPECT_NEAR(imbalance(FactoredGain(Mat::Constant(1, 1, 3), Mat::Constant(1, 1, 1))), 64.0,
              1e-12);
}

TEST(DistanceMeasure, Examples) {
  EXPECT_NEAR(distance_measure(FactoredGain(Mat::Constant(1, 1, 2), Mat::Constant(1, 1, 2))),
              16.0, 1e-14);
  EXPECT_NEAR(distance_measure(vec_pair(Vec::Unit(2, 0), Vec::Unit(2, 1))), 2.0, 1e-14);
  const Vec v = (Vec(3) << 1, -2, 0.5).finished();
  EXPECT_NEAR(distance_measure(vec_pair(v, -v)), 0.0, 1e-14);
  EXPECT_THROW(distance_measure(FactoredGain(Mat::Ones(4, 3), Mat::Ones(2, 4))),
               std::invalid_argument);
}

TEST(ImbalanceReport, FieldsAgree) {
  const FactoredGain fg = vec_pair((Vec(2) << 1, 2).finished(), (Vec(2) << 3, -1).finished());
  const ImbalanceReport rep = imbalance_report(fg);
  EXPECT_EQ(rep.invariant, invariant_matrix(fg));
  EXPECT_EQ(rep.c, imbalance(fg));
  EXPECT_EQ(rep.d, distance_measure(fg));
}

// For vectors a, b: c(a, b) = (‖a‖² + ‖b‖²)² − 4(aᵀb)² ≥ (‖a‖² − ‖b‖²)² ≥ 0,
// with equality c = 0 exactly when a = ±b.
TEST(ImbalanceProperty, NonnegativeOnTenThousandRandomPairs) {
  std::mt19937_64 rng(1234);
  std::uniform_int_distribution<int> dim(1, 8);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 10000; ++trial) {
    const int k = dim(rng);
    Vec a(k), b(k);
    for (int i = 0; i < k; ++i) {
      a(i) = normal(rng);
      b(i) = normal(rng);
    }
    const double na = a.squaredNorm();
    const double nb = b.squaredNorm();
    const double dot = a.dot(b);
    const double oracle = (na + nb) * (na + nb) - 4.0 * dot * dot;
    const double c = imbalance(vec_pair(a, b));
    ASSERT_NEAR(c, oracle, 1e-9 * (1.0 + oracle)) << "trial " << trial;
    ASSERT_GE(c + 1e-9 * (1.0 + oracle), (na - nb) * (na - nb)) << "trial " << trial;
    ASSERT_GE(c, -1e-12);
  }
}

TEST(ImbalanceProperty, ZeroExactlyForParallelEqualNorm) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const Vec a = testing::random_matrix(1 + trial % 8, 1, rng);
    EXPECT_NEAR(imbalance(vec_pair(a, a)), 0.0, 1e-9);
    EXPECT_NEAR(imbalance(vec_pair(a, -a)), 0.0, 1e-9);
    const Vec b = a + 1e-2 * testing::random_matrix(a.size(), 1, rng);
    if ((a - b).norm() > 1e-9 && (a + b).norm() > 1e-9) {
      EXPECT_GT(imbalance(vec_pair(a, b)), 0.0);
    }
  }
}

TEST(NormSumIdentity, HoldsForRandomScalarOutputFactors) {
  std::mt19937_64 rng(555);
  for (int trial = 0; trial < 2000; ++trial) {
    const int k = 1 + trial % 8;
    const Vec a = testing::random_matrix(k, 1, rng);
    const Vec b = testing::random_matrix(k, 1, rng, 2.0);
    const FactoredGain fg = vec_pair(a, b);
    const double kk = compose(fg)(0, 0);
    const double c = imbalance(fg);
    const double norm_sum = a.squaredNorm() + b.squaredNorm();
    EXPECT_NEAR(norm_sum, std::sqrt(c + 4.0 * kk * kk), 1e-9 * norm_sum);
    EXPECT_NEAR(distance_measure(fg), std::sqrt(c + 4.0 * kk * kk) + 2.0 * kk, 1e-9 * norm_sum);
  }
}

TEST(Remark2Factorize, RightInverseOfCompose) {
  std::mt19937_64 rng(31);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Mat k = testing::random_matrix(3, 5, rng, 3.0);
    const FactoredGain fg = remark2_factorize(k, 5 + seed % 6, seed);
    EXPECT_EQ(fg.kappa(), static_cast<Eigen::Index>(5 + seed % 6));
    EXPECT_LE((compose(fg) - k).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Remark2Factorize, PresetGain) {
  const FactoredGain fg = remark2_factorize(presets::k_minus0(), 10, 42);
  EXPECT_LE((compose(fg) - presets::k_minus0()).norm(), 1e-10);
}

TEST(Remark2Factorize, ZeroTargetAndScalar) {
  const FactoredGain zero = remark2_factorize(Mat::Zero(2, 3), 4, 9);
  EXPECT_EQ(zero.k2.norm(), 0.0);
  const FactoredGain s = remark2_factorize(Mat::Constant(1, 1, 4.0), 1, 0);
  EXPECT_NEAR(s.k2(0, 0), 4.0 / s.k1(0, 0), 1e-14);
}

TEST(Remark2Factorize, Deterministic) {
  const FactoredGain a = remark2_factorize(presets::k_plus0(), 10, 7);
  const FactoredGain b = remark2_factorize(presets::k_plus0(), 10, 7);
  EXPECT_EQ(a.k1, b.k1);
  EXPECT_EQ(a.k2, b.k2);
}

TEST(Remark2Factorize, KappaBelowStatesRejected) {
  EXPECT_THROW(remark2_factorize(Mat::Ones(1, 3), 2, 0), std::invalid_argument);
}

TEST(BalancedFactorize, ZeroInvariantAndExactCompose) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const Mat k = testing::random_matrix(3, 5, rng);
    const FactoredGain fg = balanced_factorize(k, 10);
    EXPECT_LT((compose(fg) - k).norm(), 1e-12 * (1 + k.norm()));
    EXPECT_LT(invariant_matrix(fg).norm(), 1e-12 * (1 + k.norm()));
  }
  EXPECT_THROW(balanced_factorize(Mat::Ones(3, 5), 2), std::invalid_argument);
}

TEST(Remark2Scale, ScalarGapFormula) {
  // a = 0, q = r = 1: J(s) − J(1) = (1 + s²)/(2s) − 1 = (s − 1)² / (2s).
  const LtiSystem sys = ScalarProblem{0.0, 1.0, 1.0}.as_system();
  const ScaledGain sg = remark2_scale(sys, 0.05, 1.1, 1.2);
  auto gap = [](double s) { return (s - 1.0) * (s - 1.0) / (2.0 * s); };
  EXPECT_GE(sg.gap, 0.05);
  EXPECT_NEAR(sg.gap, gap(sg.scale), 1e-12);
  EXPECT_NEAR(sg.gain(0, 0), sg.scale, 1e-12);
  // Minimality: the previous candidate falls short.
  if (sg.attempts > 1) {
    EXPECT_LT(gap(sg.scale / 1.2), 0.05);
  }
  // Find the first qualifying candidate independently.
  double s = 1.1;
  while (gap(s) < 0.05) s *= 1.2;
  EXPECT_NEAR(sg.scale, s, 1e-12);
}

TEST(Remark2Scale, TinyEtaAcceptsFirstCandidate) {
  const ScaledGain sg = remark2_scale(ScalarProblem{0.0, 1.0, 1.0}.as_system(), 1e-9);
  EXPECT_NEAR(sg.scale, 1.05, 1e-15);
  EXPECT_EQ(sg.attempts, 1);
}

TEST(Remark2Scale, PresetGapMatched) {
  const LtiSystem sys = presets::g1();
  const double target = lqr_cost(sys, presets::k_minus0()) - 0.4856213229525004;
  const ScaledGain sg = remark2_scale(sys, target);
  EXPECT_GE(sg.gap, target);
  EXPECT_TRUE(is_hurwitz(sys.closed_loop(sg.gain)));
  EXPECT_NEAR(sg.j_min, 0.4856213229525004, 1e-9);
}

TEST(Remark2Scale, InvalidArguments) {
  const LtiSystem sys = ScalarProblem{}.as_system();
  EXPECT_THROW(remark2_scale(sys, 0.0), std::invalid_argument);
  EXPECT_THROW(remark2_scale(sys, 1.0, 1.0, 1.0), std::invalid_argument);
}

}  // namespace
}  // namespace lqrflow
