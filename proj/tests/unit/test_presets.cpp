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


#include "lqrflow/presets.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include <gtest/gtest.h>

namespace lqrflow {
namespace {

// Tables retyped from the printed experiment description, row-major.
constexpr std::array<double, 25> kBaseA = {
    0.2373, 0.3452, 0.6653, 0.6715, 0.3288,  //
    0.3452, 0.4889, 0.8060, 0.3889, 0.5584,  //
    0.6653, 0.8060, 0.0377, 0.5735, 0.5100,  //
    0.6715, 0.3889, 0.5735, 0.3354, 0.6667,  //
    0.3288, 0.5584, 0.5100, 0.6667, 0.4942};
constexpr std::array<double, 15> kB1 = {0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1};  // B1ᵀ
constexpr std::array<double, 15> kKMinus = {
    -2.14, -2.62, 20.48, -1.55, -1.30,  //
    -2.07, -0.80, -1.55, 19.14, -1.94,  //
    -0.64, -1.50, -1.30, -1.94, 18.44};
constexpr std::array<double, 25> kKPlus = {
    12.21, 1.12,  2.16,  2.18,  1.07,  //
    1.12,  13.03, 2.61,  1.26,  1.81,  //
    2.16,  2.61,  11.56, 1.86,  1.65,  //
    2.18,  1.26,  1.86,  12.53, 2.16,  //
    1.07,  1.81,  1.65,  2.16,  13.02};

// Independent FNV-1a over (rows, cols, round(1e4·x) row-major), 8 bytes each.
struct Fnv {
  std::uint64_t h = 1469598103934665603ULL;
  void mix(std::int64_t v) {
    const auto u = static_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) {
      h ^= (u >> (8 * b)) & 0xffU;
      h *= 1099511628211ULL;
    }
  }
  template <std::size_t Rows, std::size_t Cols>
  void table(const std::array<double, Rows * Cols>& t, bool transpose = false) {
    mix(static_cast<std::int64_t>(transpose ? Cols : Rows));
    mix(static_cast<std::int64_t>(transpose ? Rows : Cols));
    if (!transpose) {
      for (double x : t) mix(std::llround(x * 1e4));
    } else {
      for (std::size_t j = 0; j < Cols; ++j) {
        for (std::size_t i = 0; i < Rows; ++i) mix(std::llround(t[i * Cols + j] * 1e4));
      }
    }
  }
};

template <std::size_t N>
Mat to_mat(const std::array<double, N>& data, int rows, int cols) {
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = data.at(static_cast<std::size_t>(i * cols + j));
  }
  return m;
}

TEST(Presets, EmbeddedTablesMatchPrintedValues) {
  EXPECT_EQ(presets::base_a(), to_mat(kBaseA, 5, 5));
  EXPECT_EQ(presets::b1().transpose(), to_mat(kB1, 3, 5));
  EXPECT_EQ(presets::k_minus0(), to_mat(kKMinus, 3, 5));
  EXPECT_EQ(presets::k_plus0(), to_mat(kKPlus, 5, 5));
}

TEST(Presets, ChecksumMatchesIndependentDigest) {
  Fnv fnv;
  fnv.table<5, 5>(kBaseA);
  fnv.table<3, 5>(kB1, /*transpose=*/true);  // B1 is 5×3
  fnv.table<3, 5>(kKMinus);
  fnv.table<5, 5>(kKPlus);
  EXPECT_EQ(presets::embedded_checksum(), fnv.h);
  EXPECT_EQ(presets::checksum(presets::base_a(), presets::b1(), presets::k_minus0(),
                              presets::k_plus0()),
            fnv.h);
}

TEST(Presets, ChecksumDetectsTranscriptionDrift) {
  Mat a = presets::base_a();
  a(2, 3) += 1e-4;
  EXPECT_NE(presets::checksum(a, presets::b1(), presets::k_minus0(), presets::k_plus0()),
            presets::embedded_checksum());
}

TEST(Presets, DerivedMatricesAndStability) {
  EXPECT_EQ(presets::a_minus(), -(5.0 * Mat::Identity(5, 5) + presets::base_a()));
  EXPECT_EQ(presets::a_plus(), presets::base_a());
  EXPECT_TRUE(is_hurwitz(presets::a_minus()));
  EXPECT_FALSE(is_hurwitz(presets::a_plus()));
  // Largest eigenvalue of the symmetric base matrix (reference value from NumPy).
  EXPECT_NEAR(spectral_abscissa(presets::base_a()), 2.5315, 1e-4);
  EXPECT_TRUE(is_hurwitz(presets::g1().closed_loop(presets::k_minus0())));
  EXPECT_TRUE(is_hurwitz(presets::g2().closed_loop(presets::k_plus0())));
}

TEST(Presets, ByName) {
  EXPECT_EQ(presets::by_name("G1").B(), presets::b1());
  EXPECT_EQ(presets::initial_gain("G2"), presets::k_plus0());
  EXPECT_THROW(presets::by_name("G3"), std::invalid_argument);
  EXPECT_THROW(presets::initial_gain(""), std::invalid_argument);
}

}  // namespace
}  // namespace lqrflow
