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

#include <cmath>
#include <stdexcept>
#include <string>

namespace lqrflow::presets {
namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

void fnv_mix(std::uint64_t& h, std::int64_t value) {
  auto u = static_cast<std::uint64_t>(value);
  for (int byte = 0; byte < 8; ++byte) {
    h ^= (u >> (8 * byte)) & 0xffU;
    h *= kFnvPrime;
  }
}

void fnv_matrix(std::uint64_t& h, const Mat& m) {
  fnv_mix(h, m.rows());
  fnv_mix(h, m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      fnv_mix(h, std::llround(m(i, j) * 1e4));
    }
  }
}

}  // namespace

Mat base_a() {
  return from_rows({
      {0.2373, 0.3452, 0.6653, 0.6715, 0.3288},
      {0.3452, 0.4889, 0.8060, 0.3889, 0.5584},
      {0.6653, 0.8060, 0.0377, 0.5735, 0.5100},
      {0.6715, 0.3889, 0.5735, 0.3354, 0.6667},
      {0.3288, 0.5584, 0.5100, 0.6667, 0.4942},
  });
}

Mat a_minus() { return -(5.0 * Mat::Identity(5, 5) + base_a()); }

Mat a_plus() { return base_a(); }

Mat b1() {
  return from_rows({
                       {0, 0, 1, 0, 0},
                       {0, 0, 0, 1, 0},
                       {0, 0, 0, 0, 1},
                   })
      .transpose();
}

Mat b2() { return Mat::Identity(5, 5); }

Mat k_minus0() {
  return from_rows({
      {-2.14, -2.62, 20.48, -1.55, -1.30},
      {-2.07, -0.80, -1.55, 19.14, -1.94},
      {-0.64, -1.50, -1.30, -1.94, 18.44},
  });
}

Mat k_plus0() {
  return from_rows({
      {12.21, 1.12, 2.16, 2.18, 1.07},
      {1.12, 13.03, 2.61, 1.26, 1.81},
      {2.16, 2.61, 11.56, 1.86, 1.65},
      {2.18, 1.26, 1.86, 12.53, 2.16},
      {1.07, 1.81, 1.65, 2.16, 13.02},
  });
}

LtiSystem g1() { return LtiSystem::with_identity_weights(a_minus(), b1()); }

LtiSystem g2() { return LtiSystem::with_identity_weights(a_plus(), b2()); }

LtiSystem by_name(std::string_view name) {
  if (name == "G1") return g1();
  if (name == "G2") return g2();
  throw std::invalid_argument("unknown preset '" + std::string(name) + "' (expected G1 or G2)");
}

Mat initial_gain(std::string_view name) {
  if (name == "G1") return k_minus0();
  if (name == "G2") return k_plus0();
  throw std::invalid_argument("unknown preset '" + std::string(name) + "' (expected G1 or G2)");
}

std::uint64_t checksum(const Mat& a, const Mat& b1_mat, const Mat& k_minus, const Mat& k_plus) {
  std::uint64_t h = kFnvOffset;
  fnv_matrix(h, a);
  fnv_matrix(h, b1_mat);
  fnv_matrix(h, k_minus);
  fnv_matrix(h, k_plus);
  return h;
}

std::uint64_t embedded_checksum() { return checksum(base_a(), b1(), k_minus0(), k_plus0()); }

}  // namespace lqrflow::presets
