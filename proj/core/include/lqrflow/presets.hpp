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


// Benchmark systems G1 = (A⁻, B1) and G2 = (A⁺, B2) with their initial gains,
// embedded exactly as printed.

#pragma once

#include <cstdint>
#include <string_view>

#include "lqrflow/linalg.hpp"
#include "lqrflow/lqr.hpp"

namespace lqrflow::presets {

/// Hidden width used for the factored runs on G1 and G2.
inline constexpr Eigen::Index kKappa = 10;

/// Symmetric 5×5 base matrix A.
Mat base_a();
/// A⁻ = −(5 I + A), Hurwitz.
Mat a_minus();
/// A⁺ = A, unstable.
Mat a_plus();
/// B1 (5×3): actuates the last three states.
Mat b1();
/// B2 = I5.
Mat b2();
/// Initial gain for G1 (3×5).
Mat k_minus0();
/// Initial gain for G2 (5×5).
Mat k_plus0();

/// G1 = (A⁻, B1) with Q = R = Σ = I.
LtiSystem g1();
/// G2 = (A⁺, B2) with Q = R = Σ = I.
LtiSystem g2();

/// System for a preset name ("G1" or "G2"); throws std::invalid_argument
/// for any other name.
LtiSystem by_name(std::string_view name);
/// Initial gain for a preset name.
Mat initial_gain(std::string_view name);

/// FNV-1a over the entries of A, B1, K⁻(0) and K⁺(0), each rounded to 1e-4
/// and taken row-major. Guards the embedded tables against transcription
/// drift.
std::uint64_t checksum(const Mat& a, const Mat& b1, const Mat& k_minus, const Mat& k_plus);
std::uint64_t embedded_checksum();

}  // namespace lqrflow::presets
