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

#include <initializer_list>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace lqrflow {

/// Dense, column-major double matrix. Every matrix in the library (A, B, Q,
/// R, Sigma, gains and factors) is one of these.
using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/// Raised when a numerical kernel cannot produce a trustworthy answer
/// (singular Kronecker system, eigenvalue iteration failure, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Builds a matrix from row literals; throws std::invalid_argument naming the
/// first row whose length differs from the first row.
Mat from_rows(std::initializer_list<std::initializer_list<double>> rows);

bool all_finite(const Mat& m);
bool is_square(const Mat& m);

/// (m + mᵀ) / 2.
Mat symmetrize(const Mat& m);

/// Largest real part over the eigenvalues of a square matrix.
double spectral_abscissa(const Mat& m);

/// True iff every eigenvalue of `m` has real part below -tol.
bool is_hurwitz(const Mat& m, double tol = 1e-9);

/// Smallest eigenvalue of a symmetric matrix.
double min_symmetric_eigenvalue(const Mat& m);

/// Solves A_clᵀ P + P A_cl + W = 0 through the n²×n² Kronecker system
///   (I ⊗ A_clᵀ + A_clᵀ ⊗ I) vec(P) = -vec(W).
/// The caller is responsible for A_cl being Hurwitz; a numerically singular
/// system (some λᵢ + λⱼ ≈ 0) raises NumericalError. The result is symmetrized.
Mat solve_lyapunov(const Mat& a_cl, const Mat& w);

/// Frobenius norm of A_clᵀ P + P A_cl + W.
double lyapunov_residual(const Mat& a_cl, const Mat& p, const Mat& w);

}  // namespace lqrflow
