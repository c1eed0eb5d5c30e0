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

#include "lqrflow/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <fmt/format.h>

namespace lqrflow {
namespace {

// Reciprocal condition estimate below which the Kronecker system is treated
// as singular.
constexpr double kMinKroneckerRcond = 1e-13;

bool is_exactly_symmetric(const Mat& m) {
  return is_square(m) && m == m.transpose();
}

}  // namespace

Mat from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  if (rows.size() == 0) return Mat(0, 0);
  const auto cols = static_cast<Eigen::Index>(rows.begin()->size());
  Mat m(static_cast<Eigen::Index>(rows.size()), cols);
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    if (static_cast<Eigen::Index>(row.size()) != cols) {
      throw std::invalid_argument(
          fmt::format("row {} has {} entries, expected {}", i, row.size(), cols));
    }
    Eigen::Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

bool all_finite(const Mat& m) { return m.allFinite(); }

bool is_square(const Mat& m) { return m.rows() == m.cols(); }

Mat symmetrize(const Mat& m) { return 0.5 * (m + m.transpose()); }

double spectral_abscissa(const Mat& m) {
  if (!is_square(m)) throw std::invalid_argument("spectral_abscissa: matrix is not square");
  if (m.size() == 0) return -std::numeric_limits<double>::infinity();
  if (!m.allFinite()) throw NumericalError("spectral_abscissa: non-finite entries");
  if (m.rows() == 1) return m(0, 0);

  if (is_exactly_symmetric(m)) {
    Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
      throw NumericalError("symmetric eigenvalue iteration did not converge");
    }
    return es.eigenvalues().maxCoeff();
  }
  Eigen::EigenSolver<Mat> es(m, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) {
    throw NumericalError("real Schur QR iteration did not converge");
  }
  return es.eigenvalues().real().maxCoeff();
}

bool is_hurwitz(const Mat& m, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("is_hurwitz: tol must be positive");
  return spectral_abscissa(m) < -tol;
}

double min_symmetric_eigenvalue(const Mat& m) {
  if (!is_square(m)) throw std::invalid_argument("min_symmetric_eigenvalue: not square");
  Eigen::SelfAdjointEigenSolver<Mat> es(symmetrize(m), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw NumericalError("symmetric eigenvalue iteration did not converge");
  }
  return es.eigenvalues().minCoeff();
}

Mat solve_lyapunov(const Mat& a_cl, const Mat& w) {
  if (!is_square(a_cl) || !is_square(w) || a_cl.rows() != w.rows()) {
    throw std::invalid_argument(fmt::format(
        "solve_lyapunov: incompatible shapes a_cl {}x{}, w {}x{}", a_cl.rows(),
        a_cl.cols(), w.rows(), w.cols()));
  }
  if (!a_cl.allFinite() || !w.allFinite()) {
    throw NumericalError("solve_lyapunov: non-finite input");
  }
  const Eigen::Index n = a_cl.rows();
  if (n == 0) return Mat(0, 0);
  if (n == 1) {
    if (std::abs(a_cl(0, 0)) < std::numeric_limits<double>::min() * 1e3) {
      throw NumericalError("solve_lyapunov: not Hurwitz / ill-conditioned (a_cl = 0)");
    }
    return Mat::Constant(1, 1, -w(0, 0) / (2.0 * a_cl(0, 0)));
  }

  // vec(A_clᵀ P) = (I ⊗ A_clᵀ) vec(P), vec(P A_cl) = (A_clᵀ ⊗ I) vec(P).
  const Eigen::Index nn = n * n;
  const Mat at = a_cl.transpose();
  Mat kron = Mat::Zero(nn, nn);
  for (Eigen::Index j = 0; j < n; ++j) {
    kron.block(j * n, j * n, n, n) += at;
    for (Eigen::Index i = 0; i < n; ++i) {
      kron.block(i * n, j * n, n, n).diagonal().array() += at(i, j);
    }
  }

  Eigen::PartialPivLU<Mat> lu(kron);
  // The rcond estimate misses exactly singular systems (a zero pivot), so the
  // pivot ratio of U is checked as well.
  const Vec pivots = lu.matrixLU().diagonal().cwiseAbs();
  const double pivot_ratio = pivots.minCoeff() / pivots.maxCoeff();
  if (!(lu.rcond() > kMinKroneckerRcond) || !(pivot_ratio > kMinKroneckerRcond)) {
    throw NumericalError(fmt::format(
        "solve_lyapunov: not Hurwitz / ill-conditioned (rcond {:.3g}, pivot ratio {:.3g})",
        lu.rcond(), pivot_ratio));
  }
  const Vec rhs = -Eigen::Map<const Vec>(w.data(), nn);
  const Vec x = lu.solve(rhs);
  Mat p = Eigen::Map<const Mat>(x.data(), n, n);
  if (!p.allFinite()) throw NumericalError("solve_lyapunov: non-finite solution");
  return symmetrize(p);
}

double lyapunov_residual(const Mat& a_cl, const Mat& p, const Mat& w) {
  return (a_cl.transpose() * p + p * a_cl + w).norm();
}

}  // namespace lqrflow
