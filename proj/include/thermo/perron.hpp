// Copyright 2026 The Thermo Authors
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

// Perron data of irreducible nonnegative matrices.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "thermo/errors.hpp"

namespace thermo {

struct PerronOptions {
  double tolerance = 1e-12;
  int max_iterations = 100'000;
  /// Iterations between stall checks; a residual that has not dropped by
  /// `stall_factor` over one window sends the solve to the eigensolver.
  int stall_window = 2'000;
  double stall_factor = 10.0;
};

template <typename Scalar>
struct PerronSolution {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  Scalar eigenvalue{0};
  Vector right;  ///< positive, sums to 1
  Vector left;   ///< positive, normalised so left . right = 1
  int iterations = 0;
  bool used_eigensolver = false;
};

namespace detail {

/// Normalised power iteration from the all-ones vector. Returns false when
/// the relative residual |Ax - lambda x| / (lambda |x|) does not reach the
/// tolerance, which is the signature of an imprimitive (periodic) matrix.
template <typename Matrix, typename Vector>
bool power_iterate(const Matrix& a, const PerronOptions& opts, Vector& x,
                   typename Matrix::Scalar& lambda, int& iterations) {
  using Scalar = typename Matrix::Scalar;
  const Eigen::Index n = a.rows();
  x = Vector::Constant(n, Scalar(1) / Scalar(n));
  Scalar window_start = std::numeric_limits<Scalar>::infinity();
  for (iterations = 1; iterations <= opts.max_iterations; ++iterations) {
    Vector y = a * x;
    lambda = y.sum();
    if (!(lambda > Scalar(0))) return false;
    y /= lambda;
    const Scalar residual =
        (a * y - lambda * y).cwiseAbs().maxCoeff() / (lambda * y.cwiseAbs().maxCoeff());
    x = std::move(y);
    if (residual <= Scalar(opts.tolerance)) return true;
    if (iterations % opts.stall_window == 1) {
      if (residual * Scalar(opts.stall_factor) > window_start) return false;
      window_start = residual;
    }
  }
  return false;
}

/// Eigenvector of the eigenvalue with largest real part, made positive.
template <typename Matrix>
Eigen::Matrix<typename Matrix::Scalar, Eigen::Dynamic, 1> dominant_eigenvector(
    const Matrix& a, typename Matrix::Scalar& lambda) {
  using Scalar = typename Matrix::Scalar;
  Eigen::EigenSolver<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> solver(a);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("eigensolver failed on Perron component");
  }
  const auto& values = solver.eigenvalues();
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < values.size(); ++i) {
    if (values[i].real() > values[best].real()) best = i;
  }
  lambda = values[best].real();
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> v =
      solver.eigenvectors().col(best).real();
  if (v.sum() < Scalar(0)) v = -v;
  v = v.cwiseMax(Scalar(0));
  return v / v.sum();
}

}  // namespace detail

/// Perron root with right and left Perron vectors of an irreducible
/// nonnegative square matrix. Power iteration first; imprimitive or slowly
/// mixing matrices fall back to a dense eigensolve.
template <typename Derived>
PerronSolution<typename Derived::Scalar> perron_solve(
    const Eigen::MatrixBase<Derived>& matrix, const PerronOptions& opts = {}) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Matrix a = matrix;
  const Matrix at = a.transpose();
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw InputError("Perron solve needs a non-empty square matrix");
  }

  PerronSolution<Scalar> out;
  if (a.rows() == 1) {
    out.eigenvalue = a(0, 0);
    out.right = Vector::Ones(1);
    out.left = Vector::Ones(1);
    return out;
  }

  Scalar lambda_r{0}, lambda_l{0};
  int it_r = 0, it_l = 0;
  const bool ok = detail::power_iterate(a, opts, out.right, lambda_r, it_r) &&
                  detail::power_iterate(at, opts, out.left, lambda_l, it_l);
  out.iterations = it_r + it_l;
  if (!ok) {
    out.used_eigensolver = true;
    out.right = detail::dominant_eigenvector(a, lambda_r);
    out.left = detail::dominant_eigenvector(at, lambda_l);
  }
  out.right /= out.right.sum();
  out.left /= out.left.dot(out.right);
  // Two-sided quotient: first-order errors in either vector cancel.
  out.eigenvalue = out.left.dot(a * out.right) / out.left.dot(out.right);
  return out;
}

}  // namespace thermo
