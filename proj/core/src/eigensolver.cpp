// Copyright 2026 The rydcoll Authors
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

#include "rydcoll/eigensolver.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "rydcoll/error.hpp"
#include "rydcoll/linalg.hpp"

namespace rydcoll {

namespace {

Vector flatten(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

Matrix unflatten(const Vector& v, Eigen::Index n) { return Eigen::Map<const Matrix>(v.data(), n, n); }

void normalise_by_trace(Matrix& x) {
  const Complex tr = x.trace();
  if (std::abs(tr) > 1e-14 * x.norm()) x /= tr;
}

double relative_residual(const OperatorMap& map, const Matrix& x, Complex value) {
  const Matrix ax = map(x);
  const double scale = std::abs(value) * max_abs(x);
  return scale > 0.0 ? max_abs(ax - value * x) / scale : max_abs(ax);
}

Eigen::Index select_ritz(const Vector& values, SpectralTarget target) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < values.size(); ++i) {
    const bool better = target == SpectralTarget::LargestMagnitude ? std::abs(values(i)) > std::abs(values(best))
                                                                    : values(i).real() > values(best).real();
    if (better) best = i;
  }
  return best;
}

}  // namespace

EigenSolveResult power_iteration(const OperatorMap& map, Matrix start, double tol, long max_applications) {
  if (!(tol > 0.0)) throw InvalidArgument("power_iteration: tol must be > 0");
  EigenSolveResult result;
  Matrix x = std::move(start);
  normalise_by_trace(x);
  Complex previous{0.0, 0.0};
  while (result.applications < max_applications) {
    Matrix y = map(x);
    ++result.applications;
    const Complex value = y.trace() / x.trace();
    if (value == Complex{}) throw NumericalError("power_iteration: map annihilated the iterate");
    x = y / value;
    normalise_by_trace(x);
    const double change = std::abs(value - previous) / std::abs(value);
    previous = value;
    result.value = value;
    if (result.applications > 1 && change < tol) {
      result.converged = true;
      break;
    }
  }
  result.vector = std::move(x);
  result.residual = relative_residual(map, result.vector, result.value);
  return result;
}

EigenSolveResult krylov_dominant(const OperatorMap& map, Matrix start, const EigenSolveOptions& options) {
  if (!(options.tol > 0.0)) throw InvalidArgument("krylov_dominant: tol must be > 0");
  const Eigen::Index n = start.rows();
  const Eigen::Index big_n = n * n;
  const Eigen::Index m = std::max<Eigen::Index>(2, std::min<Eigen::Index>(options.krylov_dim, big_n));

  EigenSolveResult result;
  Vector x = flatten(start);
  if (x.norm() == 0.0) throw InvalidArgument("krylov_dominant: zero start vector");
  x.normalize();

  Matrix basis(big_n, m + 1);
  Matrix hess = Matrix::Zero(m + 1, m);
  Complex theta{0.0, 0.0};

  while (result.applications < options.max_applications && !result.converged) {
    hess.setZero();
    basis.col(0) = x;
    for (Eigen::Index j = 0; j < m; ++j) {
      Vector w = flatten(map(unflatten(basis.col(j), n)));
      ++result.applications;
      for (int pass = 0; pass < 2; ++pass) {
        for (Eigen::Index i = 0; i <= j; ++i) {
          const Complex h = basis.col(i).dot(w);
          hess(i, j) += h;
          w -= h * basis.col(i);
        }
      }
      const double beta = w.norm();
      hess(j + 1, j) = beta;

      Eigen::ComplexEigenSolver<Matrix> ritz(hess.topLeftCorner(j + 1, j + 1));
      const Eigen::Index pick = select_ritz(ritz.eigenvalues(), options.target);
      theta = ritz.eigenvalues()(pick);
      Vector y = ritz.eigenvectors().col(pick);
      y.normalize();
      const double estimate = beta * std::abs(y(j)) / std::max(std::abs(theta), 1e-300);
      const bool breakdown = beta <= 1e-14 * std::max(1.0, hess.topLeftCorner(j + 1, j + 1).norm());
      const bool last = j + 1 == m || result.applications >= options.max_applications;
      if (estimate < options.tol || breakdown || last) {
        x = basis.leftCols(j + 1) * y;
        x.normalize();
        result.converged = estimate < options.tol || breakdown;
        break;
      }
      basis.col(j + 1) = w / beta;
    }
  }

  result.value = theta;
  result.vector = unflatten(x, n);
  normalise_by_trace(result.vector);
  result.residual = relative_residual(map, result.vector, result.value);
  return result;
}

EigenSolveResult dominant_eigen(const OperatorMap& map, Matrix start, const EigenSolveOptions& options) {
  if (options.method == EigenMethod::Power) {
    return power_iteration(map, std::move(start), options.tol, options.max_applications);
  }
  return krylov_dominant(map, std::move(start), options);
}

}  // namespace rydcoll
