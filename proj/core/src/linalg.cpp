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

#include "rydcoll/linalg.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "rydcoll/error.hpp"

namespace rydcoll {

namespace {

Eigen::SelfAdjointEigenSolver<Matrix> hermitian_eig(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(a);
  if (eig.info() != Eigen::Success) throw NumericalError("Hermitian eigendecomposition failed");
  return eig;
}

}  // namespace

Matrix hermitian_propagator(const Matrix& hamiltonian, double t) {
  const auto eig = hermitian_eig(hamiltonian);
  const RealVector& w = eig.eigenvalues();
  Vector phases(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) phases(i) = std::polar(1.0, -w(i) * t);
  const Matrix& v = eig.eigenvectors();
  return v * phases.asDiagonal() * v.adjoint();
}

HermitianPowerResult hermitian_power(const Matrix& a, double p, double floor_relative) {
  const auto eig = hermitian_eig(a);
  const RealVector& w = eig.eigenvalues();
  HermitianPowerResult out;
  out.min_eigenvalue = w.minCoeff();
  out.max_eigenvalue = w.maxCoeff();
  const double floor = floor_relative * std::max(out.max_eigenvalue, 0.0);
  RealVector powered(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    double x = w(i);
    if (x < floor) {
      x = floor;
      out.floored = true;
    }
    powered(i) = std::pow(x, p);
  }
  const Matrix& v = eig.eigenvectors();
  out.value = v * powered.cast<Complex>().asDiagonal() * v.adjoint();
  return out;
}

double trace_norm(const Matrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(hermitian, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().cwiseAbs().sum();
}

double min_eigenvalue(const Matrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(hermitian, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

}  // namespace rydcoll
