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

#include <gtest/gtest.h>

#include <random>

#include "rydcoll/eigensolver.hpp"
#include "rydcoll/linalg.hpp"

using namespace rydcoll;

namespace {

// X -> A X A^dagger + B X B^dagger for fixed random A, B; positive map whose
// dominant eigenvalue is checked against the dense superoperator.
struct RandomPositiveMap {
  Matrix a, b;
  explicit RandomPositiveMap(int n, unsigned seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> g;
    a.resize(n, n);
    b.resize(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        a(i, j) = Complex(g(gen), g(gen));
        b(i, j) = Complex(g(gen), g(gen));
      }
  }
  Matrix operator()(const Matrix& x) const { return a * x * a.adjoint() + b * x * b.adjoint(); }
  Complex dense_dominant() const {
    const Eigen::Index n = a.rows();
    Matrix super = Matrix::Zero(n * n, n * n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        Matrix e = Matrix::Zero(n, n);
        e(i, j) = 1.0;
        super.col(i + j * n) = Eigen::Map<const Vector>((*this)(e).data(), n * n);
      }
    Eigen::ComplexEigenSolver<Matrix> eig(super, false);
    Complex best = eig.eigenvalues()(0);
    for (Eigen::Index i = 1; i < eig.eigenvalues().size(); ++i)
      if (std::abs(eig.eigenvalues()(i)) > std::abs(best)) best = eig.eigenvalues()(i);
    return best;
  }
};

}  // namespace

TEST(Eigensolver, PowerAndKrylovAgreeWithDense) {
  const RandomPositiveMap map(4, 9);
  const Complex expected = map.dense_dominant();
  const Matrix start = Matrix::Identity(4, 4);
  const auto power = power_iteration(map, start, 1e-13, 100000);
  EigenSolveOptions opts;
  const auto krylov = krylov_dominant(map, start, opts);
  EXPECT_TRUE(power.converged);
  EXPECT_TRUE(krylov.converged);
  EXPECT_NEAR(std::abs(power.value - expected) / std::abs(expected), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(krylov.value - expected) / std::abs(expected), 0.0, 1e-10);
  EXPECT_LT(krylov.residual, 1e-10);
  EXPECT_NEAR(std::abs(krylov.vector.trace() - 1.0), 0.0, 1e-12);
  EXPECT_LT(max_abs(krylov.vector - power.vector), 1e-8);
}

TEST(Eigensolver, ExactEigenvectorBreaksDownImmediately) {
  const auto map = [](const Matrix& x) { return Matrix(2.5 * x); };
  EigenSolveOptions opts;
  const auto r = krylov_dominant(map, Matrix::Identity(3, 3), opts);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.applications, 1);
  EXPECT_NEAR(r.value.real(), 2.5, 1e-14);
}

TEST(Eigensolver, BudgetExhaustionIsReported) {
  const RandomPositiveMap map(5, 1);
  const auto r = power_iteration(map, Matrix::Identity(5, 5), 1e-300, 3);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.applications, 3);
}
