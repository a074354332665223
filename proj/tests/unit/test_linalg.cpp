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

#include "rydcoll/linalg.hpp"

using namespace rydcoll;

namespace {

Matrix random_hermitian(int n, std::mt19937_64& gen) {
  std::normal_distribution<double> g;
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = Complex(g(gen), g(gen));
  return a + a.adjoint();
}

}  // namespace

TEST(Linalg, PropagatorIsUnitaryAndMatchesSeries) {
  std::mt19937_64 gen(3);
  const Matrix h = random_hermitian(6, gen);
  const Matrix u = hermitian_propagator(h, 0.01);
  EXPECT_LT(max_abs(u * u.adjoint() - Matrix::Identity(6, 6)), 1e-13);
  Matrix series = Matrix::Identity(6, 6);
  Matrix term = Matrix::Identity(6, 6);
  for (int k = 1; k < 30; ++k) {
    term = (term * h * Complex(0.0, -0.01 / k)).eval();
    series += term;
  }
  EXPECT_LT(max_abs(u - series), 1e-13);
}

TEST(Linalg, HermitianPowerInvertsSquareRoot) {
  std::mt19937_64 gen(5);
  const Matrix a0 = random_hermitian(5, gen);
  const Matrix a = a0 * a0 + 0.1 * Matrix::Identity(5, 5);
  const auto half = hermitian_power(a, 0.5, 1e-14);
  const auto minus_half = hermitian_power(a, -0.5, 1e-14);
  EXPECT_FALSE(half.floored);
  EXPECT_LT(max_abs(half.value * half.value - a), 1e-11);
  EXPECT_LT(max_abs(half.value * minus_half.value - Matrix::Identity(5, 5)), 1e-11);
}

TEST(Linalg, HermitianPowerFloorsSmallEigenvalues) {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = 1.0;
  const auto r = hermitian_power(a, -0.5, 1e-14);
  EXPECT_TRUE(r.floored);
  EXPECT_NEAR(r.value(1, 1).real(), 1e7, 1.0);
}

TEST(Linalg, TraceNormAndTraceProduct) {
  Matrix a = Matrix::Zero(3, 3);
  a(0, 0) = 1.0;
  a(1, 1) = -2.0;
  a(2, 2) = 0.5;
  EXPECT_DOUBLE_EQ(trace_norm(a), 3.5);
  EXPECT_DOUBLE_EQ(min_eigenvalue(a), -2.0);
  std::mt19937_64 gen(7);
  const Matrix x = random_hermitian(4, gen), y = random_hermitian(4, gen);
  EXPECT_LT(std::abs(trace_product(x, y) - (x * y).trace()), 1e-12);
}

TEST(Linalg, WalshHadamardMatchesDefinition) {
  std::vector<double> data = {1.0, -2.0, 0.5, 3.0, 0.0, 1.5, -1.0, 2.0};
  const auto input = data;
  walsh_hadamard_inplace(data);
  for (std::size_t k = 0; k < 8; ++k) {
    double expected = 0.0;
    for (std::size_t m = 0; m < 8; ++m) expected += (std::popcount(k & m) % 2 ? -1.0 : 1.0) * input[m];
    EXPECT_DOUBLE_EQ(data[k], expected);
  }
  walsh_hadamard_inplace(data);
  for (std::size_t k = 0; k < 8; ++k) EXPECT_DOUBLE_EQ(data[k], 8.0 * input[k]);
}
