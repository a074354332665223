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

#pragma once

#include <cstddef>
#include <vector>

#include "rydcoll/types.hpp"

namespace rydcoll {

/// exp(-i H t) for Hermitian H via eigendecomposition.
Matrix hermitian_propagator(const Matrix& hamiltonian, double t);

struct HermitianPowerResult {
  Matrix value;
  bool floored = false;  ///< some eigenvalue was raised to the floor
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
};

/// A^p for Hermitian positive semidefinite A. Eigenvalues below
/// floor_relative * max_eigenvalue are replaced by that floor.
HermitianPowerResult hermitian_power(const Matrix& a, double p, double floor_relative);

/// Sum of |eigenvalues| of a Hermitian matrix.
double trace_norm(const Matrix& hermitian);

double min_eigenvalue(const Matrix& hermitian);

inline double max_abs(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

inline void make_hermitian(Matrix& a) { a = (0.5 * (a + a.adjoint())).eval(); }

/// Tr(A B) without forming the product.
inline Complex trace_product(const Matrix& a, const Matrix& b) {
  return a.transpose().cwiseProduct(b).sum();
}

/// Unnormalised in-place Walsh-Hadamard transform,
/// out[k] = sum_m (-1)^{popcount(k & m)} in[m]. Works for any element type
/// with + and - (scalars, vectors, matrices). Size must be a power of two.
template <class T>
void walsh_hadamard_inplace(std::vector<T>& data) {
  const std::size_t n = data.size();
  for (std::size_t h = 1; h < n; h <<= 1) {
    for (std::size_t block = 0; block < n; block += 2 * h) {
      for (std::size_t j = block; j < block + h; ++j) {
        T sum = data[j] + data[j + h];
        data[j + h] = data[j] - data[j + h];
        data[j] = std::move(sum);
      }
    }
  }
}

}  // namespace rydcoll
