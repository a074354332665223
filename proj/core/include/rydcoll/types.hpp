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

#include <bit>
#include <complex>
#include <cstddef>
#include <cstdint>

#include <Eigen/Dense>

namespace rydcoll {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Computational basis index. Site 0 is the most significant bit, so the
/// string "0110" at L=4 is index 6. Outcome strings k and sign strings m use
/// the same packing.
using BasisIndex = std::uint32_t;

/// Default hard cap on the chain length (dense 2^L x 2^L storage).
inline constexpr int kMaxSites = 8;

constexpr BasisIndex site_mask(int site, int sites) {
  return BasisIndex{1} << (sites - 1 - site);
}

constexpr int site_bit(BasisIndex state, int site, int sites) {
  return static_cast<int>((state >> (sites - 1 - site)) & 1u);
}

constexpr int popcount(BasisIndex k) { return std::popcount(k); }

constexpr std::size_t hilbert_dim(int sites) { return std::size_t{1} << sites; }

}  // namespace rydcoll
