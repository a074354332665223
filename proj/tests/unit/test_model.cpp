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

#include "rydcoll/error.hpp"
#include "rydcoll/linalg.hpp"
#include "rydcoll/model.hpp"

using namespace rydcoll;

namespace {

Matrix pauli_x() {
  Matrix x = Matrix::Zero(2, 2);
  x(0, 1) = x(1, 0) = 1.0;
  return x;
}

// Lucas numbers count blockade-free necklaces, Fibonacci numbers open strings.
int rank_of(const Matrix& diag_projector) { return static_cast<int>(std::lround(diag_projector.trace().real())); }

}  // namespace

TEST(ModelParams, RejectsInvalidValues) {
  ModelParams p;
  EXPECT_NO_THROW(p.validate());
  p.sites = 0;
  EXPECT_THROW(p.validate(), InvalidArgument);
  p = {};
  p.dt = 0.0;
  EXPECT_THROW(p.validate(), InvalidArgument);
  p = {};
  p.gamma = -1.0;
  EXPECT_THROW(p.validate(), InvalidArgument);
  p = {};
  p.v = std::nan("");
  EXPECT_THROW(p.validate(), InvalidArgument);
}

TEST(SystemHamiltonian, SingleSiteIsSigmaX) {
  ModelParams p;
  p.sites = 1;
  p.v = 7.0;
  const auto h = build_system_hamiltonian(p);
  EXPECT_LT(max_abs(h.data - pauli_x()), 1e-15);
}

TEST(SystemHamiltonian, TwoSitePeriodicCountsBothBonds) {
  ModelParams p;
  p.sites = 2;
  p.omega = 0.0;
  p.v = 1.0;
  const auto h = build_system_hamiltonian(p);
  Matrix expected = Matrix::Zero(4, 4);
  expected(3, 3) = 2.0;
  EXPECT_LT(max_abs(h.data - expected), 1e-15);
}

TEST(SystemHamiltonian, DiagonalCountsAdjacentPairs) {
  auto p = ModelParams::reference(6);
  const auto h = build_system_hamiltonian(p);
  EXPECT_LT(hermiticity_residual(h.data), 1e-12);
  for (BasisIndex x = 0; x < 64; ++x) {
    int pairs = 0;
    for (int i = 0; i < 6; ++i) pairs += site_bit(x, i, 6) & site_bit(x, (i + 1) % 6, 6);
    EXPECT_NEAR(h.data(x, x).real(), 5.875 * pairs, 1e-12) << x;
  }
}

TEST(SystemHamiltonian, OpenChainDropsWrapBond) {
  ModelParams p;
  p.sites = 3;
  p.omega = 0.0;
  p.v = 1.0;
  p.pbc = false;
  const auto h = build_system_hamiltonian(p);
  EXPECT_DOUBLE_EQ(h.data(0b101, 0b101).real(), 0.0);
  EXPECT_DOUBLE_EQ(h.data(0b111, 0b111).real(), 2.0);
}

TEST(SystemHamiltonian, DetuningAddsOccupation) {
  ModelParams p;
  p.sites = 2;
  p.omega = 0.0;
  p.delta = 0.5;
  const auto h = build_system_hamiltonian(p);
  EXPECT_DOUBLE_EQ(h.data(0b01, 0b01).real(), 0.5);
  EXPECT_DOUBLE_EQ(h.data(0b11, 0b11).real(), 1.0);
}

TEST(SystemHamiltonian, CommutesWithGlobalFlipWithoutInteraction) {
  ModelParams p;
  p.sites = 4;
  p.omega = 1.3;
  const auto h = build_system_hamiltonian(p).data;
  Matrix flip = Matrix::Identity(16, 16);
  for (int i = 0; i < 4; ++i) flip = (sigma_x(4, i).data * flip).eval();
  EXPECT_EQ(max_abs(h * flip - flip * h), 0.0);
}

TEST(SystemHamiltonian, ResourceCap) {
  ModelParams p;
  p.sites = 9;
  EXPECT_THROW(build_system_hamiltonian(p), ResourceError);
  p.sites = 5;
  EXPECT_THROW(build_system_hamiltonian(p, 4), ResourceError);
}

TEST(CollisionBlock, ReducesToSystemHamiltonianWithoutCoupling) {
  auto p = ModelParams::reference(3);
  p.gamma = 0.0;
  const auto hs = build_system_hamiltonian(p).data;
  for (BasisIndex m = 0; m < 8; ++m) {
    EXPECT_EQ(max_abs(build_collision_block(p, {m}).data - hs), 0.0);
  }
}

TEST(CollisionBlock, SingleSiteDiagonal) {
  ModelParams p;
  p.omega = 0.0;
  p.gamma = 3.0;
  p.dt = 0.75;
  const auto h = build_collision_block(p, {0}).data;
  EXPECT_NEAR(h(0, 0).real(), 2.0, 1e-15);
  EXPECT_NEAR(std::abs(h(1, 1)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(h(0, 1)), 0.0, 1e-15);
}

TEST(CollisionBlock, OppositeSignStringsDifferBySignOfCoupling) {
  auto p = ModelParams::reference(3);
  const auto hs = build_system_hamiltonian(p).data;
  const auto plus = build_collision_block(p, {0b000}).data;
  const auto minus = build_collision_block(p, {0b111}).data;
  EXPECT_LT(max_abs((plus - hs) + (minus - hs)), 1e-14);
  EXPECT_LT(hermiticity_residual(plus), 1e-12);
}

TEST(PxpProjector, RanksMatchCombinatorialCounts) {
  const int lucas[] = {0, 0, 3, 4, 7, 11, 18, 29, 47};
  const int fibonacci[] = {0, 0, 3, 5, 8, 13, 21, 34, 55};
  for (int L = 2; L <= 8; ++L) {
    const auto periodic = build_pxp_projector(L, true).data;
    const auto open = build_pxp_projector(L, false).data;
    EXPECT_EQ(rank_of(periodic), lucas[L]) << L;
    EXPECT_EQ(rank_of(open), fibonacci[L]) << L;
    EXPECT_LT(max_abs(periodic * periodic - periodic), 1e-12);
    EXPECT_DOUBLE_EQ(periodic(periodic.rows() - 1, periodic.rows() - 1).real(), 0.0);
  }
}

TEST(PxpProjector, TwoSiteImage) {
  const auto p = build_pxp_projector(2, true).data;
  EXPECT_DOUBLE_EQ(p(0, 0).real(), 1.0);
  EXPECT_DOUBLE_EQ(p(1, 1).real(), 1.0);
  EXPECT_DOUBLE_EQ(p(2, 2).real(), 1.0);
  EXPECT_DOUBLE_EQ(p(3, 3).real(), 0.0);
  EXPECT_THROW(build_pxp_projector(1, true), InvalidArgument);
}

TEST(PxpHamiltonian, StructureAndSectorPreservation) {
  for (bool pbc : {true, false}) {
    for (int L = 3; L <= 6; ++L) {
      const auto h = build_pxp_hamiltonian(L, pbc).data;
      const auto p = build_pxp_projector(L, pbc).data;
      EXPECT_LT(hermiticity_residual(h), 1e-12);
      EXPECT_LT(max_abs(h * p - p * h), 1e-12);
      for (BasisIndex x = 0; x < h.rows(); ++x) {
        for (BasisIndex y = 0; y < h.cols(); ++y) {
          if (h(x, y) == Complex{}) continue;
          EXPECT_EQ(popcount(x ^ y), 1);
          EXPECT_EQ(is_blockade_free(x, L, pbc), is_blockade_free(y, L, pbc));
        }
      }
    }
  }
  const auto h3 = build_pxp_hamiltonian(3, true).data;
  EXPECT_DOUBLE_EQ(h3(0b000, 0b100).real(), 1.0);
}
