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

#include <cmath>

#include "rydcoll/error.hpp"
#include "rydcoll/linalg.hpp"
#include "rydcoll/model.hpp"
#include "rydcoll/tilted.hpp"

using namespace rydcoll;

namespace {

double log_lambda(const KrausFamily& kf, double s) { return std::log(dominant_eigenpair(kf, s).lambda); }

}  // namespace

TEST(TiltedMap, ReductionsOfTheDual) {
  const auto kf = build_kraus_fast(ModelParams::reference(3));
  const Matrix id = Matrix::Identity(8, 8);
  EXPECT_LT(max_abs(apply_tilted_dual(kf, 0.0, id) - id), 1e-12);

  const Matrix x = DensityMatrix::basis_state(3, 5).data + 0.5 * id;
  const Matrix only_zero = kf.ops[0].adjoint() * x * kf.ops[0];
  EXPECT_LT(max_abs(apply_tilted_dual(kf, 50.0, x) - only_zero), 1e-20 + 1e-15 * max_abs(only_zero));

  auto p = ModelParams::reference(2);
  p.gamma = 0.0;
  const auto unitary = build_kraus_fast(p);
  const Matrix u = hermitian_propagator(build_system_hamiltonian(p).data, p.dt);
  const Matrix y = DensityMatrix::basis_state(2, 1).data;
  EXPECT_LT(max_abs(apply_tilted_dual(unitary, 0.7, y) - u.adjoint() * y * u), 1e-12);
}

TEST(TiltedMap, ForwardAndDualAreAdjoint) {
  const auto kf = build_kraus_fast(ModelParams::reference(2));
  const Matrix rho = DensityMatrix::basis_state(2, 1).data;
  const Matrix x = DensityMatrix::basis_state(2, 2).data + 0.3 * Matrix::Identity(4, 4);
  EXPECT_NEAR(std::abs(trace_product(x, apply_tilted(kf, 0.4, rho)) -
                       trace_product(apply_tilted_dual(kf, 0.4, x), rho)),
              0.0, 1e-14);
}

TEST(DominantEigenpair, ZeroFieldIsIdentity) {
  const auto kf = build_kraus_fast(ModelParams::reference(4));
  const auto eig = dominant_eigenpair(kf, 0.0);
  EXPECT_NEAR(eig.lambda, 1.0, 1e-12);
  EXPECT_LT(max_abs(eig.left - Matrix::Identity(16, 16)), 1e-12);
}

TEST(DominantEigenpair, MatchesDenseSuperoperator) {
  for (int L : {1, 2, 3}) {
    const auto kf = build_kraus_fast(ModelParams::reference(L));
    for (double s : {-0.4, 0.2, 0.5}) {
      const double dense = dominant_eigenvalue_dense(kf, s);
      for (auto method : {EigenMethod::Power, EigenMethod::Krylov}) {
        EigenSolveOptions o;
        o.method = method;
        const auto eig = dominant_eigenpair(kf, s, o);
        EXPECT_NEAR(eig.lambda, dense, 1e-10 * dense) << "L=" << L << " s=" << s;
        EXPECT_LE(eig.residual, 1e-10);
        EXPECT_NEAR(eig.left.trace().real(), static_cast<double>(hilbert_dim(L)), 1e-10);
        EXPECT_GT(min_eigenvalue(eig.left), 0.0);
      }
    }
  }
}

TEST(DominantEigenpair, SingleSitePositiveFieldShrinksEigenvalue) {
  const auto kf = build_kraus_fast(ModelParams::reference(1));
  const auto eig = dominant_eigenpair(kf, 0.2);
  EXPECT_GT(eig.lambda, 0.0);
  EXPECT_LT(eig.lambda, 1.0);
}

TEST(DominantEigenpair, DerivativeAtZeroIsActivity) {
  for (int L : {1, 2, 3}) {
    auto p = ModelParams::reference(L);
    // periodic L=3 has a near crossing within ~1e-4 of s=0
    p.pbc = L < 3;
    const auto kf = build_kraus_fast(p);
    const double h = 1e-6;
    const double slope = (log_lambda(kf, h) - log_lambda(kf, -h)) / (2 * h);
    const double activity = ensemble_activity(kf, DensityMatrix::maximally_mixed(L));
    EXPECT_NEAR(-slope / L, activity, 1e-6 * activity) << L;
  }
}

TEST(DominantEigenpair, BudgetExhaustionThrows) {
  const auto kf = build_kraus_fast(ModelParams::reference(3));
  EigenSolveOptions o;
  o.method = EigenMethod::Power;
  o.max_applications = 2;
  EXPECT_THROW(dominant_eigenpair(kf, 0.3, o), ConvergenceError);
}

TEST(BiasedKraus, ReducesToOriginalAtZeroField) {
  const auto kf = build_kraus_fast(ModelParams::reference(3));
  const auto biased = build_biased_kraus(kf, 0.0, dominant_eigenpair(kf, 0.0));
  EXPECT_FALSE(biased.ill_conditioned);
  for (std::size_t k = 0; k < kf.outcomes(); ++k) EXPECT_LT(max_abs(biased.family.ops[k] - kf.ops[k]), 1e-12);
}

TEST(BiasedKraus, CompleteForAnyField) {
  const auto kf = build_kraus_fast(ModelParams::reference(3));
  for (double s : {-0.5, -0.1, 0.15, 0.5, 1.0}) {
    const auto biased = build_biased_kraus(kf, s, dominant_eigenpair(kf, s));
    EXPECT_LE(completeness_residual(biased.family.ops), 1e-10) << s;
    EXPECT_FALSE(biased.family.is_unbiased());
  }
}

TEST(BiasedKraus, RejectsIndefiniteLeftOperator) {
  const auto kf = build_kraus_fast(ModelParams::reference(1));
  DominantEigenpair eig;
  eig.left = Matrix::Identity(2, 2);
  eig.left(1, 1) = -1.0;
  EXPECT_THROW(build_biased_kraus(kf, 0.1, eig), NumericalError);
}

TEST(BiasedKraus, FlagsFlooredEigenvalues) {
  const auto kf = build_kraus_fast(ModelParams::reference(1));
  DominantEigenpair eig;
  eig.left = Matrix::Zero(2, 2);
  eig.left(0, 0) = 2.0;
  EXPECT_TRUE(build_biased_kraus(kf, 0.1, eig).ill_conditioned);
}

TEST(BiasedStationary, ZeroFieldIsFullyMixed) {
  const auto kf = build_kraus_fast(ModelParams::reference(3));
  const auto sol = solve_tilted(kf, 0.0);
  EXPECT_LT(max_abs(sol.biased_stationary.data - DensityMatrix::maximally_mixed(3).data), 1e-10);
}

TEST(BiasedStationary, SingleSiteFixedPoint) {
  const auto kf = build_kraus_fast(ModelParams::reference(1));
  for (auto method : {StationaryMethod::FixedPoint, StationaryMethod::Krylov}) {
    TiltOptions o;
    o.stationary_method = method;
    const auto sol = solve_tilted(kf, 1.0, o);
    EXPECT_NEAR(sol.biased_stationary.data.trace().real(), 1.0, 1e-12);
    const auto again = apply_channel(sol.biased, sol.biased_stationary);
    EXPECT_LT(trace_norm(again.data - sol.biased_stationary.data), o.stationary_tol);
    EXPECT_NO_THROW(check_density_matrix(sol.biased_stationary));
  }
}

TEST(SEnsemble, ZeroFieldMatchesUnbiasedValues) {
  const auto kf = build_kraus_fast(ModelParams::reference(4));
  const SpaceTimeOffset offsets[] = {{0, 1}, {1, 0}};
  const auto biased = s_ensemble_order_parameters(kf, 0.0, offsets);
  const auto plain = stationary_values(kf, DensityMatrix::maximally_mixed(4), offsets);
  EXPECT_NEAR(biased.activity, plain.at("activity"), 1e-8);
  EXPECT_NEAR(biased.correlations[0], plain.at("c_0_1"), 1e-8);
  EXPECT_NEAR(biased.correlations[1], plain.at("c_1_0"), 1e-8);
}

TEST(SEnsemble, SingleSiteActivitySuppressedByPositiveField) {
  const auto kf = build_kraus_fast(ModelParams::reference(1));
  const SpaceTimeOffset offsets[] = {{0, 1}};
  EXPECT_LT(s_ensemble_order_parameters(kf, 0.3, offsets).activity, 0.5447);
}

TEST(SEnsemble, HellmannFeynmanAndMonotonicity) {
  const auto kf = build_kraus_fast(ModelParams::reference(3));
  const SpaceTimeOffset offsets[] = {{0, 1}};
  double previous = 2.0;
  TiltedSolution warm;
  for (int i = 0; i < 21; ++i) {
    const double s = -0.5 + 0.05 * i;
    TiltedSolution sol;
    const auto v = s_ensemble_order_parameters(kf, s, offsets, {}, &sol, i ? &warm : nullptr);
    warm = sol;
    EXPECT_LE(v.activity, previous + 1e-12) << s;
    previous = v.activity;
    if (i % 5 == 2) {
      const double h = 1e-4;
      const double fd = -(log_lambda(kf, s + h) - log_lambda(kf, s - h)) / (2 * h) / 3;
      EXPECT_NEAR(fd, v.activity, 1e-5 * v.activity) << s;
    }
  }
}

TEST(PhaseDiagram, DeterministicAcrossWorkerCounts) {
  PhaseDiagramGrid grid;
  grid.v_values = {0.0, 5.875, 10.0};
  grid.s_values = {-0.2, 0.0, 0.2};
  const auto base = ModelParams::reference(3);
  const auto a = phase_diagram_sweep(base, grid, {}, 1);
  const auto b = phase_diagram_sweep(base, grid, {}, 3);
  ASSERT_EQ(a.size(), 9u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].v, b[i].v);
    EXPECT_EQ(a[i].s, b[i].s);
    EXPECT_EQ(a[i].c_0_1, b[i].c_0_1);
    EXPECT_EQ(a[i].activity, b[i].activity);
    EXPECT_TRUE(a[i].converged);
  }
  EXPECT_EQ(a[4].v, 5.875);
  EXPECT_EQ(a[4].s, 0.0);
  EXPECT_NEAR(a[4].lambda, 1.0, 1e-12);
}

TEST(PhaseDiagram, UnconvergedPointsAreFlagged) {
  PhaseDiagramGrid grid;
  grid.v_values = {5.875};
  grid.s_values = {0.3};
  TiltOptions o;
  o.eigen.method = EigenMethod::Power;
  o.eigen.max_applications = 2;
  const auto rows = phase_diagram_sweep(ModelParams::reference(3), grid, o, 1);
  EXPECT_FALSE(rows[0].converged);
  EXPECT_TRUE(std::isnan(rows[0].c_0_1));
}

TEST(PartitionFunction, ZeroFieldIsOne) {
  const auto kf = build_kraus_fast(ModelParams::reference(2));
  EXPECT_NEAR(partition_function(kf, 0.0, DensityMatrix::basis_state(2, 0), 25).z(), 1.0, 1e-12);
}

TEST(PartitionFunction, GrowthRateIsLogEigenvalue) {
  const auto kf = build_kraus_fast(ModelParams::reference(1));
  const auto z = partition_function(kf, 0.2, DensityMatrix::maximally_mixed(1), 50);
  EXPECT_NEAR(z.log_z / 50, log_lambda(kf, 0.2), 1e-3);
}

TEST(PartitionFunction, MatchesPathEnumeration) {
  const auto kf = build_kraus_fast(ModelParams::reference(2));
  for (const auto& rho : {DensityMatrix::maximally_mixed(2), DensityMatrix::basis_state(2, 0)}) {
    const double iterated = partition_function(kf, 0.1, rho, 3).z();
    const double enumerated = partition_function_enumerated(kf, 0.1, rho, 3);
    EXPECT_NEAR(iterated, enumerated, 1e-12);
  }
}
