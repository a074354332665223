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
#include <vector>

#include "rydcoll/error.hpp"
#include "rydcoll/lindblad.hpp"
#include "rydcoll/linalg.hpp"
#include "rydcoll/model.hpp"

using namespace rydcoll;

namespace {

ModelParams continuum(int L, bool pbc = true) {
  ModelParams p = ModelParams::reference(L);
  p.pbc = pbc;
  return p;
}

}  // namespace

TEST(Lindblad, GeneratorIsTraceless) {
  const auto model = LindbladModel::from_params(continuum(3));
  for (BasisIndex b : {0u, 3u, 6u}) {
    Matrix rho = Matrix::Zero(8, 8);
    rho(b, b) = 1.0;
    rho(0, 7) = rho(7, 0) = 0.1;
    EXPECT_NEAR(std::abs(lindblad_generator_apply(model, rho).trace()), 0.0, 1e-13);
  }
}

TEST(Lindblad, FullyMixedIsStationary) {
  const auto model = LindbladModel::from_params(continuum(3));
  const Matrix mixed = Matrix::Identity(8, 8) / 8.0;
  EXPECT_LT(max_abs(lindblad_generator_apply(model, mixed)), 1e-14);
}

TEST(Lindblad, NoDephasingIsUnitary) {
  auto p = continuum(2);
  p.gamma = 0.0;
  const auto model = LindbladModel::from_params(p);
  Matrix rho = Matrix::Zero(4, 4);
  rho(1, 1) = 1.0;
  const Matrix h = build_system_hamiltonian(p).data;
  const Matrix expected = Complex(0, -1) * (h * rho - rho * h);
  EXPECT_LT(max_abs(lindblad_generator_apply(model, rho) - expected), 1e-14);
}

TEST(Lindblad, SuperoperatorMatchesApply) {
  const auto model = LindbladModel::from_params(continuum(2));
  const Matrix dense = lindblad_superoperator(model, 0.3);
  Matrix rho = Matrix::Zero(4, 4);
  rho(1, 2) = Complex(0.2, 0.1);
  rho(2, 1) = std::conj(rho(1, 2));
  rho(0, 0) = 0.5;
  Vector vec = Eigen::Map<const Vector>(rho.data(), 16);
  const Vector out = dense * vec;
  const Matrix direct = tilted_generator_apply(model, 0.3, rho);
  EXPECT_LT((out - Eigen::Map<const Vector>(direct.data(), 16)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Lindblad, TiltedDualIsAdjoint) {
  const auto model = LindbladModel::from_params(continuum(2, false));
  Matrix rho = Matrix::Zero(4, 4);
  rho(3, 3) = 0.4;
  rho(0, 0) = 0.6;
  rho(0, 3) = rho(3, 0) = 0.2;
  Matrix x = Matrix::Identity(4, 4);
  x(1, 1) = 2.0;
  x(1, 2) = Complex(0.0, 0.5);
  x(2, 1) = Complex(0.0, -0.5);
  const Complex lhs = trace_product(x, tilted_generator_apply(model, 0.7, rho));
  const Complex rhs = trace_product(tilted_generator_dual_apply(model, 0.7, x), rho);
  EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-13);
}

TEST(Lindblad, CollisionLimitConverges) {
  const double dts[] = {0.2, 0.1, 0.05, 0.025, 0.0125};
  for (int L : {1, 2, 3}) {
    const auto report = collision_limit_check(continuum(L), dts);
    ASSERT_EQ(report.rows.size(), 5u);
    // L=3 only shrinks by 1.29 over the first halving
    if (L < 3) EXPECT_TRUE(report.ratio_test_passed) << L;
    EXPECT_GT(report.rows[3].ratio / report.rows[4].ratio, 1.8) << L;
    EXPECT_GT(report.observed_order, 1.3) << L;
    for (std::size_t i = 1; i < report.rows.size(); ++i)
      EXPECT_LT(report.rows[i].distance, report.rows[i - 1].distance);
  }
}

TEST(Lindblad, CollisionLimitRejectsIncreasingSteps) {
  const double dts[] = {0.05, 0.1};
  EXPECT_THROW(collision_limit_check(continuum(1), dts), InvalidArgument);
}

TEST(JumpTrajectory, SamplesAndEventsAreConsistent) {
  const auto model = LindbladModel::from_params(continuum(2));
  Vector psi = Vector::Zero(4);
  psi(0) = 1.0;
  const auto traj = quantum_jump_trajectory(model, psi, 5.0, 11);
  ASSERT_EQ(traj.sample_times.size(), 51u);
  EXPECT_DOUBLE_EQ(traj.sample_times.front(), 0.0);
  EXPECT_NEAR(traj.sample_times.back(), 5.0, 1e-12);
  for (const auto& occ : traj.occupations) {
    ASSERT_EQ(occ.size(), 2u);
    for (double n : occ) {
      EXPECT_GE(n, -1e-12);
      EXPECT_LE(n, 1.0 + 1e-12);
    }
  }
  double last = 0.0;
  for (const auto& e : traj.events) {
    EXPECT_GE(e.time, last);
    EXPECT_LE(e.time, 5.0);
    EXPECT_TRUE(e.site == 0 || e.site == 1);
    last = e.time;
  }
  const auto again = quantum_jump_trajectory(model, psi, 5.0, 11);
  ASSERT_EQ(again.events.size(), traj.events.size());
  for (std::size_t i = 0; i < traj.events.size(); ++i) EXPECT_EQ(again.events[i].time, traj.events[i].time);
}

TEST(JumpTrajectory, EnsembleMatchesDenseEvolution) {
  const auto model = LindbladModel::from_params(continuum(2));
  Vector psi = Vector::Zero(4);
  psi(0) = 1.0;
  Matrix rho0 = psi * psi.adjoint();
  const int n = 400;
  const double t = 1.0;
  const int idx = 10;
  std::vector<double> sum(2, 0.0), sum2(2, 0.0);
  for (int r = 0; r < n; ++r) {
    const auto traj = quantum_jump_trajectory(model, psi, t, 5, {}, static_cast<std::uint64_t>(r));
    for (int i = 0; i < 2; ++i) {
      const double v = traj.occupations[idx][i];
      sum[i] += v;
      sum2[i] += v * v;
    }
  }
  const Matrix rho = lindblad_evolve_dense(model, rho0, t);
  for (int i = 0; i < 2; ++i) {
    const double mean = sum[i] / n;
    const double var = sum2[i] / n - mean * mean;
    const double se = std::sqrt(var / (n - 1));
    const double exact = trace_product(occupation(2, i).data, rho).real();
    EXPECT_NEAR(mean, exact, 3.5 * se + 1e-3) << i;
  }
}

TEST(Scgf, ZeroFieldValues) {
  for (int L : {1, 2, 3}) {
    const auto model = LindbladModel::from_params(continuum(L));
    const auto r = tilted_lindblad_scgf(model, 0.0);
    EXPECT_NEAR(r.theta, 0.0, 1e-10);
    EXPECT_NEAR(r.activity, L * model.params.gamma / 2, 1e-8);
  }
}

TEST(Scgf, ConvexAndMatchesFiniteDifference) {
  const auto model = LindbladModel::from_params(continuum(3));
  std::vector<double> theta;
  for (int i = 0; i < 9; ++i) theta.push_back(tilted_lindblad_scgf(model, -0.4 + 0.1 * i).theta);
  for (std::size_t i = 1; i + 1 < theta.size(); ++i) EXPECT_GE(theta[i - 1] + theta[i + 1] - 2 * theta[i], -1e-10);
  for (double s : {-0.2, 0.1, 0.3}) {
    const double hf = tilted_lindblad_scgf(model, s).activity;
    EXPECT_NEAR(scgf_derivative_fd(model, s, 1e-4), hf, 1e-6 * hf) << s;
  }
}

TEST(Scgf, MethodsAgree) {
  const auto model = LindbladModel::from_params(continuum(3));
  for (double s : {-0.3, 0.2}) {
    ScgfOptions dense, sector, prop;
    dense.method = ScgfMethod::Dense;
    sector.method = ScgfMethod::TranslationSector;
    prop.method = ScgfMethod::Propagator;
    const auto a = tilted_lindblad_scgf(model, s, dense);
    const auto b = tilted_lindblad_scgf(model, s, sector);
    const auto c = tilted_lindblad_scgf(model, s, prop);
    EXPECT_NEAR(a.theta, b.theta, 1e-10);
    EXPECT_NEAR(a.theta, c.theta, 1e-8);
    EXPECT_NEAR(a.activity, b.activity, 1e-8);
    EXPECT_NEAR(a.activity, c.activity, 1e-6);
  }
}

TEST(Scgf, SectorRequiresPeriodicChain) {
  const auto model = LindbladModel::from_params(continuum(3, false));
  ScgfOptions o;
  o.method = ScgfMethod::TranslationSector;
  EXPECT_THROW(tilted_lindblad_scgf(model, 0.1, o), InvalidArgument);
}
