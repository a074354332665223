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

#include <benchmark/benchmark.h>

#include "rydcoll/channel.hpp"
#include "rydcoll/lindblad.hpp"
#include "rydcoll/observables.hpp"
#include "rydcoll/tilted.hpp"
#include "rydcoll/trajectory.hpp"

using namespace rydcoll;

static void BM_KrausFast(benchmark::State& state) {
  const auto p = ModelParams::reference(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_kraus_fast(p));
}
BENCHMARK(BM_KrausFast)->DenseRange(2, 7)->Unit(benchmark::kMillisecond);

static void BM_KrausDense(benchmark::State& state) {
  const auto p = ModelParams::reference(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_kraus_dense(p));
}
BENCHMARK(BM_KrausDense)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

static void BM_TiltedDual(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0));
  const auto kf = build_kraus_fast(ModelParams::reference(L));
  const Matrix x = DensityMatrix::maximally_mixed(L).data;
  for (auto _ : state) benchmark::DoNotOptimize(apply_tilted_dual(kf, 0.2, x));
}
BENCHMARK(BM_TiltedDual)->DenseRange(2, 7)->Unit(benchmark::kMicrosecond);

static void BM_TrajectorySteps(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0));
  const auto kf = build_kraus_fast(ModelParams::reference(L));
  const auto psi0 = PureState::basis_state(L, 0);
  std::uint64_t seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(sample_trajectory(kf, psi0, 100, seed++));
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_TrajectorySteps)->DenseRange(2, 7)->Unit(benchmark::kMillisecond);

static void BM_DominantEigenpair(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0));
  const auto kf = build_kraus_fast(ModelParams::reference(L));
  for (auto _ : state) benchmark::DoNotOptimize(dominant_eigenpair(kf, 0.3));
}
BENCHMARK(BM_DominantEigenpair)->DenseRange(2, 6)->Unit(benchmark::kMillisecond);

static void BM_OrderParameters(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0));
  const auto kf = build_kraus_fast(ModelParams::reference(L));
  const SpaceTimeOffset offsets[] = {{0, 1}, {1, 0}};
  const OrderParameterEvaluator eval(kf, offsets);
  const auto rho = DensityMatrix::maximally_mixed(L);
  for (auto _ : state) benchmark::DoNotOptimize(eval.evaluate(rho));
}
BENCHMARK(BM_OrderParameters)->DenseRange(2, 6)->Unit(benchmark::kMillisecond);

static void BM_ScgfSector(benchmark::State& state) {
  auto p = ModelParams::reference(static_cast<int>(state.range(0)));
  p.v = 6.0;
  const auto model = LindbladModel::from_params(p);
  for (auto _ : state) benchmark::DoNotOptimize(tilted_lindblad_scgf(model, 0.1));
}
BENCHMARK(BM_ScgfSector)->DenseRange(4, 6)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
