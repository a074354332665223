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

#include "rydcoll/singlebody.hpp"

#include <cmath>
#include <limits>

#include "rydcoll/error.hpp"

namespace rydcoll {

namespace {

constexpr double kSmallC = 1e-8;

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

}  // namespace

SingleBodyParams SingleBodyParams::from_model(const ModelParams& params) {
  params.validate();
  return {params.omega * params.dt, std::sqrt(params.gamma * params.dt), params.delta * params.dt};
}

double analytic_activity(const SingleBodyParams& p) {
  if (p.detuning != 0.0) throw InvalidArgument("closed form requires zero detuning");
  const double root = std::sqrt(p.c());
  const double s = sinc(0.5 * root);
  return 0.5 - 0.5 * std::cos(p.b) * (1.0 - 0.5 * p.b * p.b * s * s);
}

double analytic_correlation(const SingleBodyParams& p) {
  if (p.detuning != 0.0) throw InvalidArgument("closed form requires zero detuning");
  const double c = p.c();
  if (c < kSmallC) return 0.0;
  const double root = std::sqrt(c);
  const double s = sinc(0.5 * root);
  const double sb = std::sin(p.b);
  const double bracket = (8.0 * p.a * p.a + p.b * p.b) * std::cos(root) + p.b * p.b;
  return (p.b * p.b / c) * sb * sb * 0.125 * s * s * bracket;
}

std::vector<DetuningScanRow> detuning_phase_scan(const ModelParams& base, std::span<const double> detunings,
                                                 std::span<const double> s_values, const TiltOptions& options) {
  const SpaceTimeOffset offsets[] = {{0, 1}};
  std::vector<DetuningScanRow> rows;
  rows.reserve(detunings.size() * s_values.size());
  for (double detuning : detunings) {
    ModelParams params = base;
    params.sites = 1;
    params.v = 0.0;
    params.delta = detuning;
    const auto kf = build_kraus_fast(params);
    TiltedSolution previous;
    bool have_previous = false;
    for (double s : s_values) {
      DetuningScanRow row;
      row.detuning = detuning;
      row.s = s;
      try {
        TiltedSolution sol;
        const auto values =
            s_ensemble_order_parameters(kf, s, offsets, options, &sol, have_previous ? &previous : nullptr);
        row.activity = values.activity;
        row.c_0_1 = values.correlations[0];
        row.lambda = values.lambda;
        previous = std::move(sol);
        have_previous = true;
      } catch (const ConvergenceError&) {
        row.activity = row.c_0_1 = row.lambda = std::numeric_limits<double>::quiet_NaN();
        row.converged = false;
      }
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace rydcoll
