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

#include <span>
#include <vector>

#include "rydcoll/params.hpp"
#include "rydcoll/tilted.hpp"

namespace rydcoll {

/// Dimensionless single-qubit parameters a = omega dt, b = sqrt(gamma dt).
struct SingleBodyParams {
  double a = 0.0;
  double b = 0.0;
  double detuning = 0.0;  ///< delta * dt

  double c() const { return 4.0 * a * a + b * b; }

  static SingleBodyParams from_model(const ModelParams& params);
};

/// Stationary probability of a '1' outcome at L = 1, zero detuning.
double analytic_activity(const SingleBodyParams& p);

/// Stationary temporal covariance at delta = (0, 1), L = 1, zero detuning.
double analytic_correlation(const SingleBodyParams& p);

struct DetuningScanRow {
  double detuning = 0.0;
  double s = 0.0;
  double activity = 0.0;
  double c_0_1 = 0.0;
  double lambda = 1.0;
  bool converged = true;
};

/// Single-qubit s-ensemble order parameters over a (detuning, s) grid.
/// `base` supplies omega, gamma and dt; its sites/v/delta are ignored.
std::vector<DetuningScanRow> detuning_phase_scan(const ModelParams& base, std::span<const double> detunings,
                                                 std::span<const double> s_values,
                                                 const TiltOptions& options = {});

}  // namespace rydcoll
