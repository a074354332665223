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

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "rydcoll/eigensolver.hpp"
#include "rydcoll/params.hpp"
#include "rydcoll/types.hpp"

namespace rydcoll {

/// Continuous-time limit: H_S with Hermitian jumps J_i = sqrt(gamma) P_i.
struct LindbladModel {
  ModelParams params;
  Matrix hamiltonian;
  std::vector<Matrix> jumps;
  Matrix effective_hamiltonian;  ///< H_S - (i/2) sum_i J_i^2

  int sites() const { return params.sites; }
  std::size_t dim() const { return params.dim(); }

  static LindbladModel from_params(const ModelParams& params);
};

/// L[rho] = -i[H, rho] + sum_i (J_i rho J_i - {J_i^2, rho}/2)
Matrix lindblad_generator_apply(const LindbladModel& model, const Matrix& rho);

/// Tilted generator with jump terms weighted by e^{-s}.
Matrix tilted_generator_apply(const LindbladModel& model, double s, const Matrix& rho);
Matrix tilted_generator_dual_apply(const LindbladModel& model, double s, const Matrix& x);

/// Matrix of a linear map on d x d matrices in the column-major vec basis.
Matrix superoperator_matrix(const std::function<Matrix(const Matrix&)>& map, std::size_t dim);

/// Dense tilted generator; L <= 3.
Matrix lindblad_superoperator(const LindbladModel& model, double s = 0.0);

struct CollisionLimitRow {
  double dt = 0.0;
  double distance = 0.0;  ///< max-norm distance between E_dt and exp(L dt)
  double ratio = 0.0;     ///< distance / dt
};

struct CollisionLimitReport {
  std::vector<CollisionLimitRow> rows;
  double observed_order = 0.0;  ///< fitted exponent of distance ~ dt^order
  bool ratio_test_passed = false;
};

/// Compares the collision channel with the Lindblad propagator for each dt.
/// The ratio test requires distance/dt to shrink by at least 1.3 per halving
/// of dt (consecutive dt values must be in decreasing order). L <= 3.
CollisionLimitReport collision_limit_check(const ModelParams& params, std::span<const double> dt_list);

struct JumpEvent {
  double time = 0.0;
  int site = 0;
};

struct JumpTrajectory {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  double t_max = 0.0;
  std::vector<JumpEvent> events;
  std::vector<double> sample_times;
  std::vector<std::vector<double>> occupations;  ///< <n_i> at each sample time
};

struct JumpOptions {
  double micro_dt = 0.005;
  double sample_interval = 0.1;
  double time_tolerance = 1e-8;
};

/// Quantum-jump unravelling with waiting-time thresholds. Jump times are
/// located by bisection to options.time_tolerance.
JumpTrajectory quantum_jump_trajectory(const LindbladModel& model, const Vector& psi0, double t_max,
                                       std::uint64_t seed, const JumpOptions& options = {},
                                       std::uint64_t stream = 0);

/// rho(t) = exp(L t) rho0 via the dense generator; L <= 3.
Matrix lindblad_evolve_dense(const LindbladModel& model, const Matrix& rho0, double t);

enum class ScgfMethod {
  Auto,               ///< Dense for L <= 3, TranslationSector under pbc, else Propagator
  Dense,              ///< full 4^L x 4^L eigendecomposition
  TranslationSector,  ///< dense spectrum restricted to translation- and reflection-invariant operators
  Propagator,         ///< matrix-free dominant eigenvector of exp(L_s tau)
};

struct ScgfOptions {
  ScgfMethod method = ScgfMethod::Auto;
  double tau = 0.0;  ///< propagator step; 0 selects 0.1/gamma
  EigenSolveOptions eigen{};
};

struct ScgfResult {
  double s = 0.0;
  double theta = 0.0;
  double activity = 0.0;  ///< -theta'(s) from the eigenvectors (total, not per site)
  ScgfMethod method = ScgfMethod::Auto;
  bool converged = true;
};

ScgfResult tilted_lindblad_scgf(const LindbladModel& model, double s, const ScgfOptions& options = {});

/// -theta'(s) by central difference with step h.
double scgf_derivative_fd(const LindbladModel& model, double s, double h, const ScgfOptions& options = {});

}  // namespace rydcoll
