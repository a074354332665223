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

#include "rydcoll/channel.hpp"
#include "rydcoll/eigensolver.hpp"
#include "rydcoll/observables.hpp"
#include "rydcoll/types.hpp"

namespace rydcoll {

/// Weights e^{-s popcount(k)} of the activity-tilted map.
std::vector<double> tilt_weights(int sites, double s);

/// E_s[rho] = sum_k e^{-s O_0(k)} K_k rho K_k^dagger (not trace preserving).
Matrix apply_tilted(const KrausFamily& kf, double s, const Matrix& rho);
/// E_s^*[X] = sum_k e^{-s O_0(k)} K_k^dagger X K_k, symmetrised.
Matrix apply_tilted_dual(const KrausFamily& kf, double s, const Matrix& x);

struct TiltOptions {
  EigenSolveOptions eigen{};
  /// Eigenvalues of l_s below this fraction of the largest are floored.
  double eigen_floor = 1e-14;
  /// Tolerance on the trace-norm increment of the biased stationary state.
  double stationary_tol = 1e-10;
  StationaryMethod stationary_method = StationaryMethod::Krylov;
};

struct DominantEigenpair {
  double lambda = 1.0;
  Matrix left;  ///< Hermitian, Tr = 2^L
  long iterations = 0;
  double residual = 0.0;  ///< max|E_s^*[l] - lambda l| / (lambda max|l|)
};

/// Dominant eigenpair of E_s^* starting from the identity (or warm_start).
/// Throws ConvergenceError when the solver exhausts its budget.
DominantEigenpair dominant_eigenpair(const KrausFamily& kf, double s, const EigenSolveOptions& options = {},
                                     const Matrix* warm_start = nullptr);

/// Same eigenvalue from the dense 4^L x 4^L superoperator; L <= 3.
double dominant_eigenvalue_dense(const KrausFamily& kf, double s);

struct BiasedKraus {
  KrausFamily family;
  double lambda = 1.0;  ///< eigenvalue after refinement
  Matrix left;          ///< l_s after refinement, Tr = 2^L
  bool ill_conditioned = false;  ///< eigenvalue floor of l_s was hit
};

/// K~_k = e^{-s O_0(k)/2} lambda^{-1/2} l^{1/2} K_k l^{-1/2}. Eigenvalues of
/// l_s below eigen_floor * max are raised to that floor and the result is
/// flagged; an eigenvalue below -1e-10 * max throws NumericalError.
/// When l_s is badly conditioned the completeness defect of this product is
/// the eigen-residual times cond(l_s), so the pair is refined: the fixed
/// point X of sum_k K~_k^dag X K~_k (X ~ 1) is solved and l_s is replaced by
/// l^{1/2} X l^{1/2}.
BiasedKraus build_biased_kraus(const KrausFamily& kf, double s, const DominantEigenpair& eig,
                               double eigen_floor = 1e-14);

struct TiltedSolution {
  double s = 0.0;
  double lambda = 1.0;
  Matrix left;
  KrausFamily biased;
  DensityMatrix biased_stationary;
  long iterations = 0;
  double residual = 0.0;
  bool converged = true;
  bool ill_conditioned = false;
};

TiltedSolution solve_tilted(const KrausFamily& kf, double s, const TiltOptions& options = {},
                            const TiltedSolution* warm_start = nullptr);

struct SEnsembleValues {
  double s = 0.0;
  double activity = 0.0;
  std::vector<double> correlations;
  double lambda = 1.0;
  long iterations = 0;
  bool converged = true;
  bool ill_conditioned = false;
};

/// Stationary activity and correlations of the biased (Doob) dynamics.
SEnsembleValues s_ensemble_order_parameters(const KrausFamily& kf, double s,
                                            std::span<const SpaceTimeOffset> offsets,
                                            const TiltOptions& options = {},
                                            TiltedSolution* solution_out = nullptr,
                                            const TiltedSolution* warm_start = nullptr);

struct PhaseDiagramRow {
  double v = 0.0;
  double s = 0.0;
  double activity = 0.0;
  double c_0_1 = 0.0;
  double lambda = 1.0;
  long iterations = 0;
  bool converged = true;
  bool ill_conditioned = false;
};

struct PhaseDiagramGrid {
  std::vector<double> v_values;
  std::vector<double> s_values;
};

/// Rows ordered by (V, s) as given in the grid. One task per V value (one
/// Kraus family shared across that row, warm-started along s), so the output
/// does not depend on the worker count. Convergence failures are recorded in
/// the row.
std::vector<PhaseDiagramRow> phase_diagram_sweep(const ModelParams& base, const PhaseDiagramGrid& grid,
                                                 const TiltOptions& options = {}, int workers = 1);

struct PartitionFunction {
  double log_z = 0.0;
  double z() const;
};

/// Z_T(s) = Tr E_s^T[rho0], accumulated in log form.
PartitionFunction partition_function(const KrausFamily& kf, double s, const DensityMatrix& rho0, int steps);

/// Brute force over all outcome paths: sum_eta e^{-s O_0(eta)} pi(eta).
double partition_function_enumerated(const KrausFamily& kf, double s, const DensityMatrix& rho0, int steps);

}  // namespace rydcoll
