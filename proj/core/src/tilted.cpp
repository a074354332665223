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

#include "rydcoll/tilted.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include "rydcoll/error.hpp"
#include "rydcoll/linalg.hpp"
#include "rydcoll/parallel.hpp"

namespace rydcoll {

namespace {

constexpr double kNegativeTolerance = 1e-10;
constexpr double kCompletenessTarget = 1e-12;
constexpr int kMaxRefinements = 3;

void check_s(double s) {
  if (!std::isfinite(s)) throw InvalidArgument("counting field s must be finite");
}

}  // namespace

std::vector<double> tilt_weights(int sites, double s) {
  check_s(s);
  std::vector<double> w(hilbert_dim(sites));
  for (BasisIndex k = 0; k < w.size(); ++k) w[k] = std::exp(-s * popcount(k));
  return w;
}

Matrix apply_tilted(const KrausFamily& kf, double s, const Matrix& rho) {
  const auto w = tilt_weights(kf.sites(), s);
  return kraus_sum(kf.ops, rho, w);
}

Matrix apply_tilted_dual(const KrausFamily& kf, double s, const Matrix& x) {
  const auto w = tilt_weights(kf.sites(), s);
  Matrix out = kraus_dual_sum(kf.ops, x, w);
  make_hermitian(out);
  return out;
}

DominantEigenpair dominant_eigenpair(const KrausFamily& kf, double s, const EigenSolveOptions& options,
                                     const Matrix* warm_start) {
  const auto w = tilt_weights(kf.sites(), s);
  const auto n = static_cast<Eigen::Index>(kf.dim());
  OperatorMap map = [&](const Matrix& x) {
    Matrix out = kraus_dual_sum(kf.ops, x, w);
    make_hermitian(out);
    return out;
  };
  Matrix start = warm_start ? *warm_start : Matrix::Identity(n, n);
  EigenSolveOptions opts = options;
  opts.target = SpectralTarget::LargestMagnitude;
  auto result = dominant_eigen(map, std::move(start), opts);
  if (!result.converged) {
    throw ConvergenceError("dominant eigenpair of the tilted map did not converge", result.applications,
                           result.residual);
  }
  if (std::abs(result.value.imag()) > 1e-8 * std::abs(result.value) || !(result.value.real() > 0.0)) {
    throw NumericalError("dominant eigenvalue of the tilted map is not real positive");
  }
  DominantEigenpair out;
  out.lambda = result.value.real();
  out.left = std::move(result.vector);
  make_hermitian(out.left);
  out.left *= static_cast<double>(n) / out.left.trace().real();
  out.iterations = result.applications;
  out.residual = max_abs(map(out.left) - out.lambda * out.left) / (out.lambda * max_abs(out.left));
  return out;
}

double dominant_eigenvalue_dense(const KrausFamily& kf, double s) {
  require_sites_within(kf.sites(), 3, "dense tilted superoperator");
  const auto w = tilt_weights(kf.sites(), s);
  const auto n = static_cast<Eigen::Index>(kf.dim());
  Matrix super = Matrix::Zero(n * n, n * n);
  for (std::size_t k = 0; k < kf.outcomes(); ++k) {
    super += w[k] * Eigen::kroneckerProduct(kf.ops[k].conjugate(), kf.ops[k]).eval();
  }
  Eigen::ComplexEigenSolver<Matrix> eig(super, false);
  const auto& values = eig.eigenvalues();
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < values.size(); ++i) {
    if (std::abs(values(i)) > std::abs(values(best))) best = i;
  }
  return values(best).real();
}

BiasedKraus build_biased_kraus(const KrausFamily& kf, double s, const DominantEigenpair& eig, double eigen_floor) {
  if (!(eig.lambda > 0.0)) throw NumericalError("tilted eigenvalue must be positive");
  const auto root = hermitian_power(eig.left, 0.5, eigen_floor);
  if (root.min_eigenvalue < -kNegativeTolerance * root.max_eigenvalue || !(root.max_eigenvalue > 0.0)) {
    throw NumericalError("left eigen-operator is not positive definite (min eigenvalue " +
                         std::to_string(root.min_eigenvalue) + ")");
  }
  const auto inverse_root = hermitian_power(eig.left, -0.5, eigen_floor);
  const auto w = tilt_weights(kf.sites(), s);
  BiasedKraus out;
  out.ill_conditioned = root.floored;
  out.lambda = eig.lambda;
  out.left = eig.left;
  out.family.params = kf.params;
  out.family.construction = KrausConstruction::Biased;
  out.family.ops.reserve(kf.outcomes());
  const double scale = 1.0 / std::sqrt(eig.lambda);
  for (std::size_t k = 0; k < kf.outcomes(); ++k) {
    out.family.ops.push_back(std::sqrt(w[k]) * scale * (root.value * kf.ops[k] * inverse_root.value));
  }
  if (out.ill_conditioned) return out;

  auto& ops = out.family.ops;
  Matrix frame = root.value;
  const auto n = static_cast<Eigen::Index>(kf.dim());
  for (int round = 0; round < kMaxRefinements && completeness_residual(ops) > kCompletenessTarget; ++round) {
    EigenSolveOptions o;
    o.tol = 1e-14;
    const auto fixed = dominant_eigen([&](const Matrix& x) { return kraus_dual_sum(ops, x); },
                                      Matrix::Identity(n, n), o);
    if (!fixed.converged) break;
    Matrix x = fixed.vector * (static_cast<double>(n) / fixed.vector.trace().real());
    make_hermitian(x);
    const auto xr = hermitian_power(x, 0.5, eigen_floor);
    const auto xi = hermitian_power(x, -0.5, eigen_floor);
    if (xr.floored || xr.min_eigenvalue <= 0.0) break;
    const double mu = fixed.value.real();
    for (auto& op : ops) op = (xr.value * op * xi.value / std::sqrt(mu)).eval();
    Matrix left = frame * x * frame.adjoint();
    make_hermitian(left);
    frame = (frame * xr.value).eval();
    out.left = left * (static_cast<double>(n) / left.trace().real());
    out.lambda *= mu;
  }
  return out;
}

TiltedSolution solve_tilted(const KrausFamily& kf, double s, const TiltOptions& options,
                            const TiltedSolution* warm_start) {
  check_s(s);
  const auto eig = dominant_eigenpair(kf, s, options.eigen, warm_start ? &warm_start->left : nullptr);
  auto biased = build_biased_kraus(kf, s, eig, options.eigen_floor);

  StationaryOptions so;
  so.tol = options.stationary_tol;
  so.method = options.stationary_method;
  so.unital_shortcut = false;
  so.max_iterations = options.eigen.max_applications;
  const auto stationary =
      stationary_state(biased.family, so, warm_start ? &warm_start->biased_stationary.data : nullptr);

  TiltedSolution sol;
  sol.s = s;
  sol.lambda = biased.lambda;
  sol.left = biased.left;
  sol.biased = std::move(biased.family);
  sol.biased_stationary = stationary.state;
  sol.iterations = eig.iterations + stationary.iterations;
  sol.residual = eig.residual;
  sol.ill_conditioned = biased.ill_conditioned;
  return sol;
}

SEnsembleValues s_ensemble_order_parameters(const KrausFamily& kf, double s, std::span<const SpaceTimeOffset> offsets,
                                            const TiltOptions& options, TiltedSolution* solution_out,
                                            const TiltedSolution* warm_start) {
  auto sol = solve_tilted(kf, s, options, warm_start);
  const OrderParameterEvaluator eval(sol.biased, offsets);
  const auto r = eval.evaluate(sol.biased_stationary);
  SEnsembleValues out;
  out.s = s;
  out.activity = r.activity;
  out.correlations = r.correlations;
  out.lambda = sol.lambda;
  out.iterations = sol.iterations;
  out.converged = sol.converged;
  out.ill_conditioned = sol.ill_conditioned;
  if (solution_out) *solution_out = std::move(sol);
  return out;
}

std::vector<PhaseDiagramRow> phase_diagram_sweep(const ModelParams& base, const PhaseDiagramGrid& grid,
                                                 const TiltOptions& options, int workers) {
  const std::size_t ns = grid.s_values.size();
  std::vector<PhaseDiagramRow> rows(grid.v_values.size() * ns);
  const SpaceTimeOffset offsets[] = {{0, 1}};
  parallel_for(grid.v_values.size(), workers, [&](std::size_t iv) {
    ModelParams params = base;
    params.v = grid.v_values[iv];
    const auto kf = build_kraus_fast(params);
    TiltedSolution previous;
    bool have_previous = false;
    for (std::size_t is = 0; is < ns; ++is) {
      PhaseDiagramRow& row = rows[iv * ns + is];
      row.v = params.v;
      row.s = grid.s_values[is];
      try {
        TiltedSolution sol;
        const auto values =
            s_ensemble_order_parameters(kf, row.s, offsets, options, &sol, have_previous ? &previous : nullptr);
        row.activity = values.activity;
        row.c_0_1 = values.correlations[0];
        row.lambda = values.lambda;
        row.iterations = values.iterations;
        row.ill_conditioned = values.ill_conditioned;
        previous = std::move(sol);
        have_previous = true;
      } catch (const ConvergenceError& e) {
        row.activity = row.c_0_1 = row.lambda = std::numeric_limits<double>::quiet_NaN();
        row.iterations = e.iterations();
        row.converged = false;
      } catch (const NumericalError&) {
        row.activity = row.c_0_1 = row.lambda = std::numeric_limits<double>::quiet_NaN();
        row.converged = false;
        row.ill_conditioned = true;
      }
    }
  });
  return rows;
}

double PartitionFunction::z() const { return std::exp(log_z); }

PartitionFunction partition_function(const KrausFamily& kf, double s, const DensityMatrix& rho0, int steps) {
  if (steps < 0) throw InvalidArgument("partition_function: steps must be >= 0");
  const auto w = tilt_weights(kf.sites(), s);
  PartitionFunction out;
  Matrix rho = rho0.data;
  for (int t = 0; t < steps; ++t) {
    rho = kraus_sum(kf.ops, rho, w);
    const double tr = rho.trace().real();
    if (!(tr > 0.0)) throw NumericalError("tilted map produced a non-positive trace");
    out.log_z += std::log(tr);
    rho /= tr;
  }
  out.log_z += std::log(rho.trace().real());
  return out;
}

double partition_function_enumerated(const KrausFamily& kf, double s, const DensityMatrix& rho0, int steps) {
  const auto paths = exact_path_distribution(kf, rho0, steps);
  const std::size_t M = kf.outcomes();
  double z = 0.0;
  for (std::size_t index = 0; index < paths.size(); ++index) {
    int count = 0;
    for (std::size_t rest = index; rest > 0; rest /= M) count += popcount(static_cast<BasisIndex>(rest % M));
    z += std::exp(-s * count) * paths[index];
  }
  return z;
}

}  // namespace rydcoll
