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

#include "rydcoll/channel.hpp"

#include <cmath>

#include "rydcoll/eigensolver.hpp"
#include "rydcoll/error.hpp"
#include "rydcoll/linalg.hpp"
#include "rydcoll/model.hpp"
#include "rydcoll/parallel.hpp"

namespace rydcoll {

namespace {

void require_square(const Matrix& a, std::size_t dim, const char* what) {
  if (static_cast<std::size_t>(a.rows()) != dim || a.rows() != a.cols()) {
    throw InvalidArgument(std::string(what) + ": dimension mismatch, expected " + std::to_string(dim) + "x" +
                          std::to_string(dim) + ", got " + std::to_string(a.rows()) + "x" +
                          std::to_string(a.cols()));
  }
}

double weight_at(std::span<const double> weights, std::size_t k) { return weights.empty() ? 1.0 : weights[k]; }

}  // namespace

DensityMatrix DensityMatrix::maximally_mixed(int sites) {
  const auto n = static_cast<Eigen::Index>(hilbert_dim(sites));
  return {Matrix::Identity(n, n) / static_cast<double>(n)};
}

DensityMatrix DensityMatrix::from_pure(const Vector& psi) { return {psi * psi.adjoint()}; }

DensityMatrix DensityMatrix::basis_state(int sites, BasisIndex index) {
  const auto n = static_cast<Eigen::Index>(hilbert_dim(sites));
  if (index >= static_cast<BasisIndex>(n)) throw InvalidArgument("basis index out of range");
  Matrix m = Matrix::Zero(n, n);
  m(index, index) = 1.0;
  return {std::move(m)};
}

void check_density_matrix(const DensityMatrix& rho, double tol, double eig_tol) {
  if (rho.data.rows() != rho.data.cols()) throw NumericalError("density matrix is not square");
  const double herm = max_abs(rho.data - rho.data.adjoint());
  if (herm > tol) throw NumericalError("density matrix not Hermitian: residual " + std::to_string(herm));
  const double trace_err = std::abs(rho.data.trace() - 1.0);
  if (trace_err > tol) throw NumericalError("density matrix trace deviates from 1 by " + std::to_string(trace_err));
  Matrix h = rho.data;
  make_hermitian(h);
  const double lo = min_eigenvalue(h);
  if (lo < -eig_tol) throw NumericalError("density matrix has negative eigenvalue " + std::to_string(lo));
}

Matrix build_joint_unitary(const ModelParams& params, int max_sites) {
  params.validate();
  require_sites_within(params.sites, max_sites, "joint unitary");
  const int L = params.sites;
  const auto M = static_cast<Eigen::Index>(params.outcomes());
  const Matrix hs = build_system_hamiltonian(params).data;
  const double g = params.coupling();

  const Eigen::Index joint = M * M;
  Matrix h = Matrix::Zero(joint, joint);
  for (Eigen::Index s = 0; s < M; ++s) {
    for (Eigen::Index s2 = 0; s2 < M; ++s2) {
      if (hs(s, s2) == Complex{}) continue;
      for (Eigen::Index a = 0; a < M; ++a) h(s * M + a, s2 * M + a) += hs(s, s2);
    }
    for (int i = 0; i < L; ++i) {
      if (site_bit(static_cast<BasisIndex>(s), i, L)) continue;
      for (Eigen::Index a = 0; a < M; ++a) {
        const auto flipped = static_cast<Eigen::Index>(static_cast<BasisIndex>(a) ^ site_mask(i, L));
        h(s * M + flipped, s * M + a) += g;
      }
    }
  }
  return hermitian_propagator(h, params.dt);
}

KrausFamily build_kraus_dense(const ModelParams& params, int max_sites) {
  const Matrix u = build_joint_unitary(params, max_sites);
  const auto M = static_cast<Eigen::Index>(params.outcomes());
  KrausFamily kf;
  kf.params = params;
  kf.construction = KrausConstruction::Dense4L;
  kf.ops.assign(M, Matrix::Zero(M, M));
  for (Eigen::Index k = 0; k < M; ++k) {
    for (Eigen::Index r = 0; r < M; ++r) {
      for (Eigen::Index c = 0; c < M; ++c) kf.ops[k](r, c) = u(r * M + k, c * M);
    }
  }
  return kf;
}

CollisionBlocks build_collision_blocks(const ModelParams& params, int workers, int max_sites) {
  params.validate();
  require_sites_within(params.sites, max_sites, "collision blocks");
  const Matrix hs = build_system_hamiltonian(params, max_sites).data;
  CollisionBlocks blocks;
  blocks.params = params;
  blocks.propagators.resize(params.outcomes());
  parallel_for(params.outcomes(), workers, [&](std::size_t m) {
    const Matrix hm = collision_block_from(hs, params, SignString{static_cast<BasisIndex>(m)});
    blocks.propagators[m] = hermitian_propagator(hm, params.dt);
  });
  return blocks;
}

KrausFamily kraus_from_blocks(std::shared_ptr<const CollisionBlocks> blocks) {
  if (!blocks) throw InvalidArgument("kraus_from_blocks: null blocks");
  KrausFamily kf;
  kf.params = blocks->params;
  kf.construction = KrausConstruction::BlockWHT;
  kf.ops = blocks->propagators;
  walsh_hadamard_inplace(kf.ops);
  const double scale = 1.0 / static_cast<double>(kf.ops.size());
  for (auto& k : kf.ops) k *= scale;
  kf.blocks = std::move(blocks);
  return kf;
}

KrausFamily build_kraus_fast(const ModelParams& params, int workers, int max_sites) {
  return kraus_from_blocks(std::make_shared<const CollisionBlocks>(build_collision_blocks(params, workers, max_sites)));
}

double completeness_residual(std::span<const Matrix> ops) {
  if (ops.empty()) throw InvalidArgument("empty Kraus family");
  Matrix sum = Matrix::Zero(ops[0].rows(), ops[0].cols());
  for (const auto& k : ops) sum.noalias() += k.adjoint() * k;
  return max_abs(sum - Matrix::Identity(sum.rows(), sum.cols()));
}

double unitality_residual(std::span<const Matrix> ops) {
  if (ops.empty()) throw InvalidArgument("empty Kraus family");
  Matrix sum = Matrix::Zero(ops[0].rows(), ops[0].cols());
  for (const auto& k : ops) sum.noalias() += k * k.adjoint();
  return max_abs(sum - Matrix::Identity(sum.rows(), sum.cols()));
}

Matrix kraus_sum(std::span<const Matrix> ops, const Matrix& x, std::span<const double> weights) {
  if (ops.empty()) throw InvalidArgument("empty Kraus family");
  require_square(x, static_cast<std::size_t>(ops[0].rows()), "kraus_sum");
  Matrix out = Matrix::Zero(x.rows(), x.cols());
  Matrix tmp(x.rows(), x.cols());
  for (std::size_t k = 0; k < ops.size(); ++k) {
    const double w = weight_at(weights, k);
    if (w == 0.0) continue;
    tmp.noalias() = ops[k] * x;
    if (w == 1.0) {
      out.noalias() += tmp * ops[k].adjoint();
    } else {
      out.noalias() += w * (tmp * ops[k].adjoint());
    }
  }
  return out;
}

Matrix kraus_dual_sum(std::span<const Matrix> ops, const Matrix& x, std::span<const double> weights) {
  if (ops.empty()) throw InvalidArgument("empty Kraus family");
  require_square(x, static_cast<std::size_t>(ops[0].rows()), "kraus_dual_sum");
  Matrix out = Matrix::Zero(x.rows(), x.cols());
  Matrix tmp(x.rows(), x.cols());
  for (std::size_t k = 0; k < ops.size(); ++k) {
    const double w = weight_at(weights, k);
    if (w == 0.0) continue;
    tmp.noalias() = ops[k].adjoint() * x;
    if (w == 1.0) {
      out.noalias() += tmp * ops[k];
    } else {
      out.noalias() += w * (tmp * ops[k]);
    }
  }
  return out;
}

DensityMatrix apply_channel(const KrausFamily& kf, const DensityMatrix& rho) {
  DensityMatrix out{kraus_sum(kf.ops, rho.data)};
  make_hermitian(out.data);
  return out;
}

Matrix apply_channel_dual(const KrausFamily& kf, const Matrix& x) {
  Matrix out = kraus_dual_sum(kf.ops, x);
  make_hermitian(out);
  return out;
}

StationaryResult stationary_state(const KrausFamily& kf, const StationaryOptions& options, const Matrix* warm_start) {
  if (!(options.tol > 0.0)) throw InvalidArgument("stationary_state: tol must be > 0");
  const int L = kf.sites();
  StationaryResult result;

  auto step = [&](const Matrix& rho) {
    Matrix next = kraus_sum(kf.ops, rho);
    make_hermitian(next);
    return next;
  };
  auto normalise = [](Matrix& rho) {
    make_hermitian(rho);
    rho /= rho.trace().real();
  };

  if (kf.is_unbiased() && options.unital_shortcut) {
    result.state = DensityMatrix::maximally_mixed(L);
    result.increment = trace_norm(step(result.state.data) - result.state.data);
    return result;
  }

  Matrix rho = warm_start ? *warm_start : DensityMatrix::maximally_mixed(L).data;
  require_square(rho, kf.dim(), "stationary_state warm start");
  normalise(rho);

  if (options.method == StationaryMethod::Krylov) {
    EigenSolveOptions eo;
    eo.method = EigenMethod::Krylov;
    eo.tol = std::min(options.tol * 1e-2, 1e-12);
    eo.max_applications = options.max_iterations;
    const auto eig = krylov_dominant(step, rho, eo);
    result.iterations = eig.applications;
    if (std::abs(eig.vector.trace()) > 0.0) {
      Matrix candidate = eig.vector;
      normalise(candidate);
      if (min_eigenvalue(candidate) > -1e-8) rho = std::move(candidate);
    }
  }

  double increment = 0.0;
  while (result.iterations < options.max_iterations) {
    Matrix next = step(rho);
    ++result.iterations;
    normalise(next);
    increment = trace_norm(next - rho);
    rho = std::move(next);
    if (increment < options.tol) {
      result.state.data = std::move(rho);
      result.increment = increment;
      return result;
    }
  }
  throw ConvergenceError("stationary_state did not converge", result.iterations, increment);
}

}  // namespace rydcoll
