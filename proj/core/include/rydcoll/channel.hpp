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
#include <filesystem>
#include <memory>
#include <span>
#include <vector>

#include "rydcoll/params.hpp"
#include "rydcoll/types.hpp"

namespace rydcoll {

enum class KrausConstruction : std::uint8_t {
  Dense4L = 0,   ///< partial matrix elements of the full 4^L-dimensional unitary
  BlockWHT = 1,  ///< per-block propagators combined by a Walsh-Hadamard transform
  Biased = 2,    ///< Doob-transformed family of a tilted map (not from a unitary)
};

/// Propagators E_m = exp(-i H_m dt) for every ancilla sign string m. Index m
/// uses the BasisIndex bit layout with a set bit meaning m_i = -1.
struct CollisionBlocks {
  ModelParams params;
  std::vector<Matrix> propagators;
};

/// Kraus operators K_k indexed by packed outcome string k.
struct KrausFamily {
  ModelParams params;
  KrausConstruction construction = KrausConstruction::BlockWHT;
  std::vector<Matrix> ops;
  /// Present for BlockWHT families; the trajectory sampler uses it.
  std::shared_ptr<const CollisionBlocks> blocks;

  int sites() const { return params.sites; }
  std::size_t dim() const { return params.dim(); }
  std::size_t outcomes() const { return ops.size(); }
  bool is_unbiased() const { return construction != KrausConstruction::Biased; }
};

struct DensityMatrix {
  Matrix data;

  std::size_t dim() const { return static_cast<std::size_t>(data.rows()); }

  static DensityMatrix maximally_mixed(int sites);
  static DensityMatrix from_pure(const Vector& psi);
  static DensityMatrix basis_state(int sites, BasisIndex index);
};

/// Throws NumericalError unless rho is Hermitian and unit-trace to `tol`
/// and its smallest eigenvalue is >= -eig_tol.
void check_density_matrix(const DensityMatrix& rho, double tol = 1e-12, double eig_tol = 1e-10);

/// exp(-i H_CM dt) on the joint system-ancilla space, index sys * 2^L + anc.
/// L <= max_sites.
Matrix build_joint_unitary(const ModelParams& params, int max_sites = 4);

/// Dense 4^L construction, K_k = <k_A| exp(-i H_CM dt) |0_A>. L <= 4.
KrausFamily build_kraus_dense(const ModelParams& params, int max_sites = 4);

CollisionBlocks build_collision_blocks(const ModelParams& params, int workers = 1,
                                       int max_sites = kMaxSites);

/// K_k = 2^{-L} sum_m (prod_i m_i^{k_i}) E_m. L <= max_sites.
KrausFamily build_kraus_fast(const ModelParams& params, int workers = 1, int max_sites = kMaxSites);

KrausFamily kraus_from_blocks(std::shared_ptr<const CollisionBlocks> blocks);

/// max |sum_k K_k^dagger K_k - 1|
double completeness_residual(std::span<const Matrix> ops);
/// max |sum_k K_k K_k^dagger - 1|
double unitality_residual(std::span<const Matrix> ops);

/// sum_k w_k K_k X K_k^dagger (w = 1 when weights is empty).
Matrix kraus_sum(std::span<const Matrix> ops, const Matrix& x, std::span<const double> weights = {});
/// sum_k w_k K_k^dagger X K_k
Matrix kraus_dual_sum(std::span<const Matrix> ops, const Matrix& x, std::span<const double> weights = {});

/// E[rho], symmetrised to remove roundoff anti-Hermitian parts.
DensityMatrix apply_channel(const KrausFamily& kf, const DensityMatrix& rho);
Matrix apply_channel_dual(const KrausFamily& kf, const Matrix& x);

enum class StationaryMethod { FixedPoint, Krylov };

struct StationaryOptions {
  double tol = 1e-10;
  long max_iterations = 1000000;
  StationaryMethod method = StationaryMethod::FixedPoint;
  /// Skip the iteration for unbiased families, whose channel is unital.
  bool unital_shortcut = true;
};

struct StationaryResult {
  DensityMatrix state;
  long iterations = 0;
  double increment = 0.0;  ///< trace norm of E[rho] - rho at exit
};

/// Fixed point of the channel. Throws ConvergenceError on failure.
StationaryResult stationary_state(const KrausFamily& kf, const StationaryOptions& options = {},
                                  const Matrix* warm_start = nullptr);

/// Binary cache of a Kraus family keyed by a hash of its parameters.
std::uint64_t params_hash(const ModelParams& params, KrausConstruction construction);
std::filesystem::path kraus_cache_path(const std::filesystem::path& dir, const ModelParams& params,
                                       KrausConstruction construction);
void save_kraus_family(const KrausFamily& kf, const std::filesystem::path& path);
KrausFamily load_kraus_family(const std::filesystem::path& path);
/// Loads from `dir` when present, otherwise builds with build_kraus_fast and stores it.
KrausFamily load_or_build_kraus(const std::filesystem::path& dir, const ModelParams& params, int workers = 1);

}  // namespace rydcoll
