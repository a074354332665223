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
#include <iosfwd>
#include <vector>

#include "rydcoll/channel.hpp"
#include "rydcoll/params.hpp"
#include "rydcoll/rng.hpp"
#include "rydcoll/types.hpp"

namespace rydcoll {

struct PureState {
  Vector amplitudes;

  std::size_t dim() const { return static_cast<std::size_t>(amplitudes.size()); }

  static PureState basis_state(int sites, BasisIndex index);
};

enum class RecordMode : std::uint8_t { Reset = 0, ResetFree = 1, ResetFreePostprocessed = 2 };

const char* to_string(RecordMode mode);
RecordMode record_mode_from_string(const std::string& name);

/// One stochastic realisation. Steps are numbered t = 1..steps.
struct TrajectoryRecord {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  ModelParams params;
  int steps = 0;
  RecordMode mode = RecordMode::Reset;
  std::vector<std::uint8_t> outcomes;  ///< steps x sites, row t-1
  std::vector<double> occupations;     ///< empty, or steps x sites like outcomes

  int sites() const { return params.sites; }
  bool has_occupations() const { return !occupations.empty(); }

  int outcome(int t, int site) const {
    return outcomes[static_cast<std::size_t>(t - 1) * sites() + site];
  }
  double occupation(int t, int site) const {
    return occupations[static_cast<std::size_t>(t - 1) * sites() + site];
  }
  BasisIndex outcome_string(int t) const;

  bool operator==(const TrajectoryRecord&) const = default;
};

/// <n_i> for every site of a normalised state.
std::vector<double> site_occupations(const Vector& psi, int sites);

/// Post-collision joint amplitudes. Column k holds <k_A| U |psi, a_A>, where
/// a is the ancilla input string. Built from the collision blocks (forward
/// transform of |a_A> into the tau^x basis, one block matvec per sign string,
/// inverse transform back). Without blocks only a = 0 is supported and the
/// columns are K_k psi.
Matrix post_collision_state(const KrausFamily& kf, const Vector& psi, BasisIndex ancilla_in = 0);
Matrix post_collision_state(const CollisionBlocks& blocks, const Vector& psi, BasisIndex ancilla_in);

/// Measures ancilla bits in site order 0..L-1 using one uniform per bit.
/// `weights` holds the squared column norms of the joint state.
BasisIndex measure_sequential(const RealVector& weights, int sites, RandomStream& rng);

/// Outcome distribution induced by sequential measurement (chain rule over
/// the ancilla bits) for one step from psi.
std::vector<double> sequential_outcome_distribution(const KrausFamily& kf, const PureState& psi);
/// p(k) = ||K_k psi||^2
std::vector<double> enumerated_outcome_distribution(const KrausFamily& kf, const PureState& psi);

/// Reset protocol via the joint-state sequential measurement sampler.
TrajectoryRecord sample_trajectory(const KrausFamily& kf, const PureState& psi0, int steps,
                                   std::uint64_t seed, bool record_occupations = false,
                                   std::uint64_t stream = 0);

/// Reset protocol, sampling k by inverse CDF over all 2^L probabilities
/// (one uniform per step). Validation path; L <= 4.
TrajectoryRecord sample_trajectory_enumerated(const KrausFamily& kf, const PureState& psi0, int steps,
                                              std::uint64_t seed, bool record_occupations = false,
                                              std::uint64_t stream = 0);

/// Ancillas are not reset: each collision starts from the previously observed
/// ancilla string.
TrajectoryRecord sample_trajectory_reset_free(const CollisionBlocks& blocks, const PureState& psi0,
                                              int steps, std::uint64_t seed,
                                              bool record_occupations = false, std::uint64_t stream = 0);

/// k~_i(t) = |k_i(t) - k_i(t-1)| with k_i(0) = 0.
TrajectoryRecord postprocess_reset_free(const TrajectoryRecord& record);

/// Conditional operators K_{k|k'} = <k_A| U |k'_A>, stored at k * 2^L + k'.
struct ConditionalKraus {
  ModelParams params;
  std::vector<Matrix> ops;

  const Matrix& op(BasisIndex k, BasisIndex previous) const {
    return ops[static_cast<std::size_t>(k) * params.outcomes() + previous];
  }
};

/// From the dense 4^L unitary; L <= 4.
ConditionalKraus build_conditional_kraus_dense(const ModelParams& params, int max_sites = 4);

/// Exact probabilities of all outcome paths [k(1), ..., k(steps)] of the
/// reset protocol. Path index = k(1) * M^{steps-1} + ... + k(steps), M = 2^L.
std::vector<double> exact_path_distribution(const KrausFamily& kf, const DensityMatrix& rho0, int steps);

/// Same for the reset-free protocol, optionally re-indexed by the
/// post-processed record.
std::vector<double> exact_reset_free_path_distribution(const ConditionalKraus& ck, const DensityMatrix& rho0,
                                                       int steps, bool postprocessed);

double total_variation(const std::vector<double>& p, const std::vector<double>& q);

/// Trajectory files. CSV is `t,site,outcome[,occupation]` preceded by one
/// `# schema:` comment line carrying the metadata; see README for the binary
/// layout.
void write_trajectory_csv(const TrajectoryRecord& record, std::ostream& out);
TrajectoryRecord read_trajectory_csv(std::istream& in);
void write_trajectory_binary(const TrajectoryRecord& record, std::ostream& out);
TrajectoryRecord read_trajectory_binary(std::istream& in);

}  // namespace rydcoll
