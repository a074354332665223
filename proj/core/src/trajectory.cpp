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

#include "rydcoll/trajectory.hpp"

#include <cmath>
#include <functional>

#include "rydcoll/error.hpp"
#include "rydcoll/linalg.hpp"
#include "rydcoll/model.hpp"

namespace rydcoll {

namespace {

constexpr double kProbabilityTolerance = 1e-8;

void check_state(const KrausFamily& kf, const PureState& psi) {
  if (psi.dim() != kf.dim()) throw InvalidArgument("initial state dimension does not match the Kraus family");
  if (std::abs(psi.amplitudes.norm() - 1.0) > 1e-10) throw InvalidArgument("initial state is not normalised");
}

void check_steps(int steps) {
  if (steps < 1) throw InvalidArgument("trajectory length must be >= 1");
}

// Columnwise unnormalised Walsh-Hadamard transform.
void walsh_hadamard_columns(Matrix& a) {
  const Eigen::Index n = a.cols();
  for (Eigen::Index h = 1; h < n; h <<= 1) {
    for (Eigen::Index block = 0; block < n; block += 2 * h) {
      for (Eigen::Index j = block; j < block + h; ++j) {
        for (Eigen::Index r = 0; r < a.rows(); ++r) {
          const Complex x = a(r, j);
          const Complex y = a(r, j + h);
          a(r, j) = x + y;
          a(r, j + h) = x - y;
        }
      }
    }
  }
}

void check_total(double total) {
  if (std::abs(total - 1.0) > kProbabilityTolerance) {
    throw NumericalError("outcome probabilities sum to " + std::to_string(total));
  }
}

TrajectoryRecord make_record(const ModelParams& params, int steps, std::uint64_t seed, std::uint64_t stream,
                             RecordMode mode, bool record_occupations) {
  TrajectoryRecord rec;
  rec.seed = seed;
  rec.stream = stream;
  rec.params = params;
  rec.steps = steps;
  rec.mode = mode;
  rec.outcomes.assign(static_cast<std::size_t>(steps) * params.sites, 0);
  if (record_occupations) rec.occupations.assign(static_cast<std::size_t>(steps) * params.sites, 0.0);
  return rec;
}

void store_step(TrajectoryRecord& rec, int t, BasisIndex k, const Vector& psi) {
  const int L = rec.sites();
  const std::size_t row = static_cast<std::size_t>(t - 1) * L;
  for (int i = 0; i < L; ++i) rec.outcomes[row + i] = static_cast<std::uint8_t>(site_bit(k, i, L));
  if (rec.has_occupations()) {
    const auto occ = site_occupations(psi, L);
    std::copy(occ.begin(), occ.end(), rec.occupations.begin() + static_cast<std::ptrdiff_t>(row));
  }
}

// Samples one outcome from a joint state, collapses psi onto it.
BasisIndex measure_and_collapse(const Matrix& joint, int sites, RandomStream& rng, Vector& psi) {
  const RealVector weights = joint.colwise().squaredNorm().transpose();
  check_total(weights.sum());
  const BasisIndex k = measure_sequential(weights, sites, rng);
  psi = joint.col(k) / std::sqrt(weights(k));
  return k;
}

}  // namespace

PureState PureState::basis_state(int sites, BasisIndex index) {
  const auto n = static_cast<Eigen::Index>(hilbert_dim(sites));
  if (index >= static_cast<BasisIndex>(n)) throw InvalidArgument("basis index out of range");
  PureState s{Vector::Zero(n)};
  s.amplitudes(index) = 1.0;
  return s;
}

const char* to_string(RecordMode mode) {
  switch (mode) {
    case RecordMode::Reset:
      return "reset";
    case RecordMode::ResetFree:
      return "reset-free";
    case RecordMode::ResetFreePostprocessed:
      return "reset-free-postprocessed";
  }
  return "unknown";
}

RecordMode record_mode_from_string(const std::string& name) {
  for (auto mode : {RecordMode::Reset, RecordMode::ResetFree, RecordMode::ResetFreePostprocessed}) {
    if (name == to_string(mode)) return mode;
  }
  throw InvalidArgument("unknown record mode '" + name + "'");
}

BasisIndex TrajectoryRecord::outcome_string(int t) const {
  BasisIndex k = 0;
  for (int i = 0; i < sites(); ++i) k = (k << 1) | outcome(t, i);
  return k;
}

std::vector<double> site_occupations(const Vector& psi, int sites) {
  std::vector<double> occ(sites, 0.0);
  for (Eigen::Index x = 0; x < psi.size(); ++x) {
    const double p = std::norm(psi(x));
    for (int i = 0; i < sites; ++i) {
      if (site_bit(static_cast<BasisIndex>(x), i, sites)) occ[i] += p;
    }
  }
  return occ;
}

Matrix post_collision_state(const CollisionBlocks& blocks, const Vector& psi, BasisIndex ancilla_in) {
  const auto M = static_cast<Eigen::Index>(blocks.propagators.size());
  if (ancilla_in >= static_cast<BasisIndex>(M)) throw InvalidArgument("ancilla string out of range");
  Matrix joint(psi.size(), M);
  for (Eigen::Index m = 0; m < M; ++m) {
    joint.col(m).noalias() = blocks.propagators[m] * psi;
    if (popcount(static_cast<BasisIndex>(m) & ancilla_in) & 1) joint.col(m) *= -1.0;
  }
  walsh_hadamard_columns(joint);
  joint /= static_cast<double>(M);
  return joint;
}

Matrix post_collision_state(const KrausFamily& kf, const Vector& psi, BasisIndex ancilla_in) {
  if (kf.blocks) return post_collision_state(*kf.blocks, psi, ancilla_in);
  if (ancilla_in != 0) throw InvalidArgument("post_collision_state: nonzero ancilla input needs collision blocks");
  if (!kf.is_unbiased()) throw InvalidArgument("post_collision_state: biased families have no joint state");
  Matrix joint(psi.size(), static_cast<Eigen::Index>(kf.outcomes()));
  for (std::size_t k = 0; k < kf.outcomes(); ++k) joint.col(static_cast<Eigen::Index>(k)).noalias() = kf.ops[k] * psi;
  return joint;
}

BasisIndex measure_sequential(const RealVector& weights, int sites, RandomStream& rng) {
  if (weights.size() != static_cast<Eigen::Index>(hilbert_dim(sites))) {
    throw InvalidArgument("measure_sequential: weight table size mismatch");
  }
  BasisIndex prefix = 0;
  for (int i = 0; i < sites; ++i) {
    const int rest = sites - 1 - i;
    const Eigen::Index span = Eigen::Index{1} << rest;
    const Eigen::Index base0 = static_cast<Eigen::Index>(prefix << 1) << rest;
    const double p0 = weights.segment(base0, span).sum();
    const double p1 = weights.segment(base0 + span, span).sum();
    if (!(p0 + p1 > 0.0)) throw NumericalError("measure_sequential: zero conditional probability");
    const double u = rng.uniform();
    prefix = (prefix << 1) | (u * (p0 + p1) < p0 ? 0u : 1u);
  }
  return prefix;
}

std::vector<double> sequential_outcome_distribution(const KrausFamily& kf, const PureState& psi) {
  check_state(kf, psi);
  const Matrix joint = post_collision_state(kf, psi.amplitudes);
  const RealVector weights = joint.colwise().squaredNorm().transpose();
  const int L = kf.sites();
  std::vector<double> p(kf.outcomes(), 0.0);
  for (BasisIndex k = 0; k < kf.outcomes(); ++k) {
    double prob = 1.0;
    for (int i = 0; i < L && prob > 0.0; ++i) {
      const int rest = L - 1 - i;
      const Eigen::Index span = Eigen::Index{1} << rest;
      const BasisIndex prefix = k >> (rest + 1);
      const Eigen::Index base0 = static_cast<Eigen::Index>(prefix << 1) << rest;
      const double p0 = weights.segment(base0, span).sum();
      const double p1 = weights.segment(base0 + span, span).sum();
      prob *= (site_bit(k, i, L) ? p1 : p0) / (p0 + p1);
    }
    p[k] = prob * weights.sum();
  }
  return p;
}

std::vector<double> enumerated_outcome_distribution(const KrausFamily& kf, const PureState& psi) {
  check_state(kf, psi);
  std::vector<double> p(kf.outcomes());
  for (std::size_t k = 0; k < kf.outcomes(); ++k) p[k] = (kf.ops[k] * psi.amplitudes).squaredNorm();
  return p;
}

TrajectoryRecord sample_trajectory(const KrausFamily& kf, const PureState& psi0, int steps, std::uint64_t seed,
                                   bool record_occupations, std::uint64_t stream) {
  check_state(kf, psi0);
  check_steps(steps);
  if (!kf.is_unbiased()) throw InvalidArgument("sample_trajectory needs an unbiased Kraus family");
  auto rec = make_record(kf.params, steps, seed, stream, RecordMode::Reset, record_occupations);
  RandomStream rng(seed, stream);
  Vector psi = psi0.amplitudes;
  for (int t = 1; t <= steps; ++t) {
    const Matrix joint = post_collision_state(kf, psi);
    const BasisIndex k = measure_and_collapse(joint, kf.sites(), rng, psi);
    store_step(rec, t, k, psi);
  }
  return rec;
}

TrajectoryRecord sample_trajectory_enumerated(const KrausFamily& kf, const PureState& psi0, int steps,
                                              std::uint64_t seed, bool record_occupations, std::uint64_t stream) {
  check_state(kf, psi0);
  check_steps(steps);
  require_sites_within(kf.sites(), 4, "enumerated sampler");
  auto rec = make_record(kf.params, steps, seed, stream, RecordMode::Reset, record_occupations);
  RandomStream rng(seed, stream);
  Vector psi = psi0.amplitudes;
  const std::size_t M = kf.outcomes();
  std::vector<Vector> branches(M);
  std::vector<double> p(M);
  for (int t = 1; t <= steps; ++t) {
    double total = 0.0;
    for (std::size_t k = 0; k < M; ++k) {
      branches[k].noalias() = kf.ops[k] * psi;
      p[k] = branches[k].squaredNorm();
      total += p[k];
    }
    check_total(total);
    const double target = rng.uniform() * total;
    std::size_t k = 0;
    double cumulative = p[0];
    while (k + 1 < M && !(target < cumulative)) cumulative += p[++k];
    while (p[k] == 0.0 && k > 0) --k;
    psi = branches[k] / std::sqrt(p[k]);
    store_step(rec, t, static_cast<BasisIndex>(k), psi);
  }
  return rec;
}

TrajectoryRecord sample_trajectory_reset_free(const CollisionBlocks& blocks, const PureState& psi0, int steps,
                                              std::uint64_t seed, bool record_occupations, std::uint64_t stream) {
  if (psi0.dim() != blocks.params.dim()) throw InvalidArgument("initial state dimension mismatch");
  if (std::abs(psi0.amplitudes.norm() - 1.0) > 1e-10) throw InvalidArgument("initial state is not normalised");
  check_steps(steps);
  auto rec = make_record(blocks.params, steps, seed, stream, RecordMode::ResetFree, record_occupations);
  RandomStream rng(seed, stream);
  Vector psi = psi0.amplitudes;
  BasisIndex ancilla = 0;
  for (int t = 1; t <= steps; ++t) {
    const Matrix joint = post_collision_state(blocks, psi, ancilla);
    ancilla = measure_and_collapse(joint, blocks.params.sites, rng, psi);
    store_step(rec, t, ancilla, psi);
  }
  return rec;
}

TrajectoryRecord postprocess_reset_free(const TrajectoryRecord& record) {
  if (record.mode != RecordMode::ResetFree) throw InvalidArgument("postprocess_reset_free expects a reset-free record");
  TrajectoryRecord out = record;
  out.mode = RecordMode::ResetFreePostprocessed;
  const int L = record.sites();
  for (int t = 1; t <= record.steps; ++t) {
    for (int i = 0; i < L; ++i) {
      const int previous = t > 1 ? record.outcome(t - 1, i) : 0;
      out.outcomes[static_cast<std::size_t>(t - 1) * L + i] =
          static_cast<std::uint8_t>(record.outcome(t, i) != previous);
    }
  }
  return out;
}

ConditionalKraus build_conditional_kraus_dense(const ModelParams& params, int max_sites) {
  const auto M = static_cast<Eigen::Index>(params.outcomes());
  const Matrix u = build_joint_unitary(params, max_sites);
  ConditionalKraus ck;
  ck.params = params;
  ck.ops.assign(static_cast<std::size_t>(M * M), Matrix::Zero(M, M));
  for (Eigen::Index k = 0; k < M; ++k) {
    for (Eigen::Index kp = 0; kp < M; ++kp) {
      Matrix& op = ck.ops[static_cast<std::size_t>(k * M + kp)];
      for (Eigen::Index r = 0; r < M; ++r) {
        for (Eigen::Index c = 0; c < M; ++c) op(r, c) = u(r * M + k, c * M + kp);
      }
    }
  }
  return ck;
}

std::vector<double> exact_path_distribution(const KrausFamily& kf, const DensityMatrix& rho0, int steps) {
  check_steps(steps);
  const std::size_t M = kf.outcomes();
  std::size_t paths = 1;
  for (int t = 0; t < steps; ++t) paths *= M;
  std::vector<double> out(paths, 0.0);
  std::function<void(const Matrix&, int, std::size_t)> recurse = [&](const Matrix& rho, int t, std::size_t index) {
    for (std::size_t k = 0; k < M; ++k) {
      const Matrix next = kf.ops[k] * rho * kf.ops[k].adjoint();
      const std::size_t child = index * M + k;
      if (t + 1 == steps) {
        out[child] = next.trace().real();
      } else {
        recurse(next, t + 1, child);
      }
    }
  };
  recurse(rho0.data, 0, 0);
  return out;
}

std::vector<double> exact_reset_free_path_distribution(const ConditionalKraus& ck, const DensityMatrix& rho0,
                                                       int steps, bool postprocessed) {
  check_steps(steps);
  const std::size_t M = ck.params.outcomes();
  std::size_t paths = 1;
  for (int t = 0; t < steps; ++t) paths *= M;
  std::vector<double> out(paths, 0.0);
  std::function<void(const Matrix&, int, BasisIndex, std::size_t)> recurse =
      [&](const Matrix& rho, int t, BasisIndex previous, std::size_t index) {
        for (BasisIndex k = 0; k < M; ++k) {
          const Matrix& op = ck.op(k, previous);
          const Matrix next = op * rho * op.adjoint();
          const std::size_t child = index * M + (postprocessed ? (k ^ previous) : k);
          if (t + 1 == steps) {
            out[child] += next.trace().real();
          } else {
            recurse(next, t + 1, k, child);
          }
        }
      };
  recurse(rho0.data, 0, 0, 0);
  return out;
}

double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size()) throw InvalidArgument("total_variation: size mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) sum += std::abs(p[i] - q[i]);
  return 0.5 * sum;
}

}  // namespace rydcoll
