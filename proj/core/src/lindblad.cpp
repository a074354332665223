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

#include "rydcoll/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "rydcoll/channel.hpp"
#include "rydcoll/error.hpp"
#include "rydcoll/linalg.hpp"
#include "rydcoll/model.hpp"
#include "rydcoll/rng.hpp"
#include "rydcoll/trajectory.hpp"

namespace rydcoll {

namespace {

constexpr double kNormIncreaseTolerance = 1e-10;

Vector vec(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

Matrix unvec(const Vector& v, Eigen::Index n) { return Eigen::Map<const Matrix>(v.data(), n, n); }

// exp(-i H t) psi by Taylor series; t * ||H|| is kept small by the callers.
Vector taylor_propagate(const Matrix& h, const Vector& psi, double t) {
  Vector out = psi;
  Vector term = psi;
  const double scale = std::max(psi.norm(), 1e-300);
  for (int k = 1; k < 200; ++k) {
    term = (Complex{0.0, -t / k}) * (h * term);
    out += term;
    if (term.norm() < 1e-17 * scale) break;
  }
  return out;
}

Eigen::Index largest_real_part(const Vector& values) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < values.size(); ++i) {
    if (values(i).real() > values(best).real()) best = i;
  }
  return best;
}

// -theta'(s) = e^{-s} sum_i Tr[l J_i r J_i] / Tr[l r]
double hellmann_feynman_activity(const LindbladModel& model, double s, const Matrix& left, const Matrix& right) {
  Complex num{0.0, 0.0};
  for (const auto& j : model.jumps) num += trace_product(left, j * right * j);
  const Complex den = trace_product(left, right);
  return (std::exp(-s) * num / den).real();
}

// Eigenpair (largest real part) of a dense generator matrix.
std::pair<Complex, Matrix> dense_dominant(const Matrix& generator, Eigen::Index n) {
  Eigen::ComplexEigenSolver<Matrix> eig(generator);
  if (eig.info() != Eigen::Success) throw NumericalError("dense generator eigendecomposition failed");
  const auto best = largest_real_part(eig.eigenvalues());
  Matrix v = unvec(eig.eigenvectors().col(best), n);
  const Complex tr = v.trace();
  if (std::abs(tr) > 0.0) v /= tr;
  return {eig.eigenvalues()(best), v};
}

// Orbits of operator matrix elements (a, b) under simultaneous translation
// and reflection of the periodic chain.
struct TranslationOrbits {
  std::vector<std::pair<BasisIndex, BasisIndex>> representative;
  std::vector<std::vector<std::pair<BasisIndex, BasisIndex>>> members;
};

BasisIndex translate(BasisIndex x, int sites) {
  const BasisIndex mask = static_cast<BasisIndex>(hilbert_dim(sites) - 1);
  return ((x >> 1) | (x << (sites - 1))) & mask;
}

BasisIndex reflect(BasisIndex x, int sites) {
  BasisIndex out = 0;
  for (int i = 0; i < sites; ++i) out |= ((x >> i) & 1u) << (sites - 1 - i);
  return out;
}

TranslationOrbits translation_orbits(int sites) {
  const auto n = static_cast<BasisIndex>(hilbert_dim(sites));
  std::vector<int> owner(static_cast<std::size_t>(n) * n, -1);
  TranslationOrbits orbits;
  for (BasisIndex a = 0; a < n; ++a) {
    for (BasisIndex b = 0; b < n; ++b) {
      if (owner[static_cast<std::size_t>(a) * n + b] >= 0) continue;
      const int id = static_cast<int>(orbits.representative.size());
      orbits.representative.emplace_back(a, b);
      orbits.members.emplace_back();
      for (int r = 0; r < 2; ++r) {
        BasisIndex x = r ? reflect(a, sites) : a;
        BasisIndex y = r ? reflect(b, sites) : b;
        for (int t = 0; t < sites; ++t) {
          auto& slot = owner[static_cast<std::size_t>(x) * n + y];
          if (slot < 0) {
            slot = id;
            orbits.members.back().emplace_back(x, y);
          }
          x = translate(x, sites);
          y = translate(y, sites);
        }
      }
    }
  }
  return orbits;
}

// Matrix of `map` on the orthonormal basis of translation-invariant operators
// (one normalised orbit sum per column). The dual map has the adjoint matrix.
Matrix sector_matrix(const std::function<Matrix(const Matrix&)>& map, const TranslationOrbits& orbits,
                     Eigen::Index n) {
  const auto count = static_cast<Eigen::Index>(orbits.representative.size());
  Matrix reduced(count, count);
  Matrix basis = Matrix::Zero(n, n);
  for (Eigen::Index o = 0; o < count; ++o) {
    const double norm = 1.0 / std::sqrt(static_cast<double>(orbits.members[o].size()));
    for (auto [a, b] : orbits.members[o]) basis(a, b) = norm;
    const Matrix image = map(basis);
    for (auto [a, b] : orbits.members[o]) basis(a, b) = 0.0;
    for (Eigen::Index p = 0; p < count; ++p) {
      const auto [a, b] = orbits.representative[p];
      reduced(p, o) = std::sqrt(static_cast<double>(orbits.members[p].size())) * image(a, b);
    }
  }
  return reduced;
}

Matrix from_sector(const Vector& coeffs, const TranslationOrbits& orbits, Eigen::Index n) {
  Matrix v = Matrix::Zero(n, n);
  for (std::size_t o = 0; o < orbits.members.size(); ++o) {
    const double norm = 1.0 / std::sqrt(static_cast<double>(orbits.members[o].size()));
    for (auto [a, b] : orbits.members[o]) v(a, b) = norm * coeffs(static_cast<Eigen::Index>(o));
  }
  const Complex tr = v.trace();
  if (std::abs(tr) > 0.0) v /= tr;
  return v;
}

struct SectorEigenpair {
  Complex theta;
  Matrix right;
  Matrix left;
};

// Rightmost eigenvalue from the Schur form, eigenvectors by inverse iteration
// on (M - theta) and its adjoint.
SectorEigenpair sector_dominant(const Matrix& reduced, const TranslationOrbits& orbits, Eigen::Index n) {
  const auto count = reduced.rows();
  Eigen::ComplexEigenSolver<Matrix> eig(reduced, false);
  if (eig.info() != Eigen::Success) throw NumericalError("translation-sector eigendecomposition failed");
  const Complex theta = eig.eigenvalues()(largest_real_part(eig.eigenvalues()));

  const double scale = std::max(1.0, reduced.cwiseAbs().rowwise().sum().maxCoeff());
  Matrix shifted = reduced;
  shifted.diagonal().array() -= theta + Complex{1e-13 * scale, 0.0};
  const Eigen::PartialPivLU<Matrix> lu(shifted);
  Vector right = Vector::Ones(count);
  Vector left = Vector::Ones(count);
  for (int pass = 0; pass < 3; ++pass) {
    right = lu.solve(right).normalized();
    left = lu.adjoint().solve(left).normalized();
  }
  const double residual = (reduced * right - theta * right).norm();
  if (!(residual <= 1e-8 * scale)) {
    throw NumericalError("translation-sector inverse iteration did not converge (residual " +
                         std::to_string(residual) + ")");
  }
  return {theta, from_sector(right, orbits, n), from_sector(left, orbits, n)};
}

// exp(G tau) X by Taylor substeps sized from a norm bound of G.
Matrix propagate_generator(const std::function<Matrix(const Matrix&)>& generator, double bound, double tau,
                           const Matrix& x) {
  const int substeps = std::max(1, static_cast<int>(std::ceil(tau * bound / 0.5)));
  const double h = tau / substeps;
  Matrix out = x;
  for (int step = 0; step < substeps; ++step) {
    Matrix term = out;
    Matrix sum = out;
    const double scale = std::max(max_abs(out), 1e-300);
    for (int k = 1; k < 100; ++k) {
      term = generator(term) * (h / k);
      sum += term;
      if (max_abs(term) < 1e-17 * scale) break;
    }
    out = std::move(sum);
  }
  return out;
}

}  // namespace

LindbladModel LindbladModel::from_params(const ModelParams& params) {
  params.validate();
  LindbladModel m;
  m.params = params;
  m.hamiltonian = build_system_hamiltonian(params).data;
  m.effective_hamiltonian = m.hamiltonian;
  const double root = std::sqrt(params.gamma);
  for (int i = 0; i < params.sites; ++i) {
    Matrix j = root * site_projector(params.sites, i).data;
    m.effective_hamiltonian -= Complex{0.0, 0.5} * (j * j);
    m.jumps.push_back(std::move(j));
  }
  return m;
}

Matrix tilted_generator_apply(const LindbladModel& model, double s, const Matrix& rho) {
  const Complex i{0.0, 1.0};
  const Matrix& h = model.effective_hamiltonian;
  Matrix out = -i * (h * rho) + i * (rho * h.adjoint());
  const double weight = std::exp(-s);
  for (const auto& j : model.jumps) out.noalias() += weight * (j * rho * j);
  return out;
}

Matrix tilted_generator_dual_apply(const LindbladModel& model, double s, const Matrix& x) {
  const Complex i{0.0, 1.0};
  const Matrix& h = model.effective_hamiltonian;
  Matrix out = i * (h.adjoint() * x) - i * (x * h);
  const double weight = std::exp(-s);
  for (const auto& j : model.jumps) out.noalias() += weight * (j * x * j);
  return out;
}

Matrix lindblad_generator_apply(const LindbladModel& model, const Matrix& rho) {
  return tilted_generator_apply(model, 0.0, rho);
}

Matrix superoperator_matrix(const std::function<Matrix(const Matrix&)>& map, std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  Matrix out(n * n, n * n);
  Matrix basis = Matrix::Zero(n, n);
  for (Eigen::Index b = 0; b < n; ++b) {
    for (Eigen::Index a = 0; a < n; ++a) {
      basis(a, b) = 1.0;
      out.col(a + b * n) = vec(map(basis));
      basis(a, b) = 0.0;
    }
  }
  return out;
}

Matrix lindblad_superoperator(const LindbladModel& model, double s) {
  require_sites_within(model.sites(), 3, "dense Lindblad superoperator");
  return superoperator_matrix([&](const Matrix& x) { return tilted_generator_apply(model, s, x); }, model.dim());
}

CollisionLimitReport collision_limit_check(const ModelParams& params, std::span<const double> dt_list) {
  require_sites_within(params.sites, 3, "collision limit check");
  if (dt_list.empty()) throw InvalidArgument("collision_limit_check: empty dt list");
  CollisionLimitReport report;
  for (double dt : dt_list) {
    ModelParams p = params;
    p.dt = dt;
    const auto kf = build_kraus_fast(p);
    const Matrix channel =
        superoperator_matrix([&](const Matrix& x) { return kraus_sum(kf.ops, x); }, p.dim());
    const Matrix generator = lindblad_superoperator(LindbladModel::from_params(p));
    const Matrix exact = (generator * dt).exp();
    const double d = max_abs(channel - exact);
    report.rows.push_back({dt, d, d / dt});
  }

  constexpr double kExact = 1e-12;
  report.ratio_test_passed = true;
  for (std::size_t r = 1; r < report.rows.size(); ++r) {
    const auto& prev = report.rows[r - 1];
    const auto& cur = report.rows[r];
    if (!(cur.dt < prev.dt)) throw InvalidArgument("collision_limit_check: dt values must decrease");
    if (prev.distance < kExact && cur.distance < kExact) continue;
    const double halvings = std::log2(prev.dt / cur.dt);
    if (!(prev.ratio >= std::pow(1.3, halvings) * cur.ratio)) report.ratio_test_passed = false;
  }

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (const auto& row : report.rows) {
    if (row.distance < kExact) continue;
    const double x = std::log(row.dt), y = std::log(row.distance);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count >= 2) report.observed_order = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  return report;
}

JumpTrajectory quantum_jump_trajectory(const LindbladModel& model, const Vector& psi0, double t_max,
                                       std::uint64_t seed, const JumpOptions& options, std::uint64_t stream) {
  if (psi0.size() != static_cast<Eigen::Index>(model.dim())) throw InvalidArgument("initial state dimension mismatch");
  if (std::abs(psi0.norm() - 1.0) > 1e-10) throw InvalidArgument("initial state is not normalised");
  if (!(t_max > 0.0) || !(options.micro_dt > 0.0) || !(options.time_tolerance > 0.0)) {
    throw InvalidArgument("quantum_jump_trajectory: times must be positive");
  }
  const long steps_per_sample = std::lround(options.sample_interval / options.micro_dt);
  if (steps_per_sample < 1 ||
      std::abs(steps_per_sample * options.micro_dt - options.sample_interval) > 1e-9 * options.sample_interval) {
    throw InvalidArgument("sample_interval must be a positive multiple of micro_dt");
  }

  const Matrix& h = model.effective_hamiltonian;
  const Matrix step = (Complex{0.0, -options.micro_dt} * h).exp();
  RandomStream rng(seed, stream);
  JumpTrajectory traj;
  traj.seed = seed;
  traj.stream = stream;
  traj.t_max = t_max;

  auto sample = [&](double t, const Vector& psi) {
    traj.sample_times.push_back(t);
    traj.occupations.push_back(site_occupations(psi / psi.norm(), model.sites()));
  };
  // Avoids an exact zero threshold, which would never trigger.
  auto draw_threshold = [&] { return 1.0 - rng.uniform(); };

  Vector psi = psi0;
  double threshold = draw_threshold();
  double t = 0.0;
  long grid = 0;
  bool aligned = true;
  sample(0.0, psi);

  while (t < t_max) {
    const double target = std::min((grid + 1) * options.micro_dt, t_max);
    const double span = target - t;
    if (span <= 0.0) break;
    const double before = psi.squaredNorm();
    Vector next = aligned && target == (grid + 1) * options.micro_dt ? Vector(step * psi)
                                                                    : taylor_propagate(h, psi, span);
    const double after = next.squaredNorm();
    if (after > before * (1.0 + kNormIncreaseTolerance)) {
      throw NumericalError("norm increased during no-jump evolution; reduce micro_dt");
    }
    if (after > threshold) {
      psi = std::move(next);
      t = target;
      ++grid;
      aligned = true;
      if (grid % steps_per_sample == 0 && t <= t_max) sample(t, psi);
      continue;
    }

    double lo = 0.0, hi = span;
    while (hi - lo > options.time_tolerance) {
      const double mid = 0.5 * (lo + hi);
      if (taylor_propagate(h, psi, mid).squaredNorm() > threshold) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    psi = taylor_propagate(h, psi, hi);
    t += hi;
    aligned = false;

    std::vector<double> weights(model.jumps.size());
    double total = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      weights[i] = (model.jumps[i] * psi).squaredNorm();
      total += weights[i];
    }
    if (!(total > 0.0)) throw NumericalError("jump with vanishing jump rate");
    const double u = rng.uniform() * total;
    std::size_t site = 0;
    double cumulative = weights[0];
    while (site + 1 < weights.size() && !(u < cumulative)) cumulative += weights[++site];
    psi = model.jumps[site] * psi;
    psi.normalize();
    traj.events.push_back({t, static_cast<int>(site)});
    threshold = draw_threshold();
  }
  return traj;
}

Matrix lindblad_evolve_dense(const LindbladModel& model, const Matrix& rho0, double t) {
  const Matrix generator = lindblad_superoperator(model);
  const Vector out = (generator * t).exp() * vec(rho0);
  return unvec(out, rho0.rows());
}

ScgfResult tilted_lindblad_scgf(const LindbladModel& model, double s, const ScgfOptions& options) {
  if (!std::isfinite(s)) throw InvalidArgument("counting field s must be finite");
  const auto n = static_cast<Eigen::Index>(model.dim());
  ScgfMethod method = options.method;
  if (method == ScgfMethod::Auto) {
    method = model.sites() <= 3 ? ScgfMethod::Dense
             : model.params.pbc ? ScgfMethod::TranslationSector
                                : ScgfMethod::Propagator;
  }
  if (method == ScgfMethod::TranslationSector && !model.params.pbc) {
    throw InvalidArgument("translation-sector SCGF requires periodic boundaries");
  }

  auto forward = [&](const Matrix& x) { return tilted_generator_apply(model, s, x); };
  auto dual = [&](const Matrix& x) { return tilted_generator_dual_apply(model, s, x); };

  ScgfResult result;
  result.s = s;
  result.method = method;
  Complex theta;
  Matrix right, left;

  switch (method) {
    case ScgfMethod::Dense: {
      require_sites_within(model.sites(), 3, "dense SCGF");
      std::tie(theta, right) = dense_dominant(superoperator_matrix(forward, model.dim()), n);
      left = dense_dominant(superoperator_matrix(dual, model.dim()), n).second;
      break;
    }
    case ScgfMethod::TranslationSector: {
      require_sites_within(model.sites(), 7, "translation-sector SCGF");
      const auto orbits = translation_orbits(model.sites());
      auto pair = sector_dominant(sector_matrix(forward, orbits, n), orbits, n);
      theta = pair.theta;
      right = std::move(pair.right);
      left = std::move(pair.left);
      break;
    }
    case ScgfMethod::Propagator:
    case ScgfMethod::Auto: {
      const double tau = options.tau > 0.0 ? options.tau : 0.1 / std::max(model.params.gamma, 1e-12);
      double bound = 2.0 * model.effective_hamiltonian.cwiseAbs().rowwise().sum().maxCoeff();
      bound += std::exp(-s) * model.params.gamma * model.sites();
      EigenSolveOptions eo = options.eigen;
      eo.target = SpectralTarget::LargestMagnitude;
      const Matrix identity = Matrix::Identity(n, n);
      const auto r = dominant_eigen([&](const Matrix& x) { return propagate_generator(forward, bound, tau, x); },
                                    identity / static_cast<double>(n), eo);
      const auto l = dominant_eigen([&](const Matrix& x) { return propagate_generator(dual, bound, tau, x); },
                                    identity, eo);
      result.converged = r.converged && l.converged;
      theta = std::log(r.value) / tau;
      right = r.vector;
      left = l.vector;
      break;
    }
  }
  result.theta = theta.real();
  result.activity = hellmann_feynman_activity(model, s, left, right);
  return result;
}

double scgf_derivative_fd(const LindbladModel& model, double s, double h, const ScgfOptions& options) {
  if (!(h > 0.0)) throw InvalidArgument("finite-difference step must be > 0");
  const double plus = tilted_lindblad_scgf(model, s + h, options).theta;
  const double minus = tilted_lindblad_scgf(model, s - h, options).theta;
  return -(plus - minus) / (2.0 * h);
}

}  // namespace rydcoll
