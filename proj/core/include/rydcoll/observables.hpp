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

#include <map>
#include <span>
#include <string>
#include <vector>

#include "rydcoll/channel.hpp"
#include "rydcoll/trajectory.hpp"
#include "rydcoll/types.hpp"

namespace rydcoll {

/// Space-time distance (di, dt). di is taken modulo L.
struct SpaceTimeOffset {
  int di = 0;
  int dt_steps = 0;

  bool is_activity() const { return di == 0 && dt_steps == 0; }
  /// "c_<di>_<dt>", e.g. c_0_1.
  std::string label() const;

  auto operator<=>(const SpaceTimeOffset&) const = default;
};

/// Parses "di:dt" (e.g. "0:1").
SpaceTimeOffset parse_offset(const std::string& text);

/// p(k) = Tr[K_k rho K_k^dagger] for every outcome string.
std::vector<double> outcome_marginals(const KrausFamily& kf, const DensityMatrix& rho);

/// Joint table p(k at t, k' at t - dt_steps) =
/// Tr[K_k E^{dt-1}[K_k' rho K_k'^dagger] K_k^dagger], indexed (k, k'),
/// with rho the state before the earlier outcome.
RealMatrix two_time_probabilities(const KrausFamily& kf, const DensityMatrix& base, int dt_steps);

/// a = (1/L) sum_k p(k) popcount(k), with p from rho.
double ensemble_activity(const KrausFamily& kf, const DensityMatrix& rho);

/// c_delta from `base`, the state before the earlier of the two outcomes.
double ensemble_correlation(const KrausFamily& kf, const DensityMatrix& base, SpaceTimeOffset offset);

/// Precomputes per-site effect operators Q_j = sum_{k: k_j = 1} K_k^dagger K_k
/// and their dual propagations so that activity and correlations cost one
/// Kraus pass per base state.
class OrderParameterEvaluator {
 public:
  OrderParameterEvaluator(const KrausFamily& kf, std::span<const SpaceTimeOffset> offsets);

  double activity(const DensityMatrix& rho) const;

  struct Result {
    double activity = 0.0;
    std::vector<double> correlations;  ///< aligned with offsets()
    DensityMatrix next;                ///< E[base]
  };

  /// Activity and correlations with every offset measured from `base`.
  Result evaluate(const DensityMatrix& base) const;

  const std::vector<SpaceTimeOffset>& offsets() const { return offsets_; }

 private:
  struct BaseTerms {
    std::vector<double> marginals;     // p(k)
    std::vector<Matrix> site_branches;  // M_i = sum_{k_i=1} K_k rho K_k^dagger
    Matrix next;                        // E[rho]
  };
  BaseTerms base_terms(const DensityMatrix& base, bool need_branches) const;
  double correlation(const BaseTerms& terms, SpaceTimeOffset offset) const;

  const KrausFamily* kf_;
  int sites_;
  std::vector<SpaceTimeOffset> offsets_;
  int max_dt_ = 0;
  // dual_effects_[d][j] = (E^*)^d [Q_j]
  std::vector<std::vector<Matrix>> dual_effects_;
};

struct CorrelationSeries {
  SpaceTimeOffset offset;
  std::vector<int> times;
  std::vector<double> values;
};

/// Ensemble order parameters along the average evolution rho(t) = E^t[rho0].
struct ObservableSeries {
  std::vector<int> times;  ///< t = 1..steps
  std::vector<double> activity;
  std::vector<CorrelationSeries> correlations;  ///< each starts at t = dt_steps + 1
  std::map<std::string, double> stationary_values;
};

ObservableSeries transient_series(const KrausFamily& kf, const DensityMatrix& rho0, int steps,
                                  std::span<const SpaceTimeOffset> offsets);

/// Stationary activity and correlations evaluated on a fixed state, keyed
/// "activity" and SpaceTimeOffset::label().
std::map<std::string, double> stationary_values(const KrausFamily& kf, const DensityMatrix& state,
                                                std::span<const SpaceTimeOffset> offsets);

/// The same on rho_PXP = P rho_ss P / Tr[P rho_ss P] with rho_ss = 1/2^L.
std::map<std::string, double> pxp_sector_prediction(const KrausFamily& kf,
                                                    std::span<const SpaceTimeOffset> offsets);
DensityMatrix pxp_sector_state(int sites, bool pbc);

/// Time-integrated counter O_delta over one record and its estimator:
/// O_0/(LT) for the activity, O_delta/(L T') - [O_0/(LT)]^2 otherwise,
/// with T' = T - dt_steps.
struct TimeIntegratedObservable {
  SpaceTimeOffset offset;
  long long counter = 0;
  double estimator = 0.0;
};

struct TimeIntegrals {
  long long activity_counter = 0;
  double activity_estimator = 0.0;
  std::vector<TimeIntegratedObservable> correlations;
};

TimeIntegrals trajectory_time_integrals(const TrajectoryRecord& record,
                                        std::span<const SpaceTimeOffset> offsets);

/// Estimators evaluated on every prefix [1, T] of the record; rows are T,
/// column 0 the activity estimator and column j the j-th offset (NaN while
/// T <= dt_steps).
RealMatrix running_estimators(const TrajectoryRecord& record, std::span<const SpaceTimeOffset> offsets);

/// Standard error of the mean of `series` by non-overlapping batch means.
double batch_means_standard_error(std::span<const double> series, int batches = 20);

/// Batch-means standard errors of the activity and correlation estimators of
/// one record (the correlation estimator is re-evaluated per batch).
struct EstimatorErrors {
  double activity = 0.0;
  std::vector<double> correlations;
};
EstimatorErrors estimator_standard_errors(const TrajectoryRecord& record,
                                          std::span<const SpaceTimeOffset> offsets, int batches = 20);

}  // namespace rydcoll
