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

#include "rydcoll/observables.hpp"

#include <cmath>
#include <limits>

#include "rydcoll/error.hpp"
#include "rydcoll/linalg.hpp"
#include "rydcoll/model.hpp"

namespace rydcoll {

namespace {

int wrap_site(int site, int sites) { return ((site % sites) + sites) % sites; }

void check_offset(SpaceTimeOffset offset) {
  if (offset.dt_steps < 0) throw InvalidArgument("offset time distance must be >= 0");
}

void check_state_dim(const KrausFamily& kf, const DensityMatrix& rho) {
  if (rho.dim() != kf.dim()) throw InvalidArgument("state dimension does not match the Kraus family");
}

// Site-averaged covariance from a joint table over (later k, earlier k').
double correlation_from_table(const RealMatrix& table, int sites, int di) {
  const auto M = static_cast<BasisIndex>(table.rows());
  double sum = 0.0;
  for (int i = 0; i < sites; ++i) {
    const int j = wrap_site(i + di, sites);
    double joint = 0.0, early = 0.0, late = 0.0;
    for (BasisIndex k = 0; k < M; ++k) {
      for (BasisIndex kp = 0; kp < M; ++kp) {
        const double p = table(k, kp);
        const int a = site_bit(kp, i, sites);
        const int b = site_bit(k, j, sites);
        joint += p * a * b;
        early += p * a;
        late += p * b;
      }
    }
    sum += joint - early * late;
  }
  return sum / sites;
}

double same_time_correlation(const std::vector<double>& p, int sites, int di) {
  double sum = 0.0;
  for (int i = 0; i < sites; ++i) {
    const int j = wrap_site(i + di, sites);
    double joint = 0.0, mi = 0.0, mj = 0.0;
    for (BasisIndex k = 0; k < p.size(); ++k) {
      const int a = site_bit(k, i, sites);
      const int b = site_bit(k, j, sites);
      joint += p[k] * a * b;
      mi += p[k] * a;
      mj += p[k] * b;
    }
    sum += joint - mi * mj;
  }
  return sum / sites;
}

double activity_from_marginals(const std::vector<double>& p, int sites) {
  double sum = 0.0;
  for (BasisIndex k = 0; k < p.size(); ++k) sum += p[k] * popcount(k);
  return sum / sites;
}

struct WindowCounts {
  long long activity = 0;
  std::vector<long long> offsets;
};

// Counters over steps [first, last] (1-based, inclusive); pair terms only use
// earlier steps inside the window.
WindowCounts window_counts(const TrajectoryRecord& rec, int first, int last,
                           std::span<const SpaceTimeOffset> offsets) {
  const int L = rec.sites();
  WindowCounts counts;
  counts.offsets.assign(offsets.size(), 0);
  for (int t = first; t <= last; ++t) {
    for (int i = 0; i < L; ++i) counts.activity += rec.outcome(t, i);
    for (std::size_t o = 0; o < offsets.size(); ++o) {
      const int earlier = t - offsets[o].dt_steps;
      if (earlier < first) continue;
      long long c = 0;
      for (int i = 0; i < L; ++i) c += rec.outcome(earlier, i) * rec.outcome(t, wrap_site(i + offsets[o].di, L));
      counts.offsets[o] += c;
    }
  }
  return counts;
}

double estimator(long long counter, int sites, int window, int dt, double activity) {
  const int effective = window - dt;
  if (effective <= 0) return std::numeric_limits<double>::quiet_NaN();
  return static_cast<double>(counter) / (static_cast<double>(sites) * effective) - activity * activity;
}

}  // namespace

std::string SpaceTimeOffset::label() const { return "c_" + std::to_string(di) + "_" + std::to_string(dt_steps); }

SpaceTimeOffset parse_offset(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw InvalidArgument("offset must look like di:dt, got '" + text + "'");
  SpaceTimeOffset offset;
  try {
    std::size_t used = 0;
    offset.di = std::stoi(text.substr(0, colon), &used);
    if (used != colon) throw InvalidArgument("");
    const std::string rest = text.substr(colon + 1);
    offset.dt_steps = std::stoi(rest, &used);
    if (used != rest.size()) throw InvalidArgument("");
  } catch (const std::exception&) {
    throw InvalidArgument("offset must look like di:dt, got '" + text + "'");
  }
  check_offset(offset);
  return offset;
}

std::vector<double> outcome_marginals(const KrausFamily& kf, const DensityMatrix& rho) {
  check_state_dim(kf, rho);
  std::vector<double> p(kf.outcomes());
  for (std::size_t k = 0; k < p.size(); ++k) {
    p[k] = trace_product(kf.ops[k] * rho.data, kf.ops[k].adjoint()).real();
    if (p[k] < -1e-10) throw NumericalError("negative outcome probability " + std::to_string(p[k]));
  }
  return p;
}

RealMatrix two_time_probabilities(const KrausFamily& kf, const DensityMatrix& base, int dt_steps) {
  check_state_dim(kf, base);
  if (dt_steps < 1) throw InvalidArgument("two_time_probabilities: dt_steps must be >= 1");
  const auto M = static_cast<Eigen::Index>(kf.outcomes());
  RealMatrix table(M, M);
  for (Eigen::Index kp = 0; kp < M; ++kp) {
    Matrix branch = kf.ops[kp] * base.data * kf.ops[kp].adjoint();
    for (int d = 1; d < dt_steps; ++d) branch = kraus_sum(kf.ops, branch);
    for (Eigen::Index k = 0; k < M; ++k) {
      table(k, kp) = trace_product(kf.ops[k] * branch, kf.ops[k].adjoint()).real();
    }
  }
  return table;
}

double ensemble_activity(const KrausFamily& kf, const DensityMatrix& rho) {
  return activity_from_marginals(outcome_marginals(kf, rho), kf.sites());
}

double ensemble_correlation(const KrausFamily& kf, const DensityMatrix& base, SpaceTimeOffset offset) {
  check_offset(offset);
  if (offset.dt_steps == 0) return same_time_correlation(outcome_marginals(kf, base), kf.sites(), offset.di);
  return correlation_from_table(two_time_probabilities(kf, base, offset.dt_steps), kf.sites(), offset.di);
}

OrderParameterEvaluator::OrderParameterEvaluator(const KrausFamily& kf, std::span<const SpaceTimeOffset> offsets)
    : kf_(&kf), sites_(kf.sites()), offsets_(offsets.begin(), offsets.end()) {
  for (const auto& o : offsets_) {
    check_offset(o);
    max_dt_ = std::max(max_dt_, o.dt_steps);
  }
  if (max_dt_ == 0) return;
  const auto n = static_cast<Eigen::Index>(kf.dim());
  std::vector<Matrix> effects(sites_, Matrix::Zero(n, n));
  for (BasisIndex k = 0; k < kf.outcomes(); ++k) {
    const Matrix e = kf.ops[k].adjoint() * kf.ops[k];
    for (int j = 0; j < sites_; ++j) {
      if (site_bit(k, j, sites_)) effects[j] += e;
    }
  }
  dual_effects_.push_back(std::move(effects));
  for (int d = 1; d < max_dt_; ++d) {
    std::vector<Matrix> next;
    next.reserve(sites_);
    for (const auto& y : dual_effects_.back()) next.push_back(apply_channel_dual(kf, y));
    dual_effects_.push_back(std::move(next));
  }
}

OrderParameterEvaluator::BaseTerms OrderParameterEvaluator::base_terms(const DensityMatrix& base,
                                                                       bool need_branches) const {
  check_state_dim(*kf_, base);
  const auto n = static_cast<Eigen::Index>(kf_->dim());
  BaseTerms terms;
  terms.marginals.resize(kf_->outcomes());
  terms.next = Matrix::Zero(n, n);
  if (need_branches) terms.site_branches.assign(sites_, Matrix::Zero(n, n));
  Matrix tmp(n, n), x(n, n);
  for (BasisIndex k = 0; k < kf_->outcomes(); ++k) {
    tmp.noalias() = kf_->ops[k] * base.data;
    x.noalias() = tmp * kf_->ops[k].adjoint();
    terms.marginals[k] = x.trace().real();
    terms.next += x;
    if (need_branches) {
      for (int i = 0; i < sites_; ++i) {
        if (site_bit(k, i, sites_)) terms.site_branches[i] += x;
      }
    }
  }
  make_hermitian(terms.next);
  return terms;
}

double OrderParameterEvaluator::correlation(const BaseTerms& terms, SpaceTimeOffset offset) const {
  if (offset.dt_steps == 0) return same_time_correlation(terms.marginals, sites_, offset.di);
  const auto& effects = dual_effects_[offset.dt_steps - 1];
  double sum = 0.0;
  for (int i = 0; i < sites_; ++i) {
    const int j = wrap_site(i + offset.di, sites_);
    double early = 0.0;
    for (BasisIndex k = 0; k < terms.marginals.size(); ++k) {
      if (site_bit(k, i, sites_)) early += terms.marginals[k];
    }
    const double joint = trace_product(effects[j], terms.site_branches[i]).real();
    const double late = trace_product(effects[j], terms.next).real();
    sum += joint - early * late;
  }
  return sum / sites_;
}

double OrderParameterEvaluator::activity(const DensityMatrix& rho) const {
  return activity_from_marginals(outcome_marginals(*kf_, rho), sites_);
}

OrderParameterEvaluator::Result OrderParameterEvaluator::evaluate(const DensityMatrix& base) const {
  const auto terms = base_terms(base, max_dt_ > 0);
  Result r;
  r.activity = activity_from_marginals(terms.marginals, sites_);
  r.correlations.reserve(offsets_.size());
  for (const auto& o : offsets_) r.correlations.push_back(correlation(terms, o));
  r.next.data = terms.next;
  return r;
}

ObservableSeries transient_series(const KrausFamily& kf, const DensityMatrix& rho0, int steps,
                                  std::span<const SpaceTimeOffset> offsets) {
  if (steps < 1) throw InvalidArgument("transient_series: steps must be >= 1");
  const OrderParameterEvaluator eval(kf, offsets);
  ObservableSeries series;
  series.correlations.resize(offsets.size());
  for (std::size_t o = 0; o < offsets.size(); ++o) series.correlations[o].offset = offsets[o];
  DensityMatrix rho = rho0;
  for (int b = 0; b < steps; ++b) {
    auto r = eval.evaluate(rho);
    series.times.push_back(b + 1);
    series.activity.push_back(r.activity);
    for (std::size_t o = 0; o < offsets.size(); ++o) {
      const int t = b + 1 + offsets[o].dt_steps;
      if (t > steps) continue;
      series.correlations[o].times.push_back(t);
      series.correlations[o].values.push_back(r.correlations[o]);
    }
    rho = std::move(r.next);
  }
  series.stationary_values = stationary_values(kf, DensityMatrix::maximally_mixed(kf.sites()), offsets);
  return series;
}

std::map<std::string, double> stationary_values(const KrausFamily& kf, const DensityMatrix& state,
                                                std::span<const SpaceTimeOffset> offsets) {
  const OrderParameterEvaluator eval(kf, offsets);
  const auto r = eval.evaluate(state);
  std::map<std::string, double> out;
  out["activity"] = r.activity;
  for (std::size_t o = 0; o < offsets.size(); ++o) out[offsets[o].label()] = r.correlations[o];
  return out;
}

DensityMatrix pxp_sector_state(int sites, bool pbc) {
  const Matrix p = build_pxp_projector(sites, pbc).data;
  return {p / p.trace().real()};
}

std::map<std::string, double> pxp_sector_prediction(const KrausFamily& kf,
                                                    std::span<const SpaceTimeOffset> offsets) {
  return stationary_values(kf, pxp_sector_state(kf.sites(), kf.params.pbc), offsets);
}

TimeIntegrals trajectory_time_integrals(const TrajectoryRecord& record, std::span<const SpaceTimeOffset> offsets) {
  for (const auto& o : offsets) {
    check_offset(o);
    if (o.dt_steps >= record.steps) throw InvalidArgument("offset time distance must be smaller than the record");
  }
  const int L = record.sites();
  const auto counts = window_counts(record, 1, record.steps, offsets);
  TimeIntegrals out;
  out.activity_counter = counts.activity;
  out.activity_estimator = static_cast<double>(counts.activity) / (static_cast<double>(L) * record.steps);
  for (std::size_t o = 0; o < offsets.size(); ++o) {
    out.correlations.push_back({offsets[o], counts.offsets[o],
                                estimator(counts.offsets[o], L, record.steps, offsets[o].dt_steps,
                                          out.activity_estimator)});
  }
  return out;
}

RealMatrix running_estimators(const TrajectoryRecord& record, std::span<const SpaceTimeOffset> offsets) {
  for (const auto& o : offsets) check_offset(o);
  const int L = record.sites();
  RealMatrix out(record.steps, static_cast<Eigen::Index>(offsets.size()) + 1);
  long long activity = 0;
  std::vector<long long> counters(offsets.size(), 0);
  for (int t = 1; t <= record.steps; ++t) {
    const auto step = window_counts(record, t, t, {});
    activity += step.activity;
    for (std::size_t o = 0; o < offsets.size(); ++o) {
      const int earlier = t - offsets[o].dt_steps;
      if (earlier < 1) continue;
      for (int i = 0; i < L; ++i) {
        counters[o] += record.outcome(earlier, i) * record.outcome(t, wrap_site(i + offsets[o].di, L));
      }
    }
    const double a = static_cast<double>(activity) / (static_cast<double>(L) * t);
    out(t - 1, 0) = a;
    for (std::size_t o = 0; o < offsets.size(); ++o) {
      out(t - 1, static_cast<Eigen::Index>(o) + 1) = estimator(counters[o], L, t, offsets[o].dt_steps, a);
    }
  }
  return out;
}

double batch_means_standard_error(std::span<const double> series, int batches) {
  if (batches < 2) throw InvalidArgument("batch means need at least 2 batches");
  const std::size_t length = series.size() / static_cast<std::size_t>(batches);
  if (length == 0) throw InvalidArgument("series shorter than the number of batches");
  std::vector<double> means(batches, 0.0);
  for (int b = 0; b < batches; ++b) {
    for (std::size_t i = 0; i < length; ++i) means[b] += series[b * length + i];
    means[b] /= static_cast<double>(length);
  }
  double mean = 0.0;
  for (double m : means) mean += m;
  mean /= batches;
  double var = 0.0;
  for (double m : means) var += (m - mean) * (m - mean);
  var /= batches - 1;
  return std::sqrt(var / batches);
}

EstimatorErrors estimator_standard_errors(const TrajectoryRecord& record, std::span<const SpaceTimeOffset> offsets,
                                          int batches) {
  if (batches < 2) throw InvalidArgument("batch means need at least 2 batches");
  const int length = record.steps / batches;
  for (const auto& o : offsets) {
    check_offset(o);
    if (o.dt_steps >= length) throw InvalidArgument("batches too short for the requested offsets");
  }
  const int L = record.sites();
  std::vector<double> activity(batches);
  std::vector<std::vector<double>> corr(offsets.size(), std::vector<double>(batches));
  for (int b = 0; b < batches; ++b) {
    const int first = 1 + b * length;
    const auto counts = window_counts(record, first, first + length - 1, offsets);
    activity[b] = static_cast<double>(counts.activity) / (static_cast<double>(L) * length);
    for (std::size_t o = 0; o < offsets.size(); ++o) {
      corr[o][b] = estimator(counts.offsets[o], L, length, offsets[o].dt_steps, activity[b]);
    }
  }
  EstimatorErrors out;
  out.activity = batch_means_standard_error(activity, batches);
  for (const auto& c : corr) out.correlations.push_back(batch_means_standard_error(c, batches));
  return out;
}

}  // namespace rydcoll
