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

#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>

#include "rydcoll/channel.hpp"
#include "rydcoll/error.hpp"
#include "rydcoll/lindblad.hpp"
#include "rydcoll/linalg.hpp"
#include "rydcoll/observables.hpp"
#include "rydcoll/parallel.hpp"
#include "rydcoll/singlebody.hpp"
#include "rydcoll/tilted.hpp"
#include "rydcoll/trajectory.hpp"

namespace rydcoll::cli {

std::ofstream RunContext::open(const std::string& name) {
  std::ofstream out(dir / name, std::ios::binary);
  if (!out) throw ResourceError("cannot write " + (dir / name).string());
  out << std::setprecision(17);
  outputs.push_back(name);
  return out;
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<SpaceTimeOffset> parse_offsets(const std::vector<std::string>& texts) {
  std::vector<SpaceTimeOffset> out;
  for (const auto& t : texts) {
    auto o = parse_offset(t);
    if (o.is_activity()) throw InvalidArgument("offset 0:0 is the activity; it is always written");
    out.push_back(o);
  }
  return out;
}

std::string offset_header(const std::vector<SpaceTimeOffset>& offsets, const std::string& prefix = "") {
  std::string h;
  for (const auto& o : offsets) h += "," + prefix + o.label();
  return h;
}

void schema(std::ostream& out, const std::string& name, const ModelParams& p) {
  out << "# schema: " << name << " L=" << p.sites << " omega=" << p.omega << " V=" << p.v << " gamma=" << p.gamma
      << " dt=" << p.dt << " delta=" << p.delta << " pbc=" << (p.pbc ? 1 : 0) << "\n";
}

KrausFamily kraus_for(const RunContext& ctx, const ModelParams& p) {
  if (!ctx.config.kraus_cache.empty()) return load_or_build_kraus(ctx.config.kraus_cache, p, ctx.config.workers);
  return build_kraus_fast(p, ctx.config.workers);
}

}  // namespace

int run_simulate(RunContext& ctx) {
  const auto& cfg = ctx.config;
  if (cfg.steps < 1) throw InvalidArgument("--T must be >= 1");
  if (cfg.trajectories < 1) throw InvalidArgument("--trajectories must be >= 1");
  if (cfg.format != "csv" && cfg.format != "binary") throw InvalidArgument("--format must be csv or binary");
  if (cfg.sampler != "sequential" && cfg.sampler != "enumerated") {
    throw InvalidArgument("--sampler must be sequential or enumerated");
  }
  const auto mode = record_mode_from_string(cfg.mode);
  if (mode != RecordMode::Reset && cfg.sampler == "enumerated") {
    throw InvalidArgument("the enumerated sampler only supports --mode reset");
  }
  const auto offsets = parse_offsets(cfg.offsets);
  const auto kf = kraus_for(ctx, cfg.params);
  if (mode != RecordMode::Reset && !kf.blocks) throw InvalidArgument("reset-free sampling needs collision blocks");
  const auto psi0 = PureState::basis_state(cfg.params.sites, static_cast<BasisIndex>(cfg.initial));

  const auto n = static_cast<std::size_t>(cfg.trajectories);
  std::vector<std::string> names(n);
  for (std::size_t i = 0; i < n; ++i) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "trajectory_%04zu.%s", i, cfg.format == "csv" ? "csv" : "bin");
    names[i] = buf;
  }
  std::vector<TimeIntegrals> integrals(n);
  std::vector<EstimatorErrors> errors(n);

  parallel_for(n, cfg.workers, [&](std::size_t i) {
    TrajectoryRecord rec;
    if (mode == RecordMode::Reset) {
      rec = cfg.sampler == "enumerated"
                ? sample_trajectory_enumerated(kf, psi0, cfg.steps, cfg.seed, cfg.occupations, i)
                : sample_trajectory(kf, psi0, cfg.steps, cfg.seed, cfg.occupations, i);
    } else {
      rec = sample_trajectory_reset_free(*kf.blocks, psi0, cfg.steps, cfg.seed, cfg.occupations, i);
      if (mode == RecordMode::ResetFreePostprocessed) rec = postprocess_reset_free(rec);
    }
    std::ofstream out(ctx.dir / names[i], std::ios::binary);
    if (!out) throw ResourceError("cannot write " + (ctx.dir / names[i]).string());
    if (cfg.format == "csv") {
      write_trajectory_csv(rec, out);
    } else {
      write_trajectory_binary(rec, out);
    }
    integrals[i] = trajectory_time_integrals(rec, offsets);
    errors[i] = cfg.steps >= 20 ? estimator_standard_errors(rec, offsets)
                                : EstimatorErrors{kNaN, std::vector<double>(offsets.size(), kNaN)};
  });
  for (const auto& name : names) ctx.outputs.push_back(name);

  auto out = ctx.open("estimators.csv");
  schema(out, "rydcoll-estimators/1", cfg.params);
  out << "trajectory,seed,stream,T,activity" << offset_header(offsets) << ",se_activity"
      << offset_header(offsets, "se_") << "\n";
  for (std::size_t i = 0; i < n; ++i) {
    out << i << "," << cfg.seed << "," << i << "," << cfg.steps << "," << integrals[i].activity_estimator;
    for (const auto& c : integrals[i].correlations) out << "," << c.estimator;
    out << "," << errors[i].activity;
    for (double e : errors[i].correlations) out << "," << e;
    out << "\n";
  }
  return kOk;
}

int run_ensemble(RunContext& ctx) {
  const auto& cfg = ctx.config;
  if (cfg.steps < 1) throw InvalidArgument("--T must be >= 1");
  const auto offsets = parse_offsets(cfg.offsets);
  const auto kf = kraus_for(ctx, cfg.params);
  const int L = cfg.params.sites;
  const auto rho0 = DensityMatrix::basis_state(L, static_cast<BasisIndex>(cfg.initial));
  const auto series = transient_series(kf, rho0, cfg.steps, offsets);

  {
    auto out = ctx.open("transient.csv");
    schema(out, "rydcoll-transient/1", cfg.params);
    out << "t,activity" << offset_header(offsets) << "\n";
    for (std::size_t k = 0; k < series.times.size(); ++k) {
      const int t = series.times[k];
      out << t << "," << series.activity[k];
      for (const auto& c : series.correlations) {
        const int first = c.times.empty() ? t + 1 : c.times.front();
        out << ",";
        if (t >= first) out << c.values[static_cast<std::size_t>(t - first)];
      }
      out << "\n";
    }
  }
  {
    auto out = ctx.open("stationary.csv");
    schema(out, "rydcoll-stationary/1", cfg.params);
    out << "state,activity" << offset_header(offsets) << "\n";
    auto row = [&](const char* name, const std::map<std::string, double>& v) {
      out << name << "," << v.at("activity");
      for (const auto& o : offsets) out << "," << v.at(o.label());
      out << "\n";
    };
    row("mixed", series.stationary_values);
    if (L >= 2) row("pxp", pxp_sector_prediction(kf, offsets));
  }

  const auto s_values = parse_range(cfg.s_range);
  auto out = ctx.open("s_ensemble.csv");
  schema(out, "rydcoll-s-ensemble/1", cfg.params);
  out << "s,activity" << offset_header(offsets) << ",lambda,iterations,converged\n";
  TiltedSolution warm;
  bool have_warm = false;
  for (double s : s_values) {
    TiltedSolution sol;
    try {
      const auto v = s_ensemble_order_parameters(kf, s, offsets, {}, &sol, have_warm ? &warm : nullptr);
      out << s << "," << v.activity;
      for (double c : v.correlations) out << "," << c;
      out << "," << v.lambda << "," << v.iterations << "," << (v.converged ? "true" : "false") << "\n";
      warm = std::move(sol);
      have_warm = true;
    } catch (const ConvergenceError& e) {
      std::cerr << "s=" << s << ": " << e.what() << "\n";
      ++ctx.flagged_rows;
      out << s << ",nan";
      for (std::size_t j = 0; j < offsets.size(); ++j) out << ",nan";
      out << ",nan,0,false\n";
    }
  }
  return kOk;
}

int run_phase_diagram(RunContext& ctx) {
  const auto& cfg = ctx.config;
  PhaseDiagramGrid grid;
  grid.v_values = parse_range(cfg.v_range);
  grid.s_values = parse_range(cfg.s_range);
  const auto rows = phase_diagram_sweep(cfg.params, grid, {}, cfg.workers);
  auto out = ctx.open("phase_diagram.csv");
  schema(out, "rydcoll-phase-diagram/1", cfg.params);
  out << "V,s,activity,c_0_1,lambda,iterations,converged\n";
  for (const auto& r : rows) {
    if (!r.converged) ++ctx.flagged_rows;
    out << r.v << "," << r.s << "," << r.activity << "," << r.c_0_1 << "," << r.lambda << "," << r.iterations << ","
        << (r.converged ? "true" : "false") << "\n";
  }
  return kOk;
}

int run_lindblad(RunContext& ctx) {
  const auto& cfg = ctx.config;
  const auto model = LindbladModel::from_params(cfg.params);
  const int L = cfg.params.sites;

  const auto s_values = parse_range(cfg.s_range);
  std::vector<ScgfResult> scan(s_values.size());
  parallel_for(s_values.size(), cfg.workers,
               [&](std::size_t i) { scan[i] = tilted_lindblad_scgf(model, s_values[i]); });
  {
    auto out = ctx.open("scgf.csv");
    schema(out, "rydcoll-scgf/1", cfg.params);
    out << "s,theta,activity\n";
    for (const auto& r : scan) {
      if (!r.converged) ++ctx.flagged_rows;
      out << r.s << "," << r.theta << "," << r.activity / L << "\n";
    }
  }

  if (cfg.trajectories > 0 && cfg.t_max > 0.0) {
    Vector psi0 = Vector::Zero(static_cast<Eigen::Index>(model.dim()));
    psi0(static_cast<Eigen::Index>(cfg.initial)) = 1.0;
    JumpOptions jo;
    jo.micro_dt = cfg.micro_dt;
    jo.sample_interval = cfg.sample_interval;
    const auto n = static_cast<std::size_t>(cfg.trajectories);
    std::vector<JumpTrajectory> runs(n);
    parallel_for(n, cfg.workers, [&](std::size_t i) {
      runs[i] = quantum_jump_trajectory(model, psi0, cfg.t_max, cfg.seed, jo, i);
    });
    for (std::size_t i = 0; i < n; ++i) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "events_%04zu.csv", i);
      auto ev = ctx.open(buf);
      schema(ev, "rydcoll-events/1", cfg.params);
      ev << "time,site\n";
      for (const auto& e : runs[i].events) ev << e.time << "," << e.site << "\n";
      std::snprintf(buf, sizeof buf, "occupations_%04zu.csv", i);
      auto occ = ctx.open(buf);
      schema(occ, "rydcoll-occupations/1", cfg.params);
      occ << "time,site,occupation\n";
      for (std::size_t k = 0; k < runs[i].sample_times.size(); ++k) {
        for (int site = 0; site < L; ++site) {
          occ << runs[i].sample_times[k] << "," << site << "," << runs[i].occupations[k][site] << "\n";
        }
      }
    }
  }

  if (!cfg.collision_dt.empty()) {
    const auto report = collision_limit_check(cfg.params, cfg.collision_dt);
    auto out = ctx.open("collision_limit.csv");
    schema(out, "rydcoll-collision-limit/1", cfg.params);
    out << "dt,distance,ratio\n";
    for (const auto& r : report.rows) out << r.dt << "," << r.distance << "," << r.ratio << "\n";
    std::cout << "collision limit: observed order " << report.observed_order << ", ratio test "
              << (report.ratio_test_passed ? "passed" : "failed") << "\n";
  }
  return kOk;
}

int run_singlebody(RunContext& ctx) {
  const auto& cfg = ctx.config;
  ModelParams base = cfg.params;
  base.sites = 1;
  base.v = 0.0;
  const SpaceTimeOffset offset{0, 1};
  const std::span<const SpaceTimeOffset> offsets(&offset, 1);

  const auto a_values = parse_range(cfg.a_range);
  const auto b_values = parse_range(cfg.b_range);
  struct Cell {
    double a, b, activity, c, activity_numeric, c_numeric;
  };
  std::vector<Cell> cells(a_values.size() * b_values.size());
  parallel_for(cells.size(), cfg.workers, [&](std::size_t idx) {
    const double a = a_values[idx / b_values.size()];
    const double b = b_values[idx % b_values.size()];
    ModelParams p;
    p.sites = 1;
    p.dt = 1.0;
    p.omega = a;
    p.gamma = b * b;
    const auto kf = build_kraus_fast(p);
    const auto v = stationary_values(kf, DensityMatrix::maximally_mixed(1), offsets);
    const SingleBodyParams sb{a, b};
    cells[idx] = {a, b, analytic_activity(sb), analytic_correlation(sb), v.at("activity"), v.at("c_0_1")};
  });
  {
    auto out = ctx.open("singlebody.csv");
    out << "# schema: rydcoll-singlebody/1\n";
    out << "a,b,activity,c_0_1,activity_numeric,c_0_1_numeric\n";
    for (const auto& c : cells) {
      out << c.a << "," << c.b << "," << c.activity << "," << c.c << "," << c.activity_numeric << ","
          << c.c_numeric << "\n";
    }
  }

  if (!cfg.detuning_range.empty()) {
    const auto detunings = parse_range(cfg.detuning_range);
    const auto s_values = parse_range(cfg.s_range);
    std::vector<std::vector<DetuningScanRow>> blocks(detunings.size());
    parallel_for(detunings.size(), cfg.workers, [&](std::size_t i) {
      blocks[i] = detuning_phase_scan(base, std::span<const double>(&detunings[i], 1), s_values);
    });
    auto out = ctx.open("detuning_scan.csv");
    schema(out, "rydcoll-detuning-scan/1", base);
    out << "detuning,s,activity,c_0_1,lambda,converged\n";
    for (const auto& rows : blocks) {
      for (const auto& r : rows) {
        if (!r.converged) ++ctx.flagged_rows;
        out << r.detuning << "," << r.s << "," << r.activity << "," << r.c_0_1 << "," << r.lambda << ","
            << (r.converged ? "true" : "false") << "\n";
      }
    }
  }
  return kOk;
}

int run_validate(RunContext& ctx) {
  const auto& cfg = ctx.config;
  const int max_sites = std::min(cfg.params.sites, 6);
  struct Check {
    std::string name;
    double value;
    double tol;
  };
  std::vector<Check> checks;
  auto params_at = [&](int L) {
    ModelParams p = cfg.params;
    p.sites = L;
    return p;
  };

  for (int L = 1; L <= max_sites; ++L) {
    const auto kf = build_kraus_fast(params_at(L), cfg.workers);
    const std::string tag = " L=" + std::to_string(L);
    checks.push_back({"completeness" + tag, completeness_residual(kf.ops), 1e-10});
    checks.push_back({"unitality" + tag, unitality_residual(kf.ops), 1e-10});
    const auto mixed = DensityMatrix::maximally_mixed(L);
    checks.push_back({"mixed stationary" + tag, max_abs(apply_channel(kf, mixed).data - mixed.data), 1e-10});
    const auto eig = dominant_eigenpair(kf, 0.0);
    checks.push_back({"lambda(0)" + tag, std::abs(eig.lambda - 1.0), 1e-12});
    const auto biased = build_biased_kraus(kf, 0.0, eig);
    double doob = 0.0;
    for (std::size_t k = 0; k < kf.outcomes(); ++k) doob = std::max(doob, max_abs(biased.family.ops[k] - kf.ops[k]));
    checks.push_back({"biased(0) = K" + tag, doob, 1e-12});
    if (L <= 3) {
      const auto dense = build_kraus_dense(params_at(L));
      double diff = 0.0;
      for (std::size_t k = 0; k < kf.outcomes(); ++k) diff = std::max(diff, max_abs(kf.ops[k] - dense.ops[k]));
      checks.push_back({"fast vs dense" + tag, diff, 1e-10});
    }
  }

  const SpaceTimeOffset offset{0, 1};
  const auto one = params_at(1);
  const auto kf1 = build_kraus_fast(one);
  const auto sb = SingleBodyParams::from_model(one);
  const auto mixed1 = DensityMatrix::maximally_mixed(1);
  checks.push_back(
      {"single-body activity", std::abs(ensemble_activity(kf1, mixed1) - analytic_activity(sb)), 1e-10});
  checks.push_back({"single-body c_0_1",
                    std::abs(ensemble_correlation(kf1, mixed1, offset) - analytic_correlation(sb)), 1e-10});

  std::size_t width = 0;
  for (const auto& c : checks) width = std::max(width, c.name.size());
  int failures = 0;
  auto out = ctx.open("validate.csv");
  schema(out, "rydcoll-validate/1", cfg.params);
  out << "check,value,tolerance,pass\n";
  std::cout << std::left << std::setw(static_cast<int>(width)) << "check" << "  " << std::setw(12) << "value"
            << std::setw(10) << "tol" << "result\n";
  for (const auto& c : checks) {
    const bool pass = c.value <= c.tol;
    failures += pass ? 0 : 1;
    std::cout << std::left << std::setw(static_cast<int>(width)) << c.name << "  " << std::setw(12)
              << std::setprecision(3) << std::scientific << c.value << std::setw(10) << c.tol
              << (pass ? "PASS" : "FAIL") << "\n"
              << std::defaultfloat;
    out << c.name << "," << c.value << "," << c.tol << "," << (pass ? "true" : "false") << "\n";
  }
  std::cout << (failures == 0 ? "all checks passed" : std::to_string(failures) + " check(s) failed") << "\n";
  return failures == 0 ? kOk : kValidationFailed;
}

}  // namespace rydcoll::cli
