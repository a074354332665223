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

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "config.hpp"
#include "rydcoll/error.hpp"
#include "rydcoll/parallel.hpp"
#include "rydcoll/version.hpp"

using namespace rydcoll;
using namespace rydcoll::cli;

namespace {

const char* kUnits =
    "Energies and rates are in units of the Rabi frequency omega, times in units of 1/omega.\n"
    "Ranges are start:stop:count with both endpoints included, or a single number.";

void add_model_options(CLI::App* sub, RunConfig& c, bool v_is_range) {
  sub->add_option("--config", "JSON config file (flags given on the command line override it)");
  sub->add_option("--L", c.params.sites, "number of sites")->capture_default_str();
  sub->add_option("--omega", c.params.omega, "Rabi frequency")->capture_default_str();
  if (v_is_range) {
    sub->add_option("--V", c.v_range, "interaction strength range")->capture_default_str();
  } else {
    sub->add_option("--V", c.params.v, "nearest-neighbour interaction")->capture_default_str();
  }
  sub->add_option("--gamma", c.params.gamma, "dephasing rate of the continuum limit")->capture_default_str();
  sub->add_option("--dt", c.params.dt, "collision time")->capture_default_str();
  sub->add_option("--delta", c.params.delta, "static detuning")->capture_default_str();
  sub->add_option("--pbc", c.params.pbc, "periodic boundaries (true/false)")->capture_default_str();
  sub->add_option("--seed", c.seed, "base seed; trajectory i uses stream i")->capture_default_str();
  sub->add_option("--workers", c.workers, "worker threads (default: RYDCOLL_WORKERS or all cores)")
      ->capture_default_str();
  sub->add_option("--out", c.out, "output directory")->capture_default_str();
  sub->add_option("--kraus-cache", c.kraus_cache, "directory for cached Kraus families");
  sub->add_flag("--strict", c.strict, "exit 4 if any row is flagged as unconverged");
  sub->footer(kUnits);
}

void add_offsets(CLI::App* sub, RunConfig& c) {
  sub->add_option("--offsets", c.offsets, "space-time offsets di:dt for correlations")->capture_default_str();
}

// Loads --config before CLI11 binds defaults so that explicit flags win.
void prescan_config(int argc, char** argv, RunConfig& c) {
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) {
      load_config_file(c, argv[i + 1]);
    } else if (arg.rfind("--config=", 0) == 0) {
      load_config_file(c, arg.substr(9));
    }
  }
}

void write_manifest(const RunContext& ctx, int exit_code, double seconds) {
  nlohmann::json m;
  m["command"] = ctx.config.command;
  m["version"] = kVersion;
  m["config"] = to_json(ctx.config);
  m["seed"] = ctx.config.seed;
  m["workers"] = ctx.config.workers;
  m["wall_time_s"] = seconds;
  m["outputs"] = ctx.outputs;
  m["flagged_rows"] = ctx.flagged_rows;
  m["exit_code"] = exit_code;
  std::ofstream out(ctx.dir / "manifest.json");
  out << m.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig config;
  config.workers = default_worker_count();
  try {
    prescan_config(argc, argv, config);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }

  CLI::App app{"rydcoll: discrete-time Rydberg collision model"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.footer(kUnits);

  auto* simulate = app.add_subcommand("simulate", "sample measurement records");
  add_model_options(simulate, config, false);
  simulate->add_option("--T", config.steps, "collisions per trajectory")->capture_default_str();
  simulate->add_option("--trajectories", config.trajectories, "number of trajectories")->capture_default_str();
  simulate->add_option("--mode", config.mode, "reset | reset-free | reset-free-postprocessed")
      ->capture_default_str();
  simulate->add_option("--sampler", config.sampler, "sequential | enumerated")->capture_default_str();
  simulate->add_option("--format", config.format, "csv | binary")->capture_default_str();
  simulate->add_flag("--occupations", config.occupations, "record <n_i> after every collision");
  simulate->add_option("--initial", config.initial, "initial basis state index")->capture_default_str();
  add_offsets(simulate, config);

  auto* ensemble = app.add_subcommand("ensemble", "ensemble order parameters and s-ensemble values");
  add_model_options(ensemble, config, false);
  ensemble->add_option("--T", config.steps, "transient length")->capture_default_str();
  ensemble->add_option("--initial", config.initial, "initial basis state index")->capture_default_str();
  ensemble->add_option("--s", config.s_range, "counting-field values")->capture_default_str();
  add_offsets(ensemble, config);

  auto* phase = app.add_subcommand("phase-diagram", "s-ensemble correlations over a (V, s) grid");
  add_model_options(phase, config, true);
  phase->add_option("--s", config.s_range, "counting-field range")->capture_default_str();

  auto* lindblad = app.add_subcommand("lindblad", "continuous-time limit: SCGF scan and jump trajectories");
  add_model_options(lindblad, config, false);
  lindblad->add_option("--s", config.s_range, "counting-field range")->capture_default_str();
  lindblad->add_option("--trajectories", config.trajectories, "jump trajectories (0 to skip)")
      ->capture_default_str();
  lindblad->add_option("--t-max", config.t_max, "trajectory length")->capture_default_str();
  lindblad->add_option("--micro-dt", config.micro_dt, "no-jump integration step")->capture_default_str();
  lindblad->add_option("--sample-interval", config.sample_interval, "occupation sampling interval")
      ->capture_default_str();
  lindblad->add_option("--collision-dt", config.collision_dt, "decreasing dt list for the collision-limit check");
  lindblad->add_option("--initial", config.initial, "initial basis state index")->capture_default_str();

  auto* single = app.add_subcommand("singlebody", "single-qubit closed forms and detuning scan");
  add_model_options(single, config, false);
  single->add_option("--a", config.a_range, "omega*dt range")->capture_default_str();
  single->add_option("--b", config.b_range, "sqrt(gamma*dt) range")->capture_default_str();
  single->add_option("--detuning", config.detuning_range, "detuning range for the s-ensemble scan");
  single->add_option("--s", config.s_range, "counting-field range for the detuning scan")->capture_default_str();

  auto* validate = app.add_subcommand("validate", "run the invariant suite and print a pass/fail table");
  add_model_options(validate, config, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  RunContext ctx;
  ctx.config = config;
  ctx.config.command = app.get_subcommands().front()->get_name();
  ctx.dir = ctx.config.out;
  const auto start = std::chrono::steady_clock::now();
  int code = kOk;
  try {
    if (ctx.config.workers < 1) throw InvalidArgument("--workers must be >= 1");
    ctx.config.params.validate();
    std::filesystem::create_directories(ctx.dir);
    const auto& cmd = ctx.config.command;
    if (cmd == "simulate") {
      code = run_simulate(ctx);
    } else if (cmd == "ensemble") {
      code = run_ensemble(ctx);
    } else if (cmd == "phase-diagram") {
      code = run_phase_diagram(ctx);
    } else if (cmd == "lindblad") {
      code = run_lindblad(ctx);
    } else if (cmd == "singlebody") {
      code = run_singlebody(ctx);
    } else {
      code = run_validate(ctx);
    }
    if (ctx.flagged_rows > 0) {
      std::cerr << ctx.flagged_rows << " row(s) flagged as unconverged\n";
      if (ctx.config.strict && code == kOk) code = kConvergence;
    }
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ResourceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ConvergenceError& e) {
    std::cerr << "convergence failure: " << e.what() << "\n";
    code = kConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    code = 1;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (std::filesystem::is_directory(ctx.dir)) write_manifest(ctx, code, seconds);
  return code;
}
