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
#include <string>
#include <vector>

#include "json.hpp"
#include "rydcoll/params.hpp"

namespace rydcoll::cli {

/// Everything a run needs; echoed verbatim into manifest.json.
struct RunConfig {
  std::string command;
  ModelParams params = ModelParams::reference(6);

  int steps = 2000;
  int trajectories = 10;
  std::uint64_t seed = 1;
  std::string mode = "reset";
  std::string sampler = "sequential";
  std::string format = "csv";
  bool occupations = false;
  std::uint64_t initial = 0;
  std::vector<std::string> offsets = {"0:1", "1:0"};

  std::string v_range = "0:10:41";
  std::string s_range = "-0.5:0.5:41";
  std::string a_range = "0.1:3:10";
  std::string b_range = "0.1:3:10";
  std::string detuning_range;

  double t_max = 100.0;
  double micro_dt = 0.005;
  double sample_interval = 0.1;
  std::vector<double> collision_dt;

  std::string out = "out";
  std::string kraus_cache;
  int workers = 1;
  bool strict = false;
};

nlohmann::json to_json(const RunConfig& config);

/// Accepts either a bare config object or a manifest (uses its "config").
/// Unknown keys are rejected with InvalidArgument.
void merge_json(RunConfig& config, const nlohmann::json& j);
void load_config_file(RunConfig& config, const std::filesystem::path& path);

/// "start:stop:count" (inclusive) or a single number.
std::vector<double> parse_range(const std::string& text);

}  // namespace rydcoll::cli
