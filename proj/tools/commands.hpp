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

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "config.hpp"

namespace rydcoll::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kValidationFailed = 3, kConvergence = 4 };

struct RunContext {
  RunConfig config;
  std::filesystem::path dir;
  std::vector<std::string> outputs;
  long flagged_rows = 0;

  std::ofstream open(const std::string& name);
};

int run_simulate(RunContext& ctx);
int run_ensemble(RunContext& ctx);
int run_phase_diagram(RunContext& ctx);
int run_lindblad(RunContext& ctx);
int run_singlebody(RunContext& ctx);
int run_validate(RunContext& ctx);

}  // namespace rydcoll::cli
