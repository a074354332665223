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

#include "config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "rydcoll/error.hpp"

namespace rydcoll::cli {

using nlohmann::json;

json to_json(const RunConfig& c) {
  const auto& p = c.params;
  return json{
      {"command", c.command},
      {"L", p.sites},
      {"omega", p.omega},
      {"V", p.v},
      {"gamma", p.gamma},
      {"dt", p.dt},
      {"delta", p.delta},
      {"pbc", p.pbc},
      {"T", c.steps},
      {"trajectories", c.trajectories},
      {"seed", c.seed},
      {"mode", c.mode},
      {"sampler", c.sampler},
      {"format", c.format},
      {"occupations", c.occupations},
      {"initial", c.initial},
      {"offsets", c.offsets},
      {"V_range", c.v_range},
      {"s", c.s_range},
      {"a", c.a_range},
      {"b", c.b_range},
      {"detuning", c.detuning_range},
      {"t_max", c.t_max},
      {"micro_dt", c.micro_dt},
      {"sample_interval", c.sample_interval},
      {"collision_dt", c.collision_dt},
      {"out", c.out},
      {"kraus_cache", c.kraus_cache},
      {"workers", c.workers},
      {"strict", c.strict},
  };
}

namespace {

template <class T>
void take(const json& j, const char* key, T& into) {
  if (!j.contains(key)) return;
  try {
    into = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("config key '") + key + "': " + e.what());
  }
}

}  // namespace

void merge_json(RunConfig& c, const json& root) {
  if (!root.is_object()) throw InvalidArgument("config must be a JSON object");
  const json& j = root.contains("config") && root.at("config").is_object() ? root.at("config") : root;
  static const std::set<std::string> known = {
      "command", "L", "omega", "V", "gamma", "dt", "delta", "pbc", "T", "trajectories", "seed", "mode",
      "sampler", "format", "occupations", "initial", "offsets", "V_range", "s", "a", "b", "detuning", "t_max",
      "micro_dt", "sample_interval", "collision_dt", "out", "kraus_cache", "workers", "strict"};
  for (const auto& item : j.items()) {
    if (!known.contains(item.key())) throw InvalidArgument("unknown config key '" + item.key() + "'");
  }
  auto& p = c.params;
  take(j, "L", p.sites);
  take(j, "omega", p.omega);
  take(j, "V", p.v);
  take(j, "gamma", p.gamma);
  take(j, "dt", p.dt);
  take(j, "delta", p.delta);
  take(j, "pbc", p.pbc);
  take(j, "T", c.steps);
  take(j, "trajectories", c.trajectories);
  take(j, "seed", c.seed);
  take(j, "mode", c.mode);
  take(j, "sampler", c.sampler);
  take(j, "format", c.format);
  take(j, "occupations", c.occupations);
  take(j, "initial", c.initial);
  take(j, "offsets", c.offsets);
  take(j, "V_range", c.v_range);
  take(j, "s", c.s_range);
  take(j, "a", c.a_range);
  take(j, "b", c.b_range);
  take(j, "detuning", c.detuning_range);
  take(j, "t_max", c.t_max);
  take(j, "micro_dt", c.micro_dt);
  take(j, "sample_interval", c.sample_interval);
  take(j, "collision_dt", c.collision_dt);
  take(j, "out", c.out);
  take(j, "kraus_cache", c.kraus_cache);
  take(j, "workers", c.workers);
  take(j, "strict", c.strict);
}

void load_config_file(RunConfig& config, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidArgument("config file " + path.string() + ": " + e.what());
  }
  merge_json(config, j);
}

std::vector<double> parse_range(const std::string& text) {
  auto number = [&](const std::string& part) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != part.size() || !std::isfinite(v)) {
      throw InvalidArgument("bad range '" + text + "' (expected start:stop:count or a number)");
    }
    return v;
  };
  const auto first = text.find(':');
  if (first == std::string::npos) return {number(text)};
  const auto second = text.find(':', first + 1);
  if (second == std::string::npos) throw InvalidArgument("bad range '" + text + "' (expected start:stop:count)");
  const double start = number(text.substr(0, first));
  const double stop = number(text.substr(first + 1, second - first - 1));
  const double count_d = number(text.substr(second + 1));
  if (count_d < 1 || count_d != std::floor(count_d)) {
    throw InvalidArgument("bad range '" + text + "': count must be a positive integer");
  }
  const auto count = static_cast<int>(count_d);
  if (count == 1) {
    if (start != stop) throw InvalidArgument("bad range '" + text + "': count 1 needs start == stop");
    return {start};
  }
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) out[i] = start + (stop - start) * i / (count - 1);
  out.back() = stop;
  return out;
}

}  // namespace rydcoll::cli
