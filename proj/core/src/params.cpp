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

#include "rydcoll/params.hpp"

#include <sstream>

#include "rydcoll/error.hpp"

namespace rydcoll {

void ModelParams::validate() const {
  if (sites < 1) {
    throw InvalidArgument("ModelParams: sites must be >= 1, got " + std::to_string(sites));
  }
  const double values[] = {omega, v, gamma, dt, delta};
  for (double x : values) {
    if (!std::isfinite(x)) throw InvalidArgument("ModelParams: parameters must be finite");
  }
  if (!(dt > 0.0)) throw InvalidArgument("ModelParams: dt must be > 0");
  if (gamma < 0.0) throw InvalidArgument("ModelParams: gamma must be >= 0");
}

std::string ModelParams::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "L=" << sites << " omega=" << omega << " V=" << v << " gamma=" << gamma << " dt=" << dt
     << " delta=" << delta << " pbc=" << (pbc ? 1 : 0);
  return os.str();
}

ModelParams ModelParams::reference(int sites) {
  ModelParams p;
  p.sites = sites;
  p.omega = 1.0;
  p.v = 5.875;
  p.gamma = 3.0;
  p.dt = 1.25;
  return p;
}

void require_sites_within(int sites, int cap, const std::string& what) {
  if (sites > cap) {
    throw ResourceError(what + ": L=" + std::to_string(sites) + " exceeds the cap L<=" + std::to_string(cap));
  }
}

}  // namespace rydcoll
