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

#include <cmath>
#include <cstddef>
#include <string>

#include "rydcoll/types.hpp"

namespace rydcoll {

/// Physical and numerical parameters of the collision model. Energies are in
/// units of the Rabi frequency, times in units of its inverse.
struct ModelParams {
  int sites = 1;        ///< chain length L
  double omega = 1.0;   ///< Rabi frequency
  double v = 0.0;       ///< nearest-neighbour interaction strength
  double gamma = 0.0;   ///< dephasing rate of the continuous-time limit
  double dt = 1.0;      ///< collision time
  double delta = 0.0;   ///< static detuning of |1>
  bool pbc = true;

  std::size_t dim() const { return hilbert_dim(sites); }
  std::size_t outcomes() const { return hilbert_dim(sites); }

  /// Strength of the system-ancilla coupling, sqrt(gamma / dt).
  double coupling() const { return std::sqrt(gamma / dt); }

  /// Throws InvalidArgument if any invariant is violated.
  void validate() const;

  std::string describe() const;

  bool operator==(const ModelParams&) const = default;

  /// Parameters used for the L=6 trajectory figures: dt = 1.25, V = 5.875,
  /// gamma = 3 (all in units of omega).
  static ModelParams reference(int sites);
};

/// Throws ResourceError when `sites` exceeds `cap`.
void require_sites_within(int sites, int cap, const std::string& what);

}  // namespace rydcoll
