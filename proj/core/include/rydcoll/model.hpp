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

#include <utility>
#include <vector>

#include "rydcoll/params.hpp"
#include "rydcoll/types.hpp"

namespace rydcoll {

enum class OperatorRole {
  SystemHamiltonian,
  CollisionBlock,
  SiteProjector,
  Occupation,
  SigmaX,
  PxpHamiltonian,
  PxpProjector,
};

struct SystemOperator {
  Matrix data;
  OperatorRole role;
  int sites = 0;

  std::size_t dim() const { return static_cast<std::size_t>(data.rows()); }
};

/// Ancilla sign string m in the tau^x eigenbasis. Bit set for site i means
/// m_i = -1; the bit layout follows BasisIndex.
struct SignString {
  BasisIndex bits = 0;

  int sign(int site, int sites) const { return site_bit(bits, site, sites) ? -1 : 1; }
};

/// Interaction bonds (i, i+1). Under pbc the last bond wraps; at L=2 this
/// yields both (0,1) and (1,0). A single site has no bonds.
std::vector<std::pair<int, int>> interaction_bonds(int sites, bool pbc);

SystemOperator site_projector(int sites, int site);
SystemOperator occupation(int sites, int site);
SystemOperator sigma_x(int sites, int site);

/// H_S = omega sum sigma^x_i + V sum n_i n_{i+1} + delta sum n_i.
SystemOperator build_system_hamiltonian(const ModelParams& params, int max_sites = kMaxSites);

/// H_m = H_S + sqrt(gamma/dt) sum_i m_i P_i, the block of the collision
/// Hamiltonian on the ancilla eigenstate |m> of all tau^x_i.
SystemOperator build_collision_block(const ModelParams& params, SignString m);

/// Same as above with H_S already built.
Matrix collision_block_from(const Matrix& system_hamiltonian, const ModelParams& params, SignString m);

bool is_blockade_free(BasisIndex state, int sites, bool pbc);

/// Diagonal projector onto states without adjacent excitations.
SystemOperator build_pxp_projector(int sites, bool pbc);

/// sum_i P_{i-1} sigma^x_i P_{i+1}; open chains drop the missing neighbour.
SystemOperator build_pxp_hamiltonian(int sites, bool pbc);

/// max |A - A^dagger|
double hermiticity_residual(const Matrix& a);

}  // namespace rydcoll
