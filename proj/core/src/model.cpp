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

#include "rydcoll/model.hpp"

#include "rydcoll/error.hpp"
#include "rydcoll/linalg.hpp"

namespace rydcoll {

namespace {

void require_site(int sites, int site) {
  if (sites < 1 || site < 0 || site >= sites) {
    throw InvalidArgument("site index " + std::to_string(site) + " out of range for L=" + std::to_string(sites));
  }
}

SystemOperator diagonal_operator(int sites, OperatorRole role, auto&& value) {
  const auto n = hilbert_dim(sites);
  Matrix m = Matrix::Zero(n, n);
  for (BasisIndex x = 0; x < n; ++x) m(x, x) = value(x);
  return {std::move(m), role, sites};
}

}  // namespace

std::vector<std::pair<int, int>> interaction_bonds(int sites, bool pbc) {
  std::vector<std::pair<int, int>> bonds;
  if (sites < 2) return bonds;
  for (int i = 0; i < sites; ++i) {
    if (i + 1 < sites) {
      bonds.emplace_back(i, i + 1);
    } else if (pbc) {
      bonds.emplace_back(i, 0);
    }
  }
  return bonds;
}

SystemOperator site_projector(int sites, int site) {
  require_site(sites, site);
  return diagonal_operator(sites, OperatorRole::SiteProjector,
                           [&](BasisIndex x) { return 1.0 - site_bit(x, site, sites); });
}

SystemOperator occupation(int sites, int site) {
  require_site(sites, site);
  return diagonal_operator(sites, OperatorRole::Occupation,
                           [&](BasisIndex x) { return double(site_bit(x, site, sites)); });
}

SystemOperator sigma_x(int sites, int site) {
  require_site(sites, site);
  const auto n = hilbert_dim(sites);
  Matrix m = Matrix::Zero(n, n);
  for (BasisIndex x = 0; x < n; ++x) m(x ^ site_mask(site, sites), x) = 1.0;
  return {std::move(m), OperatorRole::SigmaX, sites};
}

SystemOperator build_system_hamiltonian(const ModelParams& params, int max_sites) {
  params.validate();
  require_sites_within(params.sites, max_sites, "system Hamiltonian");
  const int L = params.sites;
  const auto n = params.dim();
  const auto bonds = interaction_bonds(L, params.pbc);

  Matrix h = Matrix::Zero(n, n);
  for (BasisIndex x = 0; x < n; ++x) {
    double diag = 0.0;
    for (auto [i, j] : bonds) diag += params.v * (site_bit(x, i, L) & site_bit(x, j, L));
    for (int i = 0; i < L; ++i) {
      diag += params.delta * site_bit(x, i, L);
      h(x ^ site_mask(i, L), x) += params.omega;
    }
    h(x, x) += diag;
  }
  return {std::move(h), OperatorRole::SystemHamiltonian, L};
}

Matrix collision_block_from(const Matrix& system_hamiltonian, const ModelParams& params, SignString m) {
  const int L = params.sites;
  const double g = params.coupling();
  Matrix h = system_hamiltonian;
  for (BasisIndex x = 0; x < params.dim(); ++x) {
    double shift = 0.0;
    for (int i = 0; i < L; ++i) {
      if (!site_bit(x, i, L)) shift += m.sign(i, L);
    }
    h(x, x) += g * shift;
  }
  return h;
}

SystemOperator build_collision_block(const ModelParams& params, SignString m) {
  if (m.bits >= params.outcomes()) throw InvalidArgument("sign string longer than the chain");
  const auto hs = build_system_hamiltonian(params);
  return {collision_block_from(hs.data, params, m), OperatorRole::CollisionBlock, params.sites};
}

bool is_blockade_free(BasisIndex state, int sites, bool pbc) {
  for (auto [i, j] : interaction_bonds(sites, pbc)) {
    if (site_bit(state, i, sites) && site_bit(state, j, sites)) return false;
  }
  return true;
}

SystemOperator build_pxp_projector(int sites, bool pbc) {
  if (sites < 2) throw InvalidArgument("PXP projector needs L >= 2");
  require_sites_within(sites, kMaxSites, "PXP projector");
  return diagonal_operator(sites, OperatorRole::PxpProjector,
                           [&](BasisIndex x) { return is_blockade_free(x, sites, pbc) ? 1.0 : 0.0; });
}

SystemOperator build_pxp_hamiltonian(int sites, bool pbc) {
  if (sites < 2) throw InvalidArgument("PXP Hamiltonian needs L >= 2");
  require_sites_within(sites, kMaxSites, "PXP Hamiltonian");
  const auto n = hilbert_dim(sites);
  Matrix h = Matrix::Zero(n, n);
  for (BasisIndex x = 0; x < n; ++x) {
    for (int i = 0; i < sites; ++i) {
      const int left = i - 1;
      const int right = i + 1;
      bool allowed = true;
      if (left >= 0) {
        allowed &= site_bit(x, left, sites) == 0;
      } else if (pbc) {
        allowed &= site_bit(x, sites - 1, sites) == 0;
      }
      if (right < sites) {
        allowed &= site_bit(x, right, sites) == 0;
      } else if (pbc) {
        allowed &= site_bit(x, 0, sites) == 0;
      }
      if (allowed) h(x ^ site_mask(i, sites), x) += 1.0;
    }
  }
  return {std::move(h), OperatorRole::PxpHamiltonian, sites};
}

double hermiticity_residual(const Matrix& a) { return max_abs(a - a.adjoint()); }

}  // namespace rydcoll
