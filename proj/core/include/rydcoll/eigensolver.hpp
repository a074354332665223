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

#include <functional>

#include "rydcoll/types.hpp"

namespace rydcoll {

/// Linear map on square matrices (superoperator applied matrix-free).
using OperatorMap = std::function<Matrix(const Matrix&)>;

enum class EigenMethod { Power, Krylov };

enum class SpectralTarget { LargestMagnitude, LargestRealPart };

struct EigenSolveOptions {
  EigenMethod method = EigenMethod::Krylov;
  SpectralTarget target = SpectralTarget::LargestMagnitude;
  double tol = 1e-12;
  long max_applications = 100000;
  int krylov_dim = 40;
};

struct EigenSolveResult {
  Complex value{0.0, 0.0};
  Matrix vector;          ///< normalised to unit trace when the trace is nonzero
  long applications = 0;  ///< number of map applications
  double residual = 0.0;  ///< max|A(x) - value x| / (|value| max|x|)
  bool converged = false;
};

/// Power iteration, renormalising by the trace each step. Stops when the
/// relative change of the eigenvalue estimate drops below tol.
EigenSolveResult power_iteration(const OperatorMap& map, Matrix start, double tol, long max_applications);

/// Explicitly restarted Arnoldi on the flattened matrix space. Stops when the
/// Ritz residual relative to the Ritz value drops below tol.
EigenSolveResult krylov_dominant(const OperatorMap& map, Matrix start, const EigenSolveOptions& options);

EigenSolveResult dominant_eigen(const OperatorMap& map, Matrix start, const EigenSolveOptions& options);

}  // namespace rydcoll
