// Copyright 2026 The dpskit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <random>

#include "dpskit/matrix_core.hpp"

namespace dpskit {

/// All stochastic routines take an explicit engine; nothing draws from a
/// global generator.
using Rng = std::mt19937_64;

/// Engine for worker `stream` of a run seeded with `seed` (fixed stride).
Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0);

Matrix ginibre(int dim, Rng &rng);

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases
/// of diag(R) pushed into Q.
Matrix haar_unitary(int dim, Rng &rng);

/// Haar-random unit vector.
Vector haar_state(int dim, Rng &rng);

/// Hermitian matrix with i.i.d. Gaussian entries (GUE-like, unnormalised).
Matrix random_hermitian(int dim, Rng &rng);

/// Random full-rank density matrix: W W^dagger / Tr for Ginibre W.
DensityMatrix random_density(int dim, Rng &rng);

}  // namespace dpskit
