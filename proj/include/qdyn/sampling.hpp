// Copyright 2026 The qdyn Authors.
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


#ifndef QDYN_SAMPLING_HPP_
#define QDYN_SAMPLING_HPP_

#include <cstdint>
#include <random>
#include <vector>

#include "qdyn/matcore.hpp"
#include "qdyn/states.hpp"

namespace qdyn {

using Rng = std::mt19937_64;

// Deterministic, nearly uniform points on the unit sphere.
std::vector<BlochVector> fibonacci_sphere(std::size_t n);

// Qubit ket with Bloch vector `r` (|r| = 1).
std::vector<cplx> ket_from_bloch(const BlochVector& r);

std::vector<cplx> random_ket(std::size_t dim, Rng& rng);
// Haar-distributed via QR-free polar decomposition of a Ginibre matrix.
CMatrix random_unitary(std::size_t dim, Rng& rng);
// Ginibre-induced mixed state.
DensityMatrix random_density(std::size_t dim, Rng& rng);
// Uniform in the Bloch ball.
BlochVector random_in_ball(Rng& rng);
// Random Hermitian with standard normal entries.
CMatrix random_hermitian(std::size_t dim, Rng& rng);
CMatrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng);

}  // namespace qdyn

#endif  // QDYN_SAMPLING_HPP_
