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


// Generators shared by the unit and acceptance tests.

#ifndef QDYN_TESTS_SUPPORT_HPP_
#define QDYN_TESTS_SUPPORT_HPP_

#include <random>

#include "qdyn/channels.hpp"
#include "qdyn/opendyn.hpp"
#include "qdyn/sampling.hpp"

namespace support {

// Qubit-qubit assignment rho -> rho (x) I/2 + K with K = 1/4 sum_ij c_ij s_i (x) s_j.
// K is traceless on the reservoir, so the map is consistent. The coefficients
// are rescaled so that lambda_min(Phi(I/2)) lands in [0.01, 0.2].
inline qdyn::AssignmentMap random_correlated_assignment(qdyn::Rng& rng) {
  using namespace qdyn;
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> target(0.01, 0.2);
  const auto s = pauli::xyz();
  CMatrix k(4, 4);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) k += kron(s[i], s[j]) * (0.25 * gauss(rng));
  // lambda_min(I/4 + a K) = 1/4 + a lambda_min(K), and lambda_min(K) < 0 since tr K = 0.
  const double kmin = min_eigenvalue(k);
  const double a = (0.25 - target(rng)) / -kmin;
  const CMatrix half = CMatrix::identity(2) * 0.5;
  return AssignmentMap::affine({2, 2}, Superoperator::from_action(2, 4, [&](const CMatrix& x) { return kron(x, half); }),
                               k * a);
}

}  // namespace support

#endif  // QDYN_TESTS_SUPPORT_HPP_
