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


#include "qdyn/sampling.hpp"

#include <cmath>
#include <numbers>

namespace qdyn {

std::vector<BlochVector> fibonacci_sphere(std::size_t n) {
  std::vector<BlochVector> pts;
  pts.reserve(n);
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (std::size_t k = 0; k < n; ++k) {
    const double z = n == 1 ? 1.0 : 1.0 - 2.0 * (static_cast<double>(k) + 0.5) / static_cast<double>(n);
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * static_cast<double>(k);
    pts.push_back({rho * std::cos(phi), rho * std::sin(phi), z});
  }
  return pts;
}

std::vector<cplx> ket_from_bloch(const BlochVector& r) {
  const double n = r.norm();
  const double z = n > 0.0 ? std::clamp(r.z / n, -1.0, 1.0) : 1.0;
  const double theta = std::acos(z);
  const double phi = std::atan2(r.y, r.x);
  return {std::cos(theta / 2.0), std::polar(std::sin(theta / 2.0), phi)};
}

CMatrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  CMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = cplx{g(rng), g(rng)};
  return m;
}

std::vector<cplx> random_ket(std::size_t dim, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<cplx> v(dim);
  double n2 = 0.0;
  for (auto& z : v) {
    z = cplx{g(rng), g(rng)};
    n2 += std::norm(z);
  }
  for (auto& z : v) z /= std::sqrt(n2);
  return v;
}

CMatrix random_unitary(std::size_t dim, Rng& rng) {
  const CMatrix g = random_matrix(dim, dim, rng);
  const HermEig e = herm_eig_unchecked(g.adjoint() * g);
  std::vector<cplx> inv_sqrt(dim);
  for (std::size_t k = 0; k < dim; ++k) inv_sqrt[k] = 1.0 / std::sqrt(e.eigenvalues[k]);
  return g * (e.eigenvectors * CMatrix::diag(inv_sqrt) * e.eigenvectors.adjoint());
}

DensityMatrix random_density(std::size_t dim, Rng& rng) {
  const CMatrix g = random_matrix(dim, dim, rng);
  CMatrix rho = g * g.adjoint();
  rho *= 1.0 / rho.trace().real();
  return DensityMatrix(hermitian_part(rho));
}

BlochVector random_in_ball(Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    BlochVector r{u(rng), u(rng), u(rng)};
    if (r.norm() <= 1.0) return r;
  }
}

CMatrix random_hermitian(std::size_t dim, Rng& rng) { return hermitian_part(random_matrix(dim, dim, rng)); }

}  // namespace qdyn
