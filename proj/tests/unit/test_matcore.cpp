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


#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracle.hpp"
#include "qdyn/matcore.hpp"
#include "qdyn/sampling.hpp"
#include "qdyn/states.hpp"

using namespace qdyn;

TEST_CASE("kron") {
  SUBCASE("identity case") { CHECK(approx_equal(kron(CMatrix::identity(2), CMatrix::identity(2)), CMatrix::identity(4), 0.0)); }
  SUBCASE("sigma_z (x) sigma_z") {
    CHECK(approx_equal(kron(pauli::Z(), pauli::Z()), CMatrix::diag(std::vector<double>{1, -1, -1, 1}), 0.0));
  }
  SUBCASE("shape arithmetic") {
    const CMatrix k = kron(CMatrix(2, 3), CMatrix(4, 5));
    CHECK(k.rows() == 8);
    CHECK(k.cols() == 15);
  }
  SUBCASE("associativity and mixed product on random matrices") {
    Rng rng(1);
    for (int trial = 0; trial < 20; ++trial) {
      const CMatrix a = random_matrix(2, 3, rng), b = random_matrix(3, 2, rng), c = random_matrix(3, 2, rng),
                    d = random_matrix(2, 2, rng);
      CHECK(max_abs_diff(kron(kron(a, b), c), kron(a, kron(b, c))) < 1e-10);
      CHECK(max_abs_diff(kron(a, d) * kron(c, d), kron(a * c, d * d)) < 1e-10);
    }
  }
}

TEST_CASE("partial_trace") {
  const BipartiteDims dims{2, 2};
  SUBCASE("product state factorises") {
    Rng rng(2);
    const DensityMatrix rho = random_density(2, rng);
    const CMatrix tau = random_hermitian(2, rng);
    CHECK(max_abs_diff(partial_trace(kron(rho.mat(), tau), dims, Subsystem::kSystem), rho.mat() * tau.trace()) < 1e-12);
    CHECK(max_abs_diff(partial_trace(kron(rho.mat(), tau), dims, Subsystem::kReservoir), tau * rho.mat().trace()) < 1e-12);
  }
  SUBCASE("singlet marginal is maximally mixed") {
    CHECK(max_abs_diff(partial_trace(singlet().mat(), dims, Subsystem::kSystem), CMatrix::identity(2) * 0.5) < 1e-15);
  }
  SUBCASE("trace chain rule and linearity on random matrices") {
    Rng rng(3);
    for (int trial = 0; trial < 100; ++trial) {
      const CMatrix m = random_matrix(4, 4, rng);
      const CMatrix n = random_matrix(4, 4, rng);
      CHECK(std::abs(partial_trace(m, dims, Subsystem::kSystem).trace() - m.trace()) < 1e-12);
      const cplx alpha{0.3, -1.2}, beta{2.0, 0.5};
      const CMatrix lhs = partial_trace(alpha * m + beta * n, dims, Subsystem::kSystem);
      const CMatrix rhs = alpha * partial_trace(m, dims, Subsystem::kSystem) + beta * partial_trace(n, dims, Subsystem::kSystem);
      CHECK(max_abs_diff(lhs, rhs) < 1e-12);
      CHECK(max_abs_diff(partial_trace(m, dims, Subsystem::kSystem), oracle::trace_reservoir(m, 2, 2)) < 1e-14);
    }
  }
  SUBCASE("asymmetric dimensions") {
    Rng rng(4);
    const CMatrix m = random_matrix(6, 6, rng);
    CHECK(max_abs_diff(partial_trace(m, {2, 3}, Subsystem::kSystem), oracle::trace_reservoir(m, 2, 3)) < 1e-14);
    CHECK(partial_trace(m, {2, 3}, Subsystem::kReservoir).rows() == 3);
  }
  SUBCASE("dimension mismatch") { CHECK_THROWS_AS(partial_trace(CMatrix::identity(5), dims, Subsystem::kSystem), DimensionError); }
}

TEST_CASE("partial_transpose") {
  const BipartiteDims dims{2, 2};
  Rng rng(5);
  SUBCASE("involution") {
    const CMatrix m = random_matrix(4, 4, rng);
    for (auto which : {Subsystem::kSystem, Subsystem::kReservoir}) {
      CHECK(max_abs_diff(partial_transpose(partial_transpose(m, dims, which), dims, which), m) == 0.0);
    }
  }
  SUBCASE("product case") {
    const CMatrix a = random_matrix(2, 2, rng), b = random_matrix(2, 2, rng);
    CHECK(max_abs_diff(partial_transpose(kron(a, b), dims, Subsystem::kReservoir), kron(a, b.transpose())) == 0.0);
    CHECK(max_abs_diff(partial_transpose(kron(a, b), dims, Subsystem::kSystem), kron(a.transpose(), b)) == 0.0);
  }
  SUBCASE("singlet partial transpose has lambda_min -1/2") {
    const CMatrix pt = partial_transpose(singlet().mat(), dims, Subsystem::kReservoir);
    CHECK(oracle::min_eigenvalue(pt) == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(min_eigenvalue(pt) == doctest::Approx(-0.5).epsilon(1e-12));
  }
  SUBCASE("dimension mismatch") { CHECK_THROWS_AS(partial_transpose(CMatrix::identity(3), dims, Subsystem::kSystem), DimensionError); }
}

TEST_CASE("herm_eig") {
  SUBCASE("sigma_z") {
    const HermEig e = herm_eig(pauli::Z());
    CHECK(e.eigenvalues[0] == doctest::Approx(-1.0));
    CHECK(e.eigenvalues[1] == doctest::Approx(1.0));
  }
  SUBCASE("SWAP splits into antisymmetric and symmetric parts") {
    CMatrix swap(4, 4);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) swap(i * 2 + j, j * 2 + i) = 1.0;
    const HermEig e = herm_eig(swap);
    const std::vector<double> expected{-1, 1, 1, 1};
    for (std::size_t k = 0; k < 4; ++k) CHECK(e.eigenvalues[k] == doctest::Approx(expected[k]).epsilon(1e-14));
  }
  SUBCASE("random Hermitian: reconstruction, unitarity, trace, agreement with Eigen") {
    Rng rng(6);
    for (std::size_t n : {1, 2, 3, 5, 8, 16}) {
      for (int trial = 0; trial < 10; ++trial) {
        const CMatrix h = random_hermitian(n, rng);
        const HermEig e = herm_eig(h);
        std::vector<cplx> d(e.eigenvalues.begin(), e.eigenvalues.end());
        const CMatrix rec = e.eigenvectors * CMatrix::diag(d) * e.eigenvectors.adjoint();
        CHECK(max_abs_diff(rec, h) <= 1e-10 * std::max(1.0, h.norm_inf()));
        CHECK(unitarity_residual(e.eigenvectors) < 1e-10);
        double sum = 0.0;
        for (double l : e.eigenvalues) sum += l;
        CHECK(std::abs(sum - h.trace().real()) < 1e-10);
        CHECK(std::is_sorted(e.eigenvalues.begin(), e.eigenvalues.end()));
        const auto ref = oracle::eigenvalues(h);
        for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(e.eigenvalues[k] - ref[k]) < 1e-10);
      }
    }
  }
  SUBCASE("degenerate spectrum") {
    Rng rng(7);
    const CMatrix u = random_unitary(4, rng);
    const CMatrix h = u * CMatrix::diag(std::vector<double>{2, 2, -1, -1}) * u.adjoint();
    const HermEig e = herm_eig(h);
    CHECK(e.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(e.eigenvalues[3] == doctest::Approx(2.0).epsilon(1e-12));
  }
  SUBCASE("non-Hermitian input is rejected") {
    CHECK_THROWS_AS(herm_eig(CMatrix{{0.0, 1.0}, {0.0, 0.0}}), NotHermitianError);
  }
}

TEST_CASE("unitary_at") {
  Rng rng(8);
  SUBCASE("t = 0 gives identity") {
    CHECK(max_abs_diff(unitary_at(random_hermitian(3, rng), 0.0), CMatrix::identity(3)) < 1e-12);
  }
  SUBCASE("sigma_z at pi is -I") {
    CHECK(max_abs_diff(unitary_at(pauli::Z(), std::numbers::pi), -CMatrix::identity(2)) < 1e-12);
  }
  SUBCASE("group property, unitarity and agreement with a series oracle") {
    for (int trial = 0; trial < 20; ++trial) {
      const CMatrix h = random_hermitian(4, rng);
      std::uniform_real_distribution<double> time(-100.0, 100.0);
      const double t = time(rng), s = time(rng) / 50.0;
      const CMatrix ut = unitary_at(h, t);
      CHECK(unitarity_residual(ut) < 1e-10);
      CHECK(max_abs_diff(unitary_at(h, s) * unitary_at(h, s / 3.0), unitary_at(h, s + s / 3.0)) < 1e-9);
      CHECK(max_abs_diff(unitary_at(h, s), oracle::expm_hermitian(h, s)) < 1e-9);
    }
  }
  SUBCASE("non-Hermitian generator") { CHECK_THROWS_AS(unitary_at(CMatrix{{0.0, 1.0}, {2.0, 0.0}}, 1.0), NotHermitianError); }
}

TEST_CASE("PSD rule and trace norm") {
  CHECK(is_psd(CMatrix::identity(2) * 0.5));
  CHECK_FALSE(is_psd(CMatrix::diag(std::vector<double>{1.25, -0.25})));
  CHECK(is_psd(CMatrix::diag(std::vector<double>{1.0, -1e-10})));
  CHECK(trace_norm(pauli::X() * 0.5) == doctest::Approx(1.0));
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix m = random_matrix(3, 3, rng);
    CHECK(trace_norm(m) == doctest::Approx(oracle::trace_norm(m)).epsilon(1e-10));
    const CMatrix h = random_hermitian(4, rng);
    CHECK(trace_norm(h) == doctest::Approx(oracle::trace_norm(h)).epsilon(1e-10));
  }
}

TEST_CASE("tolerance configuration") {
  const double saved = default_tolerance();
  CHECK(saved == 1e-9);
  set_default_tolerance(1e-6);
  CHECK(default_tolerance() == 1e-6);
  CHECK_THROWS(set_default_tolerance(-1.0));
  set_default_tolerance(saved);
}
