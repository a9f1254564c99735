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
#include "qdyn/channels.hpp"
#include "qdyn/opendyn.hpp"
#include "qdyn/sampling.hpp"
#include "support.hpp"

using namespace qdyn;

namespace {

CMatrix cnot_system_controls() {
  CMatrix u(4, 4);
  u(0, 0) = u(1, 1) = u(2, 3) = u(3, 2) = 1.0;
  return u;
}

CMatrix cnot_reservoir_controls() {
  CMatrix u(4, 4);
  u(0, 0) = u(3, 1) = u(2, 2) = u(1, 3) = 1.0;
  return u;
}

DensityMatrix tau() { return DensityMatrix(CMatrix::diag(std::vector<double>{0.7, 0.3})); }

std::vector<TableEntry> four_state_table(const DensityMatrix& psi_p, const DensityMatrix& psi_m,
                                         const DensityMatrix& phi_p, const DensityMatrix& phi_m) {
  auto entry = [](const DensityMatrix& s, const DensityMatrix& r) { return TableEntry{s, DensityMatrix(kron(s, r))}; };
  return {entry(axis_state('x', 1), psi_p), entry(axis_state('x', -1), psi_m), entry(axis_state('z', 1), phi_p),
          entry(axis_state('z', -1), phi_m)};
}

// lambda_min of Phi_c(rho(r)), from the closed-form spectrum 1/4 (1 +/- sqrt(r_perp^2 + (r_z +/- c)^2)).
double phi_c_min(double c, const BlochVector& r) {
  const double perp2 = r.x * r.x + r.y * r.y;
  return std::min(1.0 - std::sqrt(perp2 + (r.z + c) * (r.z + c)), 1.0 - std::sqrt(perp2 + (r.z - c) * (r.z - c))) / 4.0;
}

}  // namespace

TEST_CASE("assign") {
  Rng rng(41);
  SUBCASE("product") {
    const AssignmentMap phi = AssignmentMap::product(2, tau());
    for (int trial = 0; trial < 20; ++trial) {
      const DensityMatrix rho = random_density(2, rng);
      const CMatrix joint = assign(phi, rho);
      CHECK(max_abs_diff(joint, kron(rho.mat(), tau().mat())) == 0.0);
      CHECK(is_psd(joint));
    }
  }
  SUBCASE("Phi_c at c = 1/2") {
    const AssignmentMap phi = assignments::correlated(0.5);
    const auto centre = oracle::eigenvalues(assign(phi, DensityMatrix::maximally_mixed(2)));
    const std::vector<double> expected{0.125, 0.125, 0.375, 0.375};
    for (std::size_t k = 0; k < 4; ++k) CHECK(centre[k] == doctest::Approx(expected[k]).epsilon(1e-12));
    const auto pole = oracle::eigenvalues(assign(phi, axis_state('z', 1)));
    CHECK(pole[0] == doctest::Approx(-0.125).epsilon(1e-12));
    CHECK(pole[3] == doctest::Approx(0.625).epsilon(1e-12));
    CHECK_FALSE(is_psd(assign(phi, axis_state('z', 1))));
  }
  SUBCASE("closed-form spectrum of Phi_c across the ball") {
    for (int trial = 0; trial < 200; ++trial) {
      std::uniform_real_distribution<double> cd(-1.0, 1.0);
      const double c = cd(rng);
      const BlochVector r = random_in_ball(rng);
      CHECK(min_eigenvalue(assign(assignments::correlated(c), from_bloch(r))) == doctest::Approx(phi_c_min(c, r)).epsilon(1e-10));
    }
  }
  SUBCASE("affine map is linear including the trace factor") {
    const AssignmentMap phi = assignments::correlated(0.3);
    const Superoperator ext = phi.linear_extension();
    for (int trial = 0; trial < 10; ++trial) {
      const DensityMatrix rho = random_density(2, rng);
      CHECK(max_abs_diff(ext(rho), assign(phi, rho)) < 1e-12);
    }
  }
  SUBCASE("tabulated lookups") {
    const AssignmentMap phi = AssignmentMap::tabulated(
        {2, 2}, four_state_table(axis_state('z', 1), axis_state('z', -1), DensityMatrix::maximally_mixed(2),
                                 DensityMatrix::maximally_mixed(2)));
    CHECK(max_abs_diff(assign(phi, axis_state('x', 1)), kron(axis_state('x', 1).mat(), axis_state('z', 1).mat())) < 1e-15);
    CHECK_THROWS_AS(assign(phi, DensityMatrix::maximally_mixed(2)), TableMissError);
    CHECK_FALSE(phi.totally_defined());
  }
  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(assign(AssignmentMap::product(2, tau()), DensityMatrix::maximally_mixed(3)), DimensionError);
  }
  SUBCASE("inconsistent tables must be flagged") {
    std::vector<TableEntry> bad{{axis_state('x', 1), DensityMatrix(kron(axis_state('z', 1).mat(), tau().mat()))}};
    CHECK_THROWS(AssignmentMap::tabulated({2, 2}, bad));
    CHECK_NOTHROW(AssignmentMap::tabulated({2, 2}, bad, true));
  }
}

TEST_CASE("check_consistency") {
  const auto probes = standard_probes(2, 20, 3);
  CHECK(check_consistency(AssignmentMap::product(2, tau()), probes).max_residual < 1e-12);
  for (double c : {-1.0, -0.3, 0.5, 1.0}) {
    const ConsistencyReport r = check_consistency(assignments::correlated(c), probes);
    CHECK(r.consistent);
    CHECK(r.max_residual < 1e-12);
  }
  const AssignmentMap deph = assignments::dephasing_product(tau(), 2);
  const ConsistencyReport r = check_consistency(deph, {axis_state('x', 1), axis_state('z', 1)});
  CHECK_FALSE(r.consistent);
  CHECK(r.worst_probe == 0);
  // || |+><+| - I/2 ||_1 = || X/2 ||_1 = 1
  CHECK(r.max_residual == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(consistency_residual(deph) > 0.1);
  CHECK(consistency_residual(assignments::correlated(0.5)) < 1e-12);
}

TEST_CASE("check_linearity") {
  Rng rng(42);
  std::vector<LinearityProbe> probes;
  std::uniform_real_distribution<double> w(0.0, 1.0);
  for (int k = 0; k < 30; ++k) probes.push_back({random_density(2, rng), random_density(2, rng), w(rng)});
  CHECK(check_linearity(AssignmentMap::product(2, tau()), probes).max_residual < 1e-10);
  CHECK(check_linearity(assignments::correlated(0.5), probes).max_residual < 1e-10);

  const AssignmentMap table = AssignmentMap::tabulated(
      {2, 2}, four_state_table(axis_state('z', 1), axis_state('z', -1), DensityMatrix::maximally_mixed(2),
                               DensityMatrix::maximally_mixed(2)));
  const LinearityReport rep = check_linearity(table, {{axis_state('x', 1), axis_state('x', -1), 0.5}});
  REQUIRE(rep.entries.size() == 1);
  CHECK(rep.entries[0].status == ProbeStatus::kUndefined);
  CHECK(rep.undefined == 1);
  CHECK(rep.max_residual == 0.0);
  // Trivial weights stay inside the table.
  const LinearityReport inside = check_linearity(table, {{axis_state('x', 1), axis_state('x', -1), 1.0}});
  CHECK(inside.entries[0].status == ProbeStatus::kDefined);
}

TEST_CASE("reduced_map") {
  Rng rng(43);
  SUBCASE("product assignments give CPTP maps") {
    for (int trial = 0; trial < 20; ++trial) {
      const ReducedDynamics rd(AssignmentMap::product(2, random_density(2, rng)), Generator::unitary(random_unitary(4, rng)));
      const Superoperator lam = reduced_map(rd, 0.0);
      CHECK(is_cp(lam).is_cp);
      CHECK(trace_preservation_residual(lam) < 1e-9);
    }
  }
  SUBCASE("Phi_c with CNOT controlled by the system is CP") {
    // An independent brute-force Choi build gives the spectrum (0, 0, 1, 1).
    const ReducedDynamics rd(assignments::correlated(0.5), Generator::unitary(cnot_system_controls()));
    const auto ev = oracle::eigenvalues(choi_of(reduced_map(rd, 0.0)).mat);
    CHECK(std::abs(ev[0]) < 1e-12);
    CHECK(ev[3] == doctest::Approx(1.0));
  }
  SUBCASE("Phi_c with CNOT controlled by the reservoir is not CP") {
    for (double c : {0.25, 0.5, 1.0}) {
      const ReducedDynamics rd(assignments::correlated(c), Generator::unitary(cnot_reservoir_controls()));
      const Superoperator lam = reduced_map(rd, 0.0);
      const double expected = (1.0 - std::sqrt(1.0 + c * c)) / 2.0;
      CHECK(oracle::min_eigenvalue(choi_of(lam).mat) == doctest::Approx(expected).epsilon(1e-10));
      CHECK_FALSE(is_cp(lam).is_cp);
    }
  }
  SUBCASE("t = 0 is the identity for consistent assignments") {
    const CMatrix h = random_hermitian(4, rng);
    for (const AssignmentMap& phi : {assignments::correlated(0.7), AssignmentMap::product(2, tau())}) {
      const ReducedDynamics rd(phi, Generator::hamiltonian(h));
      CHECK(max_abs_diff(reduced_map(rd, 0.0).transfer(), CMatrix::identity(4)) < 1e-10);
    }
  }
  SUBCASE("agrees with the direct formula on domain probes") {
    const AssignmentMap phi = assignments::correlated(0.4);
    const Generator g = Generator::hamiltonian(random_hermitian(4, rng));
    const ReducedDynamics rd(phi, g);
    for (int trial = 0; trial < 20; ++trial) {
      const double t = 0.1 * trial;
      const DensityMatrix rho = from_bloch(random_in_ball(rng).scaled(0.5));
      const CMatrix u = oracle::expm_hermitian(g.matrix(), t);
      const CMatrix direct = oracle::trace_reservoir(u * assign(phi, rho) * u.adjoint(), 2, 2);
      CHECK(max_abs_diff(reduced_map(rd, t)(rho), direct) < 1e-10);
    }
  }
  SUBCASE("generator validation") {
    CHECK_THROWS(Generator::unitary(CMatrix::identity(4) * 2.0));
    CHECK_THROWS(Generator::hamiltonian(CMatrix{{0.0, 1.0}, {0.0, 0.0}}));
    CHECK_THROWS_AS(ReducedDynamics(assignments::correlated(0.5), Generator::unitary(CMatrix::identity(2))), DimensionError);
  }
}

TEST_CASE("extend_linearly") {
  const DensityMatrix up = axis_state('z', 1), down = axis_state('z', -1);
  const DensityMatrix mixed = DensityMatrix::maximally_mixed(2);

  SUBCASE("four-state table conflicts") {
    const AssignmentMap phi = AssignmentMap::tabulated({2, 2}, four_state_table(up, down, mixed, mixed));
    const ExtensionResult res = extend_linearly(phi);
    REQUIRE_FALSE(res.is_extension());
    const Conflict& c = res.conflict();
    const auto& entries = phi.as_tabulated()->entries;
    CMatrix first(2, 2), second(2, 2), img_first(4, 4), img_second(4, 4);
    double w1 = 0.0, w2 = 0.0;
    for (std::size_t k = 0; k < entries.size(); ++k) {
      CHECK(c.first.weights[k] >= 0.0);
      CHECK(c.second.weights[k] >= 0.0);
      first += entries[k].system.mat() * c.first.weights[k];
      second += entries[k].system.mat() * c.second.weights[k];
      img_first += entries[k].joint.mat() * c.first.weights[k];
      img_second += entries[k].joint.mat() * c.second.weights[k];
      w1 += c.first.weights[k];
      w2 += c.second.weights[k];
    }
    CHECK(w1 == doctest::Approx(1.0));
    CHECK(w2 == doctest::Approx(1.0));
    CHECK(max_abs_diff(first, mixed.mat()) <= 1e-12);
    CHECK(max_abs_diff(second, mixed.mat()) <= 1e-12);
    CHECK(max_abs_diff(c.state, mixed.mat()) <= 1e-12);
    // Oracle: 1/2 (x+ (x) z+ + x- (x) z-) - I/4 (x) I = 1/4 X (x) Z, trace norm 1.
    CHECK(oracle::trace_norm(img_first - img_second) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(c.image_distance == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(c.residual_norm > 1e3 * default_tolerance());
  }
  SUBCASE("equal reservoir states extend to the product map") {
    const AssignmentMap phi = AssignmentMap::tabulated({2, 2}, four_state_table(tau(), tau(), tau(), tau()));
    const ExtensionResult res = extend_linearly(phi);
    REQUIRE(res.is_extension());
    const Superoperator ext = res.extension().linear_extension();
    const Superoperator product = AssignmentMap::product(2, tau()).linear_extension();
    CHECK(max_abs_diff(ext.transfer(), product.transfer()) <= 1e-10);
  }
  SUBCASE("affinely independent table extends and reproduces every pair") {
    Rng rng(44);
    std::vector<TableEntry> entries;
    for (const DensityMatrix& s : {axis_state('x', 1), axis_state('x', -1), axis_state('z', 1), axis_state('y', 1)}) {
      entries.push_back({s, DensityMatrix(kron(s.mat(), random_density(2, rng).mat()))});
    }
    const AssignmentMap phi = AssignmentMap::tabulated({2, 2}, entries);
    const ExtensionResult res = extend_linearly(phi);
    REQUIRE(res.is_extension());
    for (const TableEntry& e : entries) CHECK(max_abs_diff(assign(res.extension(), e.system), e.joint.mat()) <= 1e-10);
    CHECK(res.extension().kind() == AssignmentKind::kAffine);
  }
  SUBCASE("a single entry extends") {
    const AssignmentMap phi = AssignmentMap::tabulated({2, 2}, {{up, DensityMatrix(kron(up.mat(), tau().mat()))}});
    const ExtensionResult res = extend_linearly(phi);
    REQUIRE(res.is_extension());
    CHECK(max_abs_diff(assign(res.extension(), up), kron(up.mat(), tau().mat())) <= 1e-10);
  }
  SUBCASE("only tabulated maps are accepted") {
    CHECK_THROWS(extend_linearly(assignments::correlated(0.5)));
  }
}

TEST_CASE("pechukas_witness") {
  SUBCASE("Phi_c at c = 1/2") {
    const WitnessResult w = pechukas_witness(assignments::correlated(0.5));
    REQUIRE(w.witness.has_value());
    CHECK(w.min_eigenvalue == doctest::Approx(-0.125).epsilon(1e-3));
    CHECK(std::abs(to_bloch(w.witness->mat()).z) >= 0.99);
  }
  SUBCASE("Phi_c at c = 1") {
    const AssignmentMap phi = assignments::correlated(1.0);
    const WitnessResult w = pechukas_witness(phi);
    REQUIRE(w.witness.has_value());
    CHECK(w.min_eigenvalue == doctest::Approx(-0.25).epsilon(1e-3));
    const auto centre = oracle::eigenvalues(assign(phi, DensityMatrix::maximally_mixed(2)));
    CHECK(std::abs(centre[0]) < 1e-15);
    CHECK(centre[3] == doctest::Approx(0.5));
  }
  SUBCASE("product assignment") {
    const WitnessResult w = pechukas_witness(AssignmentMap::product(2, tau()));
    CHECK_FALSE(w.witness.has_value());
    CHECK(w.samples_used > 0);
  }
  SUBCASE("random consistent correlated assignments") {
    Rng rng(45);
    for (int trial = 0; trial < 10; ++trial) {
      const AssignmentMap phi = support::random_correlated_assignment(rng);
      CHECK(min_eigenvalue(assign(phi, DensityMatrix::maximally_mixed(2))) >= 0.01 - 1e-12);
      const WitnessResult w = pechukas_witness(phi);
      REQUIRE(w.witness.has_value());
      CHECK(oracle::min_eigenvalue(assign(phi, *w.witness)) < -default_tolerance());
    }
  }
  SUBCASE("inconsistent input is rejected") {
    CHECK_THROWS(pechukas_witness(assignments::dephasing_product(tau(), 2)));
  }
}

TEST_CASE("inconsistency_analysis") {
  const std::vector<double> times{0.0, 0.5, 1.0, 1.5, 2.0};
  const Generator h = Generator::hamiltonian(kron(pauli::Z(), pauli::X()));
  SUBCASE("consistent assignment fed its own image") {
    const AssignmentMap phi = assignments::correlated(0.5);
    const DensityMatrix rho = from_bloch({0.1, 0.2, 0.3});
    const TrajectoryReport r = inconsistency_analysis(phi, rho, assign(phi, rho), h, times);
    CHECK(r.fixed_point_offset < 1e-12);
    for (double d : r.deviation) CHECK(d < 1e-12);
  }
  SUBCASE("dephasing assignment on x+") {
    const AssignmentMap phi = assignments::dephasing_product(tau(), 2);
    const DensityMatrix rho = axis_state('x', 1);
    const TrajectoryReport r = inconsistency_analysis(phi, rho, kron(rho.mat(), tau().mat()), h, times);
    CHECK(r.fixed_point_offset == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.deviation[0] == doctest::Approx(r.fixed_point_offset).epsilon(1e-12));
    for (double d : r.deviation) CHECK(d >= 0.0);
  }
  SUBCASE("weak coupling against the product proxy") {
    // Under sigma_z (x) sigma_x the correlation term evolves into combinations of
    // sigma_z (x) sigma_z and I (x) sigma_y, both traceless on R, so the sweep over
    // [0, 2] sees deviations at rounding level only.
    const AssignmentMap proxy = assignments::correlated(0.0);
    const AssignmentMap truth = assignments::correlated(0.1);
    const DensityMatrix rho = from_bloch({0.3, -0.2, 0.5});
    std::vector<double> grid;
    for (int k = 0; k <= 20; ++k) grid.push_back(0.1 * k);
    const TrajectoryReport r = inconsistency_analysis(proxy, rho, assign(truth, rho), h, grid);
    for (double d : r.deviation) CHECK(d <= 1e-12);
  }
  SUBCASE("marginal mismatch") {
    const AssignmentMap phi = assignments::correlated(0.5);
    CHECK_THROWS(inconsistency_analysis(phi, axis_state('x', 1), assign(phi, axis_state('z', 1)), h, times));
  }
}
