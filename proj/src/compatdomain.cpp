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


#include "qdyn/compatdomain.hpp"

#include <cmath>

namespace qdyn {

namespace {

CMatrix bloch_matrix(const BlochVector& r) {
  CMatrix m = pauli::I() + r.x * pauli::X() + r.y * pauli::Y() + r.z * pauli::Z();
  m *= 0.5;
  return m;
}

void require_qubit(const DomainQuery& q, const char* what) {
  if (q.system_dim() != 2) throw std::invalid_argument(std::string(what) + ": qubit subject required");
}

CMatrix random_subject_state(std::size_t dim, Rng& rng) {
  if (dim == 2) return bloch_matrix(random_in_ball(rng));
  return random_density(dim, rng).mat();
}

}  // namespace

std::string to_string(DomainPredicate p) { return p == DomainPredicate::kPhiPositive ? "phi" : "lambda"; }

DomainQuery DomainQuery::assignment(const AssignmentMap& phi) {
  return {phi.linear_extension(), DomainPredicate::kPhiPositive};
}

DomainQuery DomainQuery::reduced(const ReducedDynamics& rd, double t, DomainPredicate predicate) {
  if (predicate == DomainPredicate::kPhiPositive) return {rd.phi.linear_extension(), predicate};
  return {reduced_map(rd, t), predicate};
}

Membership membership(const DomainQuery& q, const CMatrix& rho, double tol) {
  const CMatrix out = q.map().apply(rho);
  const double lmin = min_eigenvalue(out);
  return {lmin >= psd_threshold(out, tol), lmin};
}

double boundary_radius(const DomainQuery& q, const BlochVector& direction, double resolution, double tol) {
  require_qubit(q, "boundary_radius");
  const double n = direction.norm();
  if (!(n > 0.0)) throw std::invalid_argument("boundary_radius: direction must be non-zero");
  const BlochVector unit = direction.scaled(1.0 / n);
  if (!membership(q, bloch_matrix({0.0, 0.0, 0.0}), tol).member) {
    throw std::invalid_argument("boundary_radius: I/2 is not in the domain (empty interior)");
  }
  auto inside = [&](double r) { return membership(q, bloch_matrix(unit.scaled(r)), tol).member; };
  if (inside(1.0)) return 1.0;
  // lambda_min is concave along the ray, so membership is an interval [0, r*].
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > resolution) {
    const double mid = 0.5 * (lo + hi);
    (inside(mid) ? lo : hi) = mid;
  }
  return lo;
}

std::vector<LandscapeSample> landscape(const DomainQuery& q, std::size_t resolution) {
  require_qubit(q, "landscape");
  std::vector<LandscapeSample> out;
  auto sample = [&](const BlochVector& r) { out.push_back({r, min_eigenvalue(q.map().apply(bloch_matrix(r)))}); };
  sample({0.0, 0.0, 0.0});
  for (std::size_t shell = 1; shell <= 10; ++shell) {
    const double radius = static_cast<double>(shell) / 10.0;
    for (const auto& p : fibonacci_sphere(std::max<std::size_t>(1, resolution * shell))) sample(p.scaled(radius));
  }
  return out;
}

ConvexityReport convexity_check(const DomainQuery& q, std::size_t trials, std::uint64_t seed, double tol) {
  ConvexityReport rep;
  rep.trials = trials;
  Rng rng(seed);
  const std::size_t d = q.system_dim();
  auto draw_member = [&]() -> std::optional<CMatrix> {
    for (int attempt = 0; attempt < 1000; ++attempt) {
      CMatrix rho = random_subject_state(d, rng);
      if (membership(q, rho, tol).member) return rho;
    }
    return std::nullopt;
  };
  for (std::size_t k = 0; k < trials; ++k) {
    const auto a = draw_member();
    const auto b = draw_member();
    if (!a || !b) {
      rep.empty_interior = true;
      break;
    }
    if (!membership(q, 0.5 * (*a + *b), tol).member) ++rep.failures;

    const CMatrix u = random_subject_state(d, rng);
    const CMatrix v = random_subject_state(d, rng);
    const double lu = membership(q, u, tol).min_eigenvalue;
    const double lv = membership(q, v, tol).min_eigenvalue;
    const double lm = membership(q, 0.5 * (u + v), tol).min_eigenvalue;
    const double gap = 0.5 * (lu + lv) - lm;
    rep.worst_concavity_gap = std::max(rep.worst_concavity_gap, gap);
    if (gap > 1e-12) ++rep.concavity_failures;
  }
  return rep;
}

DomainReport domain_report(const DomainQuery& q, const DomainReportOptions& opts, double tol) {
  const std::size_t d = q.system_dim();
  if (opts.geometry) require_qubit(q, "domain_report geometry");
  DomainReport rep;
  rep.tol = tol;
  rep.seed = opts.seed;
  const CMatrix center = CMatrix::identity(d) * (1.0 / static_cast<double>(d));
  rep.center = membership(q, center, tol);
  rep.status = rep.center.member ? "ok" : "empty-interior";
  rep.probes.emplace_back(center, rep.center);

  if (opts.geometry) {
    std::vector<BlochVector> rays = opts.rays;
    if (rays.empty()) rays = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
    for (const auto& r : {BlochVector{1, 0, 0}, BlochVector{0, 1, 0}, BlochVector{0, 0, 1}, BlochVector{0, 0, -1}}) {
      const CMatrix rho = bloch_matrix(r);
      rep.probes.emplace_back(rho, membership(q, rho, tol));
    }
    if (rep.center.member) {
      for (const auto& r : rays) {
        const double n = r.norm();
        rep.radii.push_back({r.scaled(1.0 / n), boundary_radius(q, r, 1e-8, tol)});
      }
    }
    rep.samples = landscape(q, opts.resolution);
  }
  if (opts.convexity_trials > 0 && rep.center.member) {
    rep.convexity = convexity_check(q, opts.convexity_trials, opts.seed, tol);
  }
  return rep;
}

}  // namespace qdyn
