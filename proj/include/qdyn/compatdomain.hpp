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


#ifndef QDYN_COMPATDOMAIN_HPP_
#define QDYN_COMPATDOMAIN_HPP_

#include <optional>
#include <string>
#include <vector>

#include "qdyn/channels.hpp"
#include "qdyn/opendyn.hpp"

namespace qdyn {

enum class DomainPredicate { kPhiPositive, kLambdaPositive };

std::string to_string(DomainPredicate p);

// What the compatibility domain is taken of: the assignment itself (phi
// predicate) or the reduced map at time t (either predicate).
class DomainQuery {
 public:
  static DomainQuery assignment(const AssignmentMap& phi);
  static DomainQuery reduced(const ReducedDynamics& rd, double t, DomainPredicate predicate);

  DomainPredicate predicate() const { return predicate_; }
  std::size_t system_dim() const { return map_.dim_in(); }
  // The linear map whose output must be PSD: Phi, or Lambda_t.
  const Superoperator& map() const { return map_; }

 private:
  DomainQuery(Superoperator map, DomainPredicate predicate) : map_(std::move(map)), predicate_(predicate) {}
  Superoperator map_;
  DomainPredicate predicate_;
};

struct Membership {
  bool member;
  double min_eigenvalue;
};

Membership membership(const DomainQuery& q, const CMatrix& rho, double tol = default_tolerance());

// Largest r in [0, 1] with r * direction in the domain, by bisection to
// `resolution` in r. Qubit subjects only; throws std::invalid_argument when
// I/2 is not a member.
double boundary_radius(const DomainQuery& q, const BlochVector& direction, double resolution = 1e-8,
                       double tol = default_tolerance());

struct LandscapeSample {
  BlochVector r;
  double min_eigenvalue;
};

// The centre first, then Fibonacci shells at radii 0.1, 0.2, ..., 1.0 with
// resolution * k points on shell k.
std::vector<LandscapeSample> landscape(const DomainQuery& q, std::size_t resolution);

struct ConvexityReport {
  std::size_t trials = 0;
  std::size_t failures = 0;             // member pairs whose midpoint is not a member
  std::size_t concavity_failures = 0;   // lambda_min(mid) < mean - 1e-12
  double worst_concavity_gap = 0.0;
  bool empty_interior = false;          // no member could be sampled
};

ConvexityReport convexity_check(const DomainQuery& q, std::size_t trials, std::uint64_t seed = 0,
                                double tol = default_tolerance());

struct RayRadius {
  BlochVector direction;
  double radius;
};

struct DomainReport {
  std::string status;  // "ok" or "empty-interior"
  Membership center;
  std::vector<std::pair<CMatrix, Membership>> probes;  // centre first
  std::vector<RayRadius> radii;
  std::vector<LandscapeSample> samples;
  std::optional<ConvexityReport> convexity;
  double tol = 0.0;
  std::uint64_t seed = 0;
};

struct DomainReportOptions {
  std::size_t resolution = 20;
  std::vector<BlochVector> rays;  // qubit only; empty means the six axis directions
  std::size_t convexity_trials = 1000;
  std::uint64_t seed = 0;
  bool geometry = true;           // radii and landscape; requires a qubit subject
};

DomainReport domain_report(const DomainQuery& q, const DomainReportOptions& opts, double tol = default_tolerance());

}  // namespace qdyn

#endif  // QDYN_COMPATDOMAIN_HPP_
