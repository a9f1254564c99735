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


#include "qdyn/cases.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "qdyn/channels.hpp"
#include "qdyn/compatdomain.hpp"
#include "qdyn/opendyn.hpp"
#include "qdyn/states.hpp"

namespace qdyn {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  if (std::abs(v) < 5e-10) v = 0.0;  // no "-0.000000000"
  if (v == std::round(v) && std::abs(v) >= 2.0 && std::abs(v) < 1e15) {
    os << static_cast<long long>(v);
  } else {
    os << std::fixed << std::setprecision(9) << v;
  }
  return os.str();
}

std::string describe(const ConvexDecomposition& d, const std::vector<std::string>& names) {
  std::ostringstream os;
  bool first = true;
  for (std::size_t k = 0; k < d.weights.size(); ++k) {
    if (d.weights[k] <= 1e-12) continue;
    os << (first ? "" : " + ") << std::setprecision(6) << d.weights[k] << "*" << names[k];
    first = false;
  }
  return os.str();
}

// CNOT with the reservoir qubit as control and the system qubit as target.
CMatrix cnot_reservoir_controls_system() {
  CMatrix u(4, 4);
  for (std::size_t s = 0; s < 2; ++s)
    for (std::size_t r = 0; r < 2; ++r) u(((s ^ r) * 2) + r, s * 2 + r) = 1.0;
  return u;
}

std::vector<double> time_grid(const CaseOptions& o) {
  std::vector<double> ts;
  if (o.steps <= 1) return {o.t0};
  for (std::size_t k = 0; k < o.steps; ++k) {
    ts.push_back(o.t0 + (o.t1 - o.t0) * static_cast<double>(k) / static_cast<double>(o.steps - 1));
  }
  return ts;
}

CaseResult flip_case(const CaseOptions& opts) {
  CaseResult r;
  r.name = "flip";
  const Superoperator flip = maps::flip();
  const CMatrix bad = extend_with_identity(flip, 2).apply(singlet().mat());
  const auto sigma = pauli::xyz();
  const char* names[] = {"xx", "yy", "zz"};
  const double expected[] = {-1.0, -1.0, 1.0};
  for (std::size_t i = 0; i < 3; ++i) {
    r.near(std::string("flipped singlet <") + names[i] + ">", expectation(bad, kron(sigma[i], sigma[i])), expected[i],
           1e-10);
  }
  r.near("flipped singlet <P_Psi+>", expectation(bad, bell_projector(Bell::kPsiPlus)), -0.5, 1e-10);
  const auto spectrum = herm_eig(choi_of(flip).mat).eigenvalues;
  const double choi_expected[] = {-1.0, 1.0, 1.0, 1.0};
  for (std::size_t k = 0; k < 4; ++k) r.near("Choi eigenvalue " + std::to_string(k), spectrum[k], choi_expected[k], 1e-9);
  const PositivityReport pos = is_positive_map(flip, {2000, 50, opts.seed});
  r.values.emplace_back("positivity search lambda_min", pos.search_min_eigenvalue);
  r.values.emplace_back("positivity samples", static_cast<double>(pos.samples_used));
  r.flag("flip is positive (no violation in 2000-point lattice)", pos.is_positive == PositivityVerdict::kNoViolationFound);
  r.flag("flip is not CP", !pos.is_cp);
  r.flag("flipped singlet is not a state", validate(bad).verdict == StateVerdict::kNegative);
  return r;
}

CaseResult four_state_case(const CaseOptions&) {
  CaseResult r;
  r.name = "four-state";
  const BipartiteDims dims{2, 2};
  const std::vector<std::string> names = {"x+", "x-", "z+", "z-"};
  const DensityMatrix xp = axis_state('x', 1), xm = axis_state('x', -1), zp = axis_state('z', 1),
                      zm = axis_state('z', -1);
  const DensityMatrix psi_p = axis_state('z', 1), psi_m = axis_state('z', -1);
  const DensityMatrix mixed = DensityMatrix::maximally_mixed(2);
  auto entry = [](const DensityMatrix& s, const DensityMatrix& e) { return TableEntry{s, DensityMatrix(kron(s.mat(), e.mat()))}; };

  const AssignmentMap table = AssignmentMap::tabulated(
      dims, {entry(xp, psi_p), entry(xm, psi_m), entry(zp, mixed), entry(zm, mixed)});
  const ExtensionResult ext = extend_linearly(table);
  r.flag("correlated table has no linear extension (conflict)", !ext.is_extension());
  if (!ext.is_extension()) {
    const Conflict& c = ext.conflict();
    CMatrix second(2, 2);
    for (std::size_t k = 0; k < 4; ++k) second += c.second.weights[k] * table.as_tabulated()->entries[k].system.mat();
    r.notes.push_back("decomposition A: " + describe(c.first, names));
    r.notes.push_back("decomposition B: " + describe(c.second, names));
    r.at_most("decomposition A recombines to I/2", max_abs_diff(c.state, mixed.mat()), 1e-12);
    r.at_most("decomposition B recombines to I/2", max_abs_diff(second, mixed.mat()), 1e-12);
    r.near("image trace distance", c.image_distance, 1.0, 1e-9);
  }

  const DensityMatrix tau = from_bloch({0.2, 0.0, 0.3});
  const AssignmentMap equal = AssignmentMap::tabulated(dims, {entry(xp, tau), entry(xm, tau), entry(zp, tau), entry(zm, tau)});
  const ExtensionResult ext2 = extend_linearly(equal);
  r.flag("equal reservoir states extend linearly", ext2.is_extension());
  if (ext2.is_extension()) {
    const double diff = max_abs_diff(ext2.extension().linear_extension().transfer(),
                                     AssignmentMap::product(2, tau).linear_extension().transfer());
    r.at_most("extension differs from product map by", diff, 1e-10);
  }
  return r;
}

CaseResult pechukas_case(const CaseOptions& opts) {
  CaseResult r;
  r.name = "pechukas";
  const AssignmentMap phi = assignments::correlated(opts.c);
  const WitnessResult w = pechukas_witness(phi, {2000, 50, opts.seed});
  r.near("witness lambda_min", w.min_eigenvalue, -std::abs(opts.c) / 4.0, 1e-3);
  r.flag("witness found", w.witness.has_value() || opts.c == 0.0);
  if (w.witness) {
    const BlochVector b = to_bloch(w.witness->mat());
    r.values.emplace_back("witness r_x", b.x);
    r.values.emplace_back("witness r_y", b.y);
    r.values.emplace_back("witness r_z", b.z);
    r.at_least("witness |r_z|", std::abs(b.z), 0.99);
  }
  const WitnessResult p = pechukas_witness(AssignmentMap::product(2, from_bloch({0.0, 0.0, 0.4})), {2000, 50, opts.seed});
  r.flag("product assignment: none found", !p.witness.has_value());
  return r;
}

CaseResult correlated_case(const CaseOptions& opts) {
  CaseResult r;
  r.name = "correlated";
  const double c = opts.c;
  const AssignmentMap phi = assignments::correlated(c);
  const DomainQuery q = DomainQuery::assignment(phi);
  const Membership center = membership(q, DensityMatrix::maximally_mixed(2).mat());
  r.near("lambda_min at I/2", center.min_eigenvalue, (1.0 - std::abs(c)) / 4.0, 1e-9);
  r.flag("I/2 is a member", center.member);
  const Membership pole = membership(q, axis_state('z', 1).mat());
  r.near("lambda_min at z+", pole.min_eigenvalue, c == 0.0 ? 0.0 : -std::abs(c) / 4.0, 1e-9);
  r.flag("z+ membership matches sign of c", pole.member == (c == 0.0));
  if (center.member) {
    // Membership admits lambda_min >= -tol, which moves the analytic crossing
    // (1 - r - |c|) / 4 = 0, resp. (1 - sqrt(r^2 + c^2)) / 4 = 0, by O(tol).
    const double tol = default_tolerance();
    const double z_expected = std::min(1.0, 1.0 - std::abs(c) + 4.0 * tol);
    const double x_expected = std::min(1.0, std::sqrt((1.0 + 4.0 * tol) * (1.0 + 4.0 * tol) - c * c));
    r.near("boundary radius along z", boundary_radius(q, {0, 0, 1}), z_expected, 1e-6);
    r.near("boundary radius along x", boundary_radius(q, {1, 0, 0}), x_expected, 1e-6);
  }
  const WitnessResult w = pechukas_witness(phi, {2000, 50, opts.seed});
  r.near("witness lambda_min", w.min_eigenvalue, -std::abs(c) / 4.0, 1e-3);

  const ReducedDynamics rd(phi, Generator::unitary(cnot_reservoir_controls_system()));
  const PositivityReport cp = is_cp(reduced_map(rd, 0.0));
  r.near("Lambda (CNOT, reservoir control) Choi lambda_min", cp.min_choi_eigenvalue,
         (1.0 - std::sqrt(1.0 + c * c)) / 2.0, 1e-9);
  r.notes.push_back(std::string("linear extension of Lambda is ") + (cp.is_cp ? "CP" : "NCP"));
  return r;
}

CaseResult inconsistent_case(const CaseOptions& opts) {
  CaseResult r;
  r.name = "inconsistent";
  const DensityMatrix tau = DensityMatrix::maximally_mixed(2);
  const AssignmentMap deph = assignments::dephasing_product(tau, 2);
  const DensityMatrix xp = axis_state('x', 1);
  const Generator h = Generator::hamiltonian(kron(pauli::Z(), pauli::X()));
  const auto times = time_grid(opts);

  const TrajectoryReport rep = inconsistency_analysis(deph, xp, kron(xp.mat(), tau.mat()), h, times);
  r.near("fixed-point offset ||rho - tr_R Phi rho||_1", rep.fixed_point_offset, 1.0, 1e-9);
  if (!times.empty() && times.front() == 0.0) r.near("delta(0)", rep.deviation.front(), rep.fixed_point_offset, 1e-9);
  double worst = 0.0;
  for (double d : rep.deviation) worst = std::max(worst, d);
  r.values.emplace_back("max delta(t)", worst);

  const AssignmentMap phi = assignments::correlated(opts.c);
  const DensityMatrix center = DensityMatrix::maximally_mixed(2);
  const TrajectoryReport ok = inconsistency_analysis(phi, center, assign(phi, center), h, times);
  double ok_worst = ok.fixed_point_offset;
  for (double d : ok.deviation) ok_worst = std::max(ok_worst, d);
  r.at_most("consistent assignment: offset and delta(t)", ok_worst, 1e-12);
  return r;
}

}  // namespace

bool CaseResult::pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return !checks.empty();
}

void CaseResult::near(std::string label, double actual, double expected, double tolerance) {
  checks.push_back({std::move(label), actual, expected, tolerance, CaseCheck::Relation::kNear,
                    std::abs(actual - expected) <= tolerance});
}

void CaseResult::at_most(std::string label, double actual, double bound) {
  checks.push_back({std::move(label), actual, bound, 0.0, CaseCheck::Relation::kAtMost, actual <= bound});
}

void CaseResult::at_least(std::string label, double actual, double bound) {
  checks.push_back({std::move(label), actual, bound, 0.0, CaseCheck::Relation::kAtLeast, actual >= bound});
}

void CaseResult::flag(std::string label, bool ok) {
  checks.push_back({std::move(label), ok ? 1.0 : 0.0, 1.0, 0.0, CaseCheck::Relation::kNear, ok});
}

std::string CaseResult::text() const {
  std::ostringstream os;
  os << "case " << name << "\n";
  for (const auto& [label, v] : values) os << "  " << label << " = " << fmt(v) << "\n";
  for (const auto& n : notes) os << "  " << n << "\n";
  for (const auto& c : checks) {
    os << "  [" << (c.pass ? "PASS" : "FAIL") << "] " << c.label << ": " << fmt(c.actual);
    switch (c.relation) {
      case CaseCheck::Relation::kNear:
        os << " (expected " << fmt(c.expected) << " +/- " << c.tolerance << ")";
        break;
      case CaseCheck::Relation::kAtMost: os << " (<= " << c.expected << ")"; break;
      case CaseCheck::Relation::kAtLeast: os << " (>= " << c.expected << ")"; break;
    }
    os << "\n";
  }
  os << "result: " << (pass() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

nlohmann::json CaseResult::to_json() const {
  nlohmann::json j;
  j["case"] = name;
  j["pass"] = pass();
  nlohmann::json vals = nlohmann::json::object();
  for (const auto& [label, v] : values) vals[label] = v;
  j["values"] = std::move(vals);
  j["notes"] = notes;
  nlohmann::json cs = nlohmann::json::array();
  for (const auto& c : checks) {
    const char* rel = c.relation == CaseCheck::Relation::kNear ? "near"
                      : c.relation == CaseCheck::Relation::kAtMost ? "at_most" : "at_least";
    cs.push_back({{"label", c.label}, {"actual", c.actual}, {"expected", c.expected},
                  {"tolerance", c.tolerance}, {"relation", rel}, {"pass", c.pass}});
  }
  j["checks"] = std::move(cs);
  return j;
}

const std::vector<std::string>& case_names() {
  static const std::vector<std::string> names = {"flip", "four-state", "pechukas", "correlated", "inconsistent"};
  return names;
}

CaseResult run_case(const std::string& name, const CaseOptions& opts) {
  if (!(opts.c >= -1.0 && opts.c <= 1.0)) throw std::invalid_argument("--c must lie in [-1, 1]");
  if (opts.steps == 0 || !(opts.t1 >= opts.t0)) throw std::invalid_argument("invalid --times range");
  if (name == "flip") return flip_case(opts);
  if (name == "four-state") return four_state_case(opts);
  if (name == "pechukas") return pechukas_case(opts);
  if (name == "correlated") return correlated_case(opts);
  if (name == "inconsistent") return inconsistent_case(opts);
  throw std::invalid_argument("unknown case '" + name + "'");
}

}  // namespace qdyn
