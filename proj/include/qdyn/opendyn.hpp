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


#ifndef QDYN_OPENDYN_HPP_
#define QDYN_OPENDYN_HPP_

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qdyn/channels.hpp"
#include "qdyn/matcore.hpp"
#include "qdyn/states.hpp"

namespace qdyn {

/// Raised when a tabulated assignment is asked about a state it does not hold.
class TableMissError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

//============================================================================
// Assignment maps
//============================================================================

struct ProductAssignment {
  DensityMatrix reservoir;
};

// rho -> linear(rho) + tr(rho) * constant. On states this is the affine map
// linear(rho) + constant; the trace factor makes it linear on all matrices.
struct AffineAssignment {
  Superoperator linear;
  CMatrix constant;
};

struct TableEntry {
  DensityMatrix system;
  DensityMatrix joint;
};

struct TabulatedAssignment {
  std::vector<TableEntry> entries;
  bool inconsistent = false;
};

enum class AssignmentKind { kProduct, kAffine, kTabulated };

std::string to_string(AssignmentKind k);

class AssignmentMap {
 public:
  static AssignmentMap product(std::size_t system_dim, DensityMatrix reservoir);
  static AssignmentMap affine(BipartiteDims dims, Superoperator linear, CMatrix constant);
  // Unless `inconsistent` is set, every entry must satisfy tr_R joint = system.
  static AssignmentMap tabulated(BipartiteDims dims, std::vector<TableEntry> entries, bool inconsistent = false,
                                 double tol = default_tolerance());

  BipartiteDims dims() const { return dims_; }
  AssignmentKind kind() const;
  bool totally_defined() const { return kind() != AssignmentKind::kTabulated; }

  const ProductAssignment* as_product() const { return std::get_if<ProductAssignment>(&rep_); }
  const AffineAssignment* as_affine() const { return std::get_if<AffineAssignment>(&rep_); }
  const TabulatedAssignment* as_tabulated() const { return std::get_if<TabulatedAssignment>(&rep_); }

  // Linear map d_s x d_s -> (d_s d_r) x (d_s d_r) agreeing with the assignment
  // on states. Throws std::logic_error for tabulated maps.
  Superoperator linear_extension() const;

 private:
  using Rep = std::variant<ProductAssignment, AffineAssignment, TabulatedAssignment>;
  AssignmentMap(BipartiteDims dims, Rep rep) : dims_(dims), rep_(std::move(rep)) {}

  BipartiteDims dims_;
  Rep rep_;
};

// Candidate joint matrix. Hermitian with unit trace, but not necessarily PSD.
// Throws TableMissError for a tabulated map without a matching entry.
CMatrix assign(const AssignmentMap& phi, const DensityMatrix& rho, double tol = default_tolerance());

namespace assignments {
// rho(r) -> (I (x) I + sum_i r_i sigma_i (x) I + c sigma_z (x) sigma_z) / 4
AssignmentMap correlated(double c);
// rho -> (sum_i |i><i| rho |i><i|) (x) reservoir; inconsistent for coherent rho.
AssignmentMap dephasing_product(const DensityMatrix& reservoir, std::size_t system_dim);
}  // namespace assignments

//============================================================================
// Audits
//============================================================================

struct ConsistencyReport {
  double max_residual = 0.0;      // max ||tr_R Phi rho - rho||_1
  std::size_t worst_probe = 0;
  std::size_t probes = 0;
  bool consistent = true;
};

// Tabulated maps are checked on their own entries and ignore `probes`.
ConsistencyReport check_consistency(const AssignmentMap& phi, const std::vector<DensityMatrix>& probes,
                                    double tol = default_tolerance());

// max |transfer(tr_R o Phi) - id| for a totally defined map; covers all states.
double consistency_residual(const AssignmentMap& phi);

struct LinearityProbe {
  DensityMatrix first;
  DensityMatrix second;
  double weight;  // in [0, 1], applied to `first`
};

enum class ProbeStatus { kDefined, kUndefined };

struct LinearityEntry {
  ProbeStatus status;
  double residual;  // 0 when undefined
};

struct LinearityReport {
  std::vector<LinearityEntry> entries;
  double max_residual = 0.0;
  std::size_t undefined = 0;
};

// Residual ||Phi(w a + (1-w) b) - w Phi a - (1-w) Phi b||_1 per probe. For
// tabulated maps a mixture outside the table is reported undefined, never as
// a violation.
LinearityReport check_linearity(const AssignmentMap& phi, const std::vector<LinearityProbe>& probes,
                                double tol = default_tolerance());

// Pure states from a small deterministic set plus `random_count` seeded mixed states.
std::vector<DensityMatrix> standard_probes(std::size_t dim, std::size_t random_count, std::uint64_t seed);

//============================================================================
// Reduced dynamics
//============================================================================

class Generator {
 public:
  static Generator unitary(CMatrix u, double tol = default_tolerance());
  static Generator hamiltonian(CMatrix h, double tol = default_tolerance());

  bool is_hamiltonian() const { return hamiltonian_; }
  const CMatrix& matrix() const { return m_; }
  std::size_t dim() const { return m_.rows(); }

  // exp(-i H t) for a Hamiltonian; the fixed unitary otherwise (t ignored).
  CMatrix at(double t) const;

 private:
  Generator(CMatrix m, bool hamiltonian) : m_(std::move(m)), hamiltonian_(hamiltonian) {}
  CMatrix m_;
  bool hamiltonian_;
};

struct ReducedDynamics {
  ReducedDynamics(AssignmentMap phi, Generator generator);

  AssignmentMap phi;
  Generator generator;
};

// Linear extension of rho -> tr_R(U_t Phi(rho) U_t^dagger). Throws
// std::logic_error for tabulated assignments (use extend_linearly first).
Superoperator reduced_map(const ReducedDynamics& rd, double t);

//============================================================================
// Extension of tabulated maps
//============================================================================

struct ConvexDecomposition {
  std::vector<double> weights;  // one per table entry, non-negative, sum 1
};

struct Conflict {
  ConvexDecomposition first;
  ConvexDecomposition second;
  CMatrix state;         // common system state of both decompositions
  CMatrix image_first;
  CMatrix image_second;
  double image_distance; // ||image_first - image_second||_1
  double residual_norm;  // Frobenius norm of the interpolation residual
};

struct ExtensionResult {
  std::variant<AssignmentMap, Conflict> outcome;

  bool is_extension() const { return std::holds_alternative<AssignmentMap>(outcome); }
  const AssignmentMap& extension() const { return std::get<AssignmentMap>(outcome); }
  const Conflict& conflict() const { return std::get<Conflict>(outcome); }
};

// Affine interpolation of a table. On the affine hull of the table states the
// extension is unique; off the hull it is completed as the product map
// rho -> rho (x) tau plus the minimal-norm correction, with tau the reservoir
// marginal of the mean table image.
ExtensionResult extend_linearly(const AssignmentMap& phi, double tol = default_tolerance());

//============================================================================
// Positivity witnesses and trajectories
//============================================================================

struct WitnessResult {
  std::optional<DensityMatrix> witness;
  double min_eigenvalue;  // smallest lambda_min(Phi rho) found
  std::size_t samples_used;
};

// Searches pure states for lambda_min(Phi rho) < -tol. Throws
// std::invalid_argument when phi is not consistent or not totally defined.
WitnessResult pechukas_witness(const AssignmentMap& phi, const SearchOptions& opts = {},
                               double tol = default_tolerance());

struct TrajectoryReport {
  std::vector<double> times;
  double fixed_point_offset = 0.0;  // ||rho_S - tr_R Phi rho_S||_1
  std::vector<double> deviation;    // per time
};

// Compares the true joint evolution with the one started from Phi(rho_S).
// Throws std::invalid_argument when tr_R(true_initial) != rho_S.
TrajectoryReport inconsistency_analysis(const AssignmentMap& phi, const DensityMatrix& rho_s,
                                        const CMatrix& true_initial, const Generator& generator,
                                        const std::vector<double>& times, double tol = default_tolerance());

}  // namespace qdyn

#endif  // QDYN_OPENDYN_HPP_
