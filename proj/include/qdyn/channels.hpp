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


#ifndef QDYN_CHANNELS_HPP_
#define QDYN_CHANNELS_HPP_

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qdyn/matcore.hpp"
#include "qdyn/sampling.hpp"
#include "qdyn/states.hpp"

namespace qdyn {

/// Raised by kraus_from_choi when the Choi matrix has a negative eigenvalue.
class NcpMapError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

//============================================================================
// Vectorization
//============================================================================

// Column stacking: vec(X)[i + j * rows] = X(i, j). With this convention the
// transfer matrix of X -> A X B^dagger is conj(B) (x) A.
std::vector<cplx> vec(const CMatrix& m);
CMatrix unvec(const std::vector<cplx>& v, std::size_t rows, std::size_t cols);

//============================================================================
// Representations
//============================================================================

// Linear map from dim_in x dim_in to dim_out x dim_out matrices, held as its
// dim_out^2 x dim_in^2 transfer matrix.
class Superoperator {
 public:
  using Action = std::function<CMatrix(const CMatrix&)>;

  Superoperator(std::size_t dim_in, std::size_t dim_out, CMatrix transfer);

  // Builds the transfer matrix by applying `action` to every matrix unit.
  static Superoperator from_action(std::size_t dim_in, std::size_t dim_out, const Action& action);
  static Superoperator identity(std::size_t dim);

  std::size_t dim_in() const { return dim_in_; }
  std::size_t dim_out() const { return dim_out_; }
  const CMatrix& transfer() const { return transfer_; }

  CMatrix apply(const CMatrix& m) const;
  CMatrix operator()(const CMatrix& m) const { return apply(m); }

 private:
  std::size_t dim_in_;
  std::size_t dim_out_;
  CMatrix transfer_;
};

// outer o inner
Superoperator compose(const Superoperator& outer, const Superoperator& inner);

// T (x) id_n acting on (system (x) witness) matrices.
Superoperator extend_with_identity(const Superoperator& t, std::size_t n);

// Heisenberg-picture dual with respect to the Hilbert-Schmidt product;
// its transfer matrix is the adjoint of the original.
Superoperator adjoint_map(const Superoperator& t);

// max_ij |tr T(E_ij) - delta_ij|
double trace_preservation_residual(const Superoperator& t);
// max |T(I) - I|; infinite when dim_in != dim_out.
double unitality_residual(const Superoperator& t);
// Worst hermiticity residual of T(X) over Hermitian basis inputs.
double hermiticity_preservation_residual(const Superoperator& t);

// Unnormalized: C = sum_ij E_ij (x) T(E_ij), size dim_in * dim_out.
struct ChoiMatrix {
  std::size_t dim_in = 0;
  std::size_t dim_out = 0;
  CMatrix mat;
};

ChoiMatrix choi_of(const Superoperator& t);
Superoperator transfer_from_choi(const ChoiMatrix& c);

enum class Completeness { kTracePreserving, kSelective };

class KrausSet {
 public:
  // Verifies the declared completeness class within tol; throws
  // std::invalid_argument otherwise.
  KrausSet(std::vector<CMatrix> ops, Completeness completeness, double tol = default_tolerance());

  const std::vector<CMatrix>& ops() const { return ops_; }
  Completeness completeness() const { return completeness_; }
  std::size_t dim_in() const { return ops_.front().cols(); }
  std::size_t dim_out() const { return ops_.front().rows(); }
  std::size_t size() const { return ops_.size(); }

  // sum_i W_i^dagger W_i
  CMatrix gram() const;

 private:
  std::vector<CMatrix> ops_;
  Completeness completeness_;
};

Superoperator transfer_from_kraus(const KrausSet& k);

// Kraus operators from Choi eigenvectors, ordered by descending eigenvalue,
// eigenvalues <= tol * max(1, ||C||) dropped. Throws NcpMapError when C is not
// PSD. The completeness class is trace-preserving when the map is, selective
// when sum W^dagger W <= I, and the call throws otherwise.
KrausSet kraus_from_choi(const ChoiMatrix& c, double tol = default_tolerance());

//============================================================================
// Positivity verdicts
//============================================================================

enum class PositivityVerdict { kCertifiedViolation, kNoViolationFound };

std::string to_string(PositivityVerdict v);

struct SearchOptions {
  std::size_t budget = 2000;     // lattice points (qubits) or random states
  std::size_t descent_steps = 50;
  std::uint64_t seed = 0;
};

struct PositivityReport {
  double min_choi_eigenvalue = 0.0;
  bool is_cp = false;
  PositivityVerdict is_positive = PositivityVerdict::kNoViolationFound;
  std::optional<DensityMatrix> witness;
  // Smallest output eigenvalue reached by the search (0 when no search ran).
  double search_min_eigenvalue = 0.0;
  // 0 means no positivity search was run.
  std::size_t samples_used = 0;
};

struct OutputMinimum {
  DensityMatrix state;
  double min_eigenvalue;
  std::size_t samples_used;
};

// Minimizes lambda_min of the Hermitian part of T(|psi><psi|) over pure
// inputs: a Fibonacci lattice of `budget` points for qubit inputs, `budget`
// seeded random kets otherwise, then a seesaw descent from the best sample.
OutputMinimum minimize_output_eigenvalue(const Superoperator& t, const SearchOptions& opts = {});

// Verdict from the Choi spectrum alone (no sampling).
PositivityReport is_cp(const Superoperator& t, double tol = default_tolerance());

// Pure-state violation search. A violation is certified only below -10 * tol.
PositivityReport is_positive_map(const Superoperator& t, const SearchOptions& opts = {},
                                 double tol = default_tolerance());

// Runs is_positive_map on T (x) id_n; the Choi fields describe T itself.
PositivityReport is_n_positive(const Superoperator& t, std::size_t n, const SearchOptions& opts = {},
                               double tol = default_tolerance());

//============================================================================
// Measurement
//============================================================================

struct LuedersOutcome {
  std::size_t index;
  double probability;
  DensityMatrix state;
};

// Throws std::invalid_argument unless the projectors are Hermitian,
// idempotent, mutually orthogonal and resolve the identity.
void check_projector_set(const std::vector<CMatrix>& projectors, std::size_t dim, double tol = default_tolerance());

// Outcomes with probability <= tol are omitted.
std::vector<LuedersOutcome> lueders(const DensityMatrix& rho, const std::vector<CMatrix>& projectors,
                                    double tol = default_tolerance());
DensityMatrix nonselective(const DensityMatrix& rho, const std::vector<CMatrix>& projectors,
                           double tol = default_tolerance());

struct SelectiveResult {
  double probability;
  std::optional<DensityMatrix> state;
};

SelectiveResult selective_apply(const KrausSet& k, const DensityMatrix& rho, double tol = default_tolerance());

//============================================================================
// Standard maps
//============================================================================

namespace maps {

Superoperator unitary(const CMatrix& u);
Superoperator transpose(std::size_t dim);
// Qubit map r -> M r on Bloch vectors, trace preserving and unital:
// X -> (tr(X) I + sum_ij M_ij tr(X sigma_j) sigma_i) / 2.
Superoperator bloch_linear(const std::array<std::array<double, 3>, 3>& m);
// (x, y, z) -> (x, y, -z)
Superoperator flip();
// Kraus {|i><i|}
Superoperator dephasing(std::size_t dim);
// X -> (1 - p) X + p tr(X) I / d
Superoperator depolarizing(std::size_t dim, double p);
// Random trace-preserving Kraus set from a Haar-like isometry.
KrausSet random_cptp_kraus(std::size_t dim, std::size_t kraus_count, Rng& rng);

}  // namespace maps

}  // namespace qdyn

#endif  // QDYN_CHANNELS_HPP_
