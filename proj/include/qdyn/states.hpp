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


#ifndef QDYN_STATES_HPP_
#define QDYN_STATES_HPP_

#include <array>
#include <string>
#include <vector>

#include "qdyn/matcore.hpp"

namespace qdyn {

/// Raised when a matrix fails the density-matrix invariants.
class InvalidStateError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace pauli {
CMatrix I();
CMatrix X();
CMatrix Y();
CMatrix Z();
// (X, Y, Z)
std::array<CMatrix, 3> xyz();
}  // namespace pauli

//============================================================================
// Validation
//============================================================================

enum class StateVerdict { kValid, kNegative, kNonUnitTrace, kNonHermitian };

std::string to_string(StateVerdict v);

struct Diagnostic {
  double hermiticity_residual = 0.0;
  double trace_residual = 0.0;
  double min_eigenvalue = 0.0;
  StateVerdict verdict = StateVerdict::kValid;

  bool valid() const { return verdict == StateVerdict::kValid; }
};

// Never throws for square input. Checks run in the order hermiticity, trace,
// positivity; the first failure decides the verdict.
Diagnostic validate(const CMatrix& m, double tol = default_tolerance());

//============================================================================
// DensityMatrix
//============================================================================

class DensityMatrix {
 public:
  // Throws InvalidStateError unless validate(m) is kValid.
  explicit DensityMatrix(CMatrix m, double tol = default_tolerance());

  // Normalised projector onto `ket`.
  static DensityMatrix pure(const std::vector<cplx>& ket);
  static DensityMatrix maximally_mixed(std::size_t dim);

  std::size_t dim() const { return mat_.rows(); }
  const CMatrix& mat() const { return mat_; }
  operator const CMatrix&() const { return mat_; }  // NOLINT(google-explicit-constructor)

  double purity() const;

 private:
  CMatrix mat_;
};

//============================================================================
// Qubit Bloch chart
//============================================================================

struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const;
  BlochVector scaled(double s) const { return {x * s, y * s, z * s}; }
};

// (I + r.sigma) / 2. Throws InvalidStateError when |r| > 1 + 1e-12.
DensityMatrix from_bloch(const BlochVector& r);
// Real parts of tr(rho sigma_i); `m` must be 2x2.
BlochVector to_bloch(const CMatrix& m);
// Named axis states x+, x-, y+, y-, z+, z-.
DensityMatrix axis_state(char axis, int sign);

//============================================================================
// Expectations and entangled states
//============================================================================

// Real part of tr(m a). Works on any square m so that non-positive functionals
// (outputs of NCP maps) can be evaluated too.
double expectation(const CMatrix& m, const CMatrix& a);
double expectation(const DensityMatrix& rho, const CMatrix& a);

enum class Bell { kPhiPlus, kPhiMinus, kPsiPlus, kPsiMinus };

std::vector<cplx> bell_ket(Bell which);
DensityMatrix bell_state(Bell which);
CMatrix bell_projector(Bell which);
// (|01> - |10>) / sqrt(2)
DensityMatrix singlet();

}  // namespace qdyn

#endif  // QDYN_STATES_HPP_
