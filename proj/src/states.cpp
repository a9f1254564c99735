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


#include "qdyn/states.hpp"

#include <cmath>

namespace qdyn {

namespace pauli {
CMatrix I() { return CMatrix::identity(2); }
CMatrix X() { return {{0.0, 1.0}, {1.0, 0.0}}; }
CMatrix Y() { return {{0.0, cplx{0.0, -1.0}}, {cplx{0.0, 1.0}, 0.0}}; }
CMatrix Z() { return {{1.0, 0.0}, {0.0, -1.0}}; }
std::array<CMatrix, 3> xyz() { return {X(), Y(), Z()}; }
}  // namespace pauli

std::string to_string(StateVerdict v) {
  switch (v) {
    case StateVerdict::kValid: return "valid";
    case StateVerdict::kNegative: return "negative";
    case StateVerdict::kNonUnitTrace: return "non-unit-trace";
    case StateVerdict::kNonHermitian: return "non-hermitian";
  }
  return "unknown";
}

Diagnostic validate(const CMatrix& m, double tol) {
  if (!m.is_square()) throw DimensionError("validate: matrix must be square");
  Diagnostic d;
  const double scale = std::max(1.0, m.norm_inf());
  d.hermiticity_residual = hermiticity_residual(m);
  d.trace_residual = std::abs(m.trace() - cplx{1.0, 0.0});
  d.min_eigenvalue = min_eigenvalue(m);
  if (d.hermiticity_residual > tol * scale) {
    d.verdict = StateVerdict::kNonHermitian;
  } else if (d.trace_residual > tol) {
    d.verdict = StateVerdict::kNonUnitTrace;
  } else if (d.min_eigenvalue < -tol * scale) {
    d.verdict = StateVerdict::kNegative;
  }
  return d;
}

DensityMatrix::DensityMatrix(CMatrix m, double tol) : mat_(std::move(m)) {
  if (!mat_.is_square() || mat_.empty()) throw InvalidStateError("density matrix must be square and non-empty");
  const Diagnostic d = validate(mat_, tol);
  if (!d.valid()) {
    throw InvalidStateError("not a density matrix: " + to_string(d.verdict) +
                            " (lambda_min " + std::to_string(d.min_eigenvalue) + ")");
  }
}

DensityMatrix DensityMatrix::pure(const std::vector<cplx>& ket) {
  double n2 = 0.0;
  for (const auto& z : ket) n2 += std::norm(z);
  if (n2 <= 0.0) throw InvalidStateError("pure: zero vector");
  CMatrix p = CMatrix::outer(ket, ket);
  p *= 1.0 / n2;
  return DensityMatrix(std::move(p));
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
  return DensityMatrix(CMatrix::identity(dim) * (1.0 / static_cast<double>(dim)));
}

double DensityMatrix::purity() const { return (mat_ * mat_).trace().real(); }

double BlochVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

DensityMatrix from_bloch(const BlochVector& r) {
  if (r.norm() > 1.0 + 1e-12) {
    throw InvalidStateError("Bloch vector outside the unit ball (|r| = " + std::to_string(r.norm()) + ")");
  }
  CMatrix m = pauli::I() + r.x * pauli::X() + r.y * pauli::Y() + r.z * pauli::Z();
  m *= 0.5;
  // A boundary vector with |r| slightly above 1 is clipped by the PSD tolerance.
  return DensityMatrix(std::move(m));
}

BlochVector to_bloch(const CMatrix& m) {
  if (m.rows() != 2 || m.cols() != 2) throw DimensionError("to_bloch: qubit matrix required");
  return {expectation(m, pauli::X()), expectation(m, pauli::Y()), expectation(m, pauli::Z())};
}

DensityMatrix axis_state(char axis, int sign) {
  const double s = sign >= 0 ? 1.0 : -1.0;
  switch (axis) {
    case 'x': return from_bloch({s, 0.0, 0.0});
    case 'y': return from_bloch({0.0, s, 0.0});
    case 'z': return from_bloch({0.0, 0.0, s});
    default: throw std::invalid_argument(std::string("axis_state: unknown axis ") + axis);
  }
}

double expectation(const CMatrix& m, const CMatrix& a) {
  if (!m.is_square() || m.rows() != a.rows() || a.rows() != a.cols()) {
    throw DimensionError("expectation: dimension mismatch");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t k = 0; k < m.cols(); ++k) s += (m(i, k) * a(k, i)).real();
  return s;
}

double expectation(const DensityMatrix& rho, const CMatrix& a) { return expectation(rho.mat(), a); }

std::vector<cplx> bell_ket(Bell which) {
  const double h = 1.0 / std::sqrt(2.0);
  switch (which) {
    case Bell::kPhiPlus: return {h, 0.0, 0.0, h};
    case Bell::kPhiMinus: return {h, 0.0, 0.0, -h};
    case Bell::kPsiPlus: return {0.0, h, h, 0.0};
    case Bell::kPsiMinus: return {0.0, h, -h, 0.0};
  }
  return {};
}

DensityMatrix bell_state(Bell which) { return DensityMatrix::pure(bell_ket(which)); }

CMatrix bell_projector(Bell which) {
  const auto k = bell_ket(which);
  return CMatrix::outer(k, k);
}

DensityMatrix singlet() { return bell_state(Bell::kPsiMinus); }

}  // namespace qdyn
