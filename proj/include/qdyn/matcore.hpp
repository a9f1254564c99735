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

#ifndef QDYN_MATCORE_HPP_
#define QDYN_MATCORE_HPP_

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <stdexcept>
#include <vector>

namespace qdyn {

using cplx = std::complex<double>;

/// Raised when operand shapes do not fit the requested operation.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an operation needs a Hermitian matrix and does not get one.
class NotHermitianError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

//============================================================================
// Tolerance configuration
//============================================================================

// Read-only after startup by convention; the CLI sets it once from --tol.
double default_tolerance();
void set_default_tolerance(double tol);

//============================================================================
// CMatrix
//============================================================================

// Dense complex matrix, row-major.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols);
  CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);
  CMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

  static CMatrix identity(std::size_t n);
  static CMatrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }
  static CMatrix diag(const std::vector<cplx>& d);
  static CMatrix diag(const std::vector<double>& d);
  // |i><j| in dimension n.
  static CMatrix unit(std::size_t n, std::size_t i, std::size_t j);
  // Outer product v w^dagger of two column vectors given as entry lists.
  static CMatrix outer(const std::vector<cplx>& v, const std::vector<cplx>& w);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  bool empty() const { return data_.empty(); }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  const std::vector<cplx>& data() const { return data_; }

  CMatrix adjoint() const;
  CMatrix transpose() const;
  CMatrix conj() const;
  cplx trace() const;

  // Column `j` as an entry list.
  std::vector<cplx> column(std::size_t j) const;

  // Max absolute row sum.
  double norm_inf() const;
  double norm_frobenius() const;
  // Largest absolute entry.
  double max_abs() const;

  CMatrix& operator+=(const CMatrix& o);
  CMatrix& operator-=(const CMatrix& o);
  CMatrix& operator*=(cplx z);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

CMatrix operator+(CMatrix a, const CMatrix& b);
CMatrix operator-(CMatrix a, const CMatrix& b);
CMatrix operator-(CMatrix a);
CMatrix operator*(const CMatrix& a, const CMatrix& b);
CMatrix operator*(CMatrix a, cplx z);
CMatrix operator*(cplx z, CMatrix a);
CMatrix operator*(CMatrix a, double z);
CMatrix operator*(double z, CMatrix a);
std::ostream& operator<<(std::ostream& os, const CMatrix& m);

// Matrix-vector product.
std::vector<cplx> apply(const CMatrix& m, const std::vector<cplx>& v);

// Entrywise max |a - b|; shapes must match.
double max_abs_diff(const CMatrix& a, const CMatrix& b);
bool approx_equal(const CMatrix& a, const CMatrix& b, double tol);

//============================================================================
// Hermitian utilities
//============================================================================

double hermiticity_residual(const CMatrix& m);
bool is_hermitian(const CMatrix& m, double tol = default_tolerance());
// (m + m^dagger) / 2
CMatrix hermitian_part(const CMatrix& m);

struct HermEig {
  std::vector<double> eigenvalues;  // ascending
  CMatrix eigenvectors;             // columns are eigenvectors
};

// Cyclic complex Jacobi. Throws NotHermitianError when the hermiticity
// residual exceeds tol * max(1, ||m||_inf).
HermEig herm_eig(const CMatrix& m);

// Eigen-decomposition of the Hermitian part, no input check.
HermEig herm_eig_unchecked(const CMatrix& m);

double min_eigenvalue(const CMatrix& m);

// PSD acceptance: lambda_min >= -tol * max(1, ||m||_inf).
double psd_threshold(const CMatrix& m, double tol = default_tolerance());
bool is_psd(const CMatrix& m, double tol = default_tolerance());

// Sum of singular values.
double trace_norm(const CMatrix& m);

// exp(-i h t) for Hermitian h.
CMatrix unitary_at(const CMatrix& h, double t);

double unitarity_residual(const CMatrix& u);

//============================================================================
// Tensor structure
//============================================================================

enum class Subsystem { kSystem, kReservoir };

struct BipartiteDims {
  std::size_t system = 0;
  std::size_t reservoir = 0;
  std::size_t total() const { return system * reservoir; }
};

CMatrix kron(const CMatrix& a, const CMatrix& b);

// Traces out the subsystem that is *not* `keep`. Ordering is system (x) reservoir.
CMatrix partial_trace(const CMatrix& m, BipartiteDims dims, Subsystem keep);

// Transposes the `which` tensor factor.
CMatrix partial_transpose(const CMatrix& m, BipartiteDims dims, Subsystem which);

}  // namespace qdyn

#endif  // QDYN_MATCORE_HPP_
