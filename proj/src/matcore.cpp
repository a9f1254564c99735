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

#include "qdyn/matcore.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>

namespace qdyn {

namespace {

std::atomic<double> g_tolerance{1e-9};

std::string shape(const CMatrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_same_shape(const CMatrix& a, const CMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(what) + ": shape mismatch " + shape(a) + " vs " + shape(b));
  }
}

void require_bipartite(const CMatrix& m, BipartiteDims dims, const char* what) {
  if (dims.system == 0 || dims.reservoir == 0 || !m.is_square() || m.rows() != dims.total()) {
    throw DimensionError(std::string(what) + ": matrix " + shape(m) + " does not match dims " +
                         std::to_string(dims.system) + "x" + std::to_string(dims.reservoir));
  }
}

}  // namespace

double default_tolerance() { return g_tolerance.load(std::memory_order_relaxed); }

void set_default_tolerance(double tol) {
  if (!(tol > 0.0) || !std::isfinite(tol)) {
    throw std::invalid_argument("tolerance must be positive and finite");
  }
  g_tolerance.store(tol, std::memory_order_relaxed);
}

//============================================================================
// CMatrix
//============================================================================

CMatrix::CMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, cplx{0.0, 0.0}) {}

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_) {
    throw DimensionError("CMatrix: " + std::to_string(data_.size()) + " entries for " +
                         std::to_string(rows_) + "x" + std::to_string(cols_));
  }
}

CMatrix::CMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionError("CMatrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::diag(const std::vector<cplx>& d) {
  CMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

CMatrix CMatrix::diag(const std::vector<double>& d) {
  CMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

CMatrix CMatrix::unit(std::size_t n, std::size_t i, std::size_t j) {
  CMatrix m(n, n);
  m(i, j) = 1.0;
  return m;
}

CMatrix CMatrix::outer(const std::vector<cplx>& v, const std::vector<cplx>& w) {
  CMatrix m(v.size(), w.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < w.size(); ++j) m(i, j) = v[i] * std::conj(w[j]);
  return m;
}

CMatrix CMatrix::adjoint() const {
  CMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

CMatrix CMatrix::transpose() const {
  CMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

CMatrix CMatrix::conj() const {
  CMatrix out = *this;
  for (auto& z : out.data_) z = std::conj(z);
  return out;
}

cplx CMatrix::trace() const {
  if (!is_square()) throw DimensionError("trace of non-square matrix " + shape(*this));
  cplx t = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

std::vector<cplx> CMatrix::column(std::size_t j) const {
  std::vector<cplx> v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

double CMatrix::norm_inf() const {
  double best = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) row += std::abs((*this)(i, j));
    best = std::max(best, row);
  }
  return best;
}

double CMatrix::norm_frobenius() const {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

double CMatrix::max_abs() const {
  double best = 0.0;
  for (const auto& z : data_) best = std::max(best, std::abs(z));
  return best;
}

CMatrix& CMatrix::operator+=(const CMatrix& o) {
  require_same_shape(*this, o, "operator+");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& o) {
  require_same_shape(*this, o, "operator-");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

CMatrix& CMatrix::operator*=(cplx z) {
  for (auto& x : data_) x *= z;
  return *this;
}

CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
CMatrix operator-(CMatrix a) { return a *= -1.0; }
CMatrix operator*(CMatrix a, cplx z) { return a *= z; }
CMatrix operator*(cplx z, CMatrix a) { return a *= z; }
CMatrix operator*(CMatrix a, double z) { return a *= z; }
CMatrix operator*(double z, CMatrix a) { return a *= z; }

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("matrix product: " + shape(a) + " * " + shape(b));
  }
  CMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx{0.0, 0.0}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

std::vector<cplx> apply(const CMatrix& m, const std::vector<cplx>& v) {
  if (m.cols() != v.size()) throw DimensionError("apply: vector length mismatch");
  std::vector<cplx> out(m.rows(), cplx{0.0, 0.0});
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i] += m(i, j) * v[j];
  return out;
}

std::ostream& operator<<(std::ostream& os, const CMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << "[";
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) os << ", ";
      os << m(i, j).real();
      if (m(i, j).imag() != 0.0) os << (m(i, j).imag() < 0 ? "-" : "+") << std::abs(m(i, j).imag()) << "i";
    }
    os << "]\n";
  }
  return os;
}

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  double d = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k) d = std::max(d, std::abs(a.data()[k] - b.data()[k]));
  return d;
}

bool approx_equal(const CMatrix& a, const CMatrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return max_abs_diff(a, b) <= tol;
}

//============================================================================
// Hermitian utilities
//============================================================================

double hermiticity_residual(const CMatrix& m) {
  if (!m.is_square()) throw DimensionError("hermiticity of non-square matrix " + shape(m));
  double r = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i; j < m.cols(); ++j) r = std::max(r, std::abs(m(i, j) - std::conj(m(j, i))));
  return r;
}

bool is_hermitian(const CMatrix& m, double tol) {
  return m.is_square() && hermiticity_residual(m) <= tol * std::max(1.0, m.norm_inf());
}

CMatrix hermitian_part(const CMatrix& m) {
  CMatrix h = m + m.adjoint();
  h *= 0.5;
  return h;
}

namespace {

// Cyclic Jacobi sweeps on the Hermitian part of m. Eigenvector accumulation is
// skipped when only the spectrum is needed.
HermEig jacobi(const CMatrix& m, bool want_vectors) {
  if (!m.is_square()) throw DimensionError("herm_eig of non-square matrix " + shape(m));
  const std::size_t n = m.rows();
  CMatrix a = hermitian_part(m);
  CMatrix v = want_vectors ? CMatrix::identity(n) : CMatrix();

  const double scale2 = std::max(a.norm_frobenius() * a.norm_frobenius(), 1e-300);
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    if (off <= 1e-32 * scale2) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag < 1e-300) continue;
        const cplx phase_conj = std::conj(apq) / mag;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        // R = diag(1, e^{-i phi}) * [[c, s], [-s, c]] on the (p, q) block.
        const cplx r_pp = c;
        const cplx r_pq = s;
        const cplx r_qp = -s * phase_conj;
        const cplx r_qq = c * phase_conj;

        for (std::size_t k = 0; k < n; ++k) {
          const cplx akp = a(k, p);
          const cplx akq = a(k, q);
          a(k, p) = akp * r_pp + akq * r_qp;
          a(k, q) = akp * r_pq + akq * r_qq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const cplx apk = a(p, k);
          const cplx aqk = a(q, k);
          a(p, k) = std::conj(r_pp) * apk + std::conj(r_qp) * aqk;
          a(q, k) = std::conj(r_pq) * apk + std::conj(r_qq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        if (!want_vectors) continue;
        for (std::size_t k = 0; k < n; ++k) {
          const cplx vkp = v(k, p);
          const cplx vkq = v(k, q);
          v(k, p) = vkp * r_pp + vkq * r_qp;
          v(k, q) = vkp * r_pq + vkq * r_qq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });
  HermEig out;
  out.eigenvalues.resize(n);
  if (want_vectors) out.eigenvectors = CMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]).real();
    if (want_vectors)
      for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, order[k]);
  }
  return out;
}

}  // namespace

HermEig herm_eig_unchecked(const CMatrix& m) { return jacobi(m, true); }

HermEig herm_eig(const CMatrix& m) {
  if (!is_hermitian(m)) {
    throw NotHermitianError("herm_eig: input is not Hermitian (residual " +
                            std::to_string(m.is_square() ? hermiticity_residual(m) : -1.0) + ")");
  }
  return herm_eig_unchecked(m);
}

double min_eigenvalue(const CMatrix& m) { return jacobi(m, false).eigenvalues.front(); }

double psd_threshold(const CMatrix& m, double tol) { return -tol * std::max(1.0, m.norm_inf()); }

bool is_psd(const CMatrix& m, double tol) {
  return is_hermitian(m, tol) && min_eigenvalue(m) >= psd_threshold(m, tol);
}

double trace_norm(const CMatrix& m) {
  if (m.is_square() && hermiticity_residual(m) <= 1e-14 * std::max(1.0, m.max_abs())) {
    double s = 0.0;
    for (double l : jacobi(m, false).eigenvalues) s += std::abs(l);
    return s;
  }
  double s = 0.0;
  for (double l : jacobi(m.adjoint() * m, false).eigenvalues) s += std::sqrt(std::max(l, 0.0));
  return s;
}

CMatrix unitary_at(const CMatrix& h, double t) {
  const HermEig e = herm_eig(h);
  std::vector<cplx> phases(e.eigenvalues.size());
  for (std::size_t k = 0; k < phases.size(); ++k) phases[k] = std::polar(1.0, -e.eigenvalues[k] * t);
  return e.eigenvectors * CMatrix::diag(phases) * e.eigenvectors.adjoint();
}

double unitarity_residual(const CMatrix& u) {
  if (!u.is_square()) return std::numeric_limits<double>::infinity();
  return max_abs_diff(u.adjoint() * u, CMatrix::identity(u.rows()));
}

//============================================================================
// Tensor structure
//============================================================================

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const cplx aij = a(i, j);
      if (aij == cplx{0.0, 0.0}) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return out;
}

CMatrix partial_trace(const CMatrix& m, BipartiteDims dims, Subsystem keep) {
  require_bipartite(m, dims, "partial_trace");
  const std::size_t ds = dims.system;
  const std::size_t dr = dims.reservoir;
  if (keep == Subsystem::kSystem) {
    CMatrix out(ds, ds);
    for (std::size_t i = 0; i < ds; ++i)
      for (std::size_t k = 0; k < ds; ++k)
        for (std::size_t r = 0; r < dr; ++r) out(i, k) += m(i * dr + r, k * dr + r);
    return out;
  }
  CMatrix out(dr, dr);
  for (std::size_t r = 0; r < dr; ++r)
    for (std::size_t s = 0; s < dr; ++s)
      for (std::size_t i = 0; i < ds; ++i) out(r, s) += m(i * dr + r, i * dr + s);
  return out;
}

CMatrix partial_transpose(const CMatrix& m, BipartiteDims dims, Subsystem which) {
  require_bipartite(m, dims, "partial_transpose");
  const std::size_t ds = dims.system;
  const std::size_t dr = dims.reservoir;
  CMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < ds; ++i)
    for (std::size_t k = 0; k < ds; ++k)
      for (std::size_t r = 0; r < dr; ++r)
        for (std::size_t s = 0; s < dr; ++s) {
          if (which == Subsystem::kReservoir) {
            out(i * dr + r, k * dr + s) = m(i * dr + s, k * dr + r);
          } else {
            out(i * dr + r, k * dr + s) = m(k * dr + r, i * dr + s);
          }
        }
  return out;
}

}  // namespace qdyn
