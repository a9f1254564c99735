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


#include "qdyn/channels.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <thread>

namespace qdyn {

std::vector<cplx> vec(const CMatrix& m) {
  std::vector<cplx> v(m.rows() * m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j)
    for (std::size_t i = 0; i < m.rows(); ++i) v[i + j * m.rows()] = m(i, j);
  return v;
}

CMatrix unvec(const std::vector<cplx>& v, std::size_t rows, std::size_t cols) {
  if (v.size() != rows * cols) throw DimensionError("unvec: length mismatch");
  CMatrix m(rows, cols);
  for (std::size_t j = 0; j < cols; ++j)
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = v[i + j * rows];
  return m;
}

//============================================================================
// Superoperator
//============================================================================

Superoperator::Superoperator(std::size_t dim_in, std::size_t dim_out, CMatrix transfer)
    : dim_in_(dim_in), dim_out_(dim_out), transfer_(std::move(transfer)) {
  if (dim_in_ == 0 || dim_out_ == 0 || transfer_.rows() != dim_out_ * dim_out_ ||
      transfer_.cols() != dim_in_ * dim_in_) {
    throw DimensionError("Superoperator: transfer matrix must be " + std::to_string(dim_out_ * dim_out_) + "x" +
                         std::to_string(dim_in_ * dim_in_));
  }
}

Superoperator Superoperator::from_action(std::size_t dim_in, std::size_t dim_out, const Action& action) {
  CMatrix s(dim_out * dim_out, dim_in * dim_in);
  for (std::size_t j = 0; j < dim_in; ++j) {
    for (std::size_t i = 0; i < dim_in; ++i) {
      const CMatrix image = action(CMatrix::unit(dim_in, i, j));
      if (image.rows() != dim_out || image.cols() != dim_out) {
        throw DimensionError("Superoperator::from_action: image has wrong shape");
      }
      const auto col = vec(image);
      for (std::size_t r = 0; r < col.size(); ++r) s(r, i + j * dim_in) = col[r];
    }
  }
  return {dim_in, dim_out, std::move(s)};
}

Superoperator Superoperator::identity(std::size_t dim) {
  return {dim, dim, CMatrix::identity(dim * dim)};
}

CMatrix Superoperator::apply(const CMatrix& m) const {
  if (m.rows() != dim_in_ || m.cols() != dim_in_) {
    throw DimensionError("Superoperator::apply: expected " + std::to_string(dim_in_) + "x" +
                         std::to_string(dim_in_) + " input");
  }
  return unvec(qdyn::apply(transfer_, vec(m)), dim_out_, dim_out_);
}

Superoperator compose(const Superoperator& outer, const Superoperator& inner) {
  if (outer.dim_in() != inner.dim_out()) throw DimensionError("compose: dimension mismatch");
  return {inner.dim_in(), outer.dim_out(), outer.transfer() * inner.transfer()};
}

Superoperator extend_with_identity(const Superoperator& t, std::size_t n) {
  const std::size_t din = t.dim_in();
  const std::size_t dout = t.dim_out();
  return Superoperator::from_action(din * n, dout * n, [&](const CMatrix& m) {
    // m = sum_{b,b'} M_{bb'} (x) |b><b'|; each block goes through T.
    CMatrix out(dout * n, dout * n);
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t bp = 0; bp < n; ++bp) {
        CMatrix block(din, din);
        bool nonzero = false;
        for (std::size_t a = 0; a < din; ++a)
          for (std::size_t ap = 0; ap < din; ++ap) {
            block(a, ap) = m(a * n + b, ap * n + bp);
            nonzero = nonzero || block(a, ap) != cplx{0.0, 0.0};
          }
        if (!nonzero) continue;
        const CMatrix image = t.apply(block);
        for (std::size_t c = 0; c < dout; ++c)
          for (std::size_t cp = 0; cp < dout; ++cp) out(c * n + b, cp * n + bp) = image(c, cp);
      }
    }
    return out;
  });
}

Superoperator adjoint_map(const Superoperator& t) {
  return {t.dim_out(), t.dim_in(), t.transfer().adjoint()};
}

double trace_preservation_residual(const Superoperator& t) {
  double r = 0.0;
  for (std::size_t i = 0; i < t.dim_in(); ++i)
    for (std::size_t j = 0; j < t.dim_in(); ++j) {
      const cplx tr = t.apply(CMatrix::unit(t.dim_in(), i, j)).trace();
      r = std::max(r, std::abs(tr - cplx{i == j ? 1.0 : 0.0, 0.0}));
    }
  return r;
}

double unitality_residual(const Superoperator& t) {
  if (t.dim_in() != t.dim_out()) return std::numeric_limits<double>::infinity();
  return max_abs_diff(t.apply(CMatrix::identity(t.dim_in())), CMatrix::identity(t.dim_out()));
}

double hermiticity_preservation_residual(const Superoperator& t) {
  const std::size_t d = t.dim_in();
  double r = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      const CMatrix eij = CMatrix::unit(d, i, j);
      const CMatrix eji = CMatrix::unit(d, j, i);
      r = std::max(r, hermiticity_residual(t.apply(eij + eji)));
      if (i != j) r = std::max(r, hermiticity_residual(t.apply((eij - eji) * cplx{0.0, 1.0})));
    }
  }
  return r;
}

ChoiMatrix choi_of(const Superoperator& t) {
  const std::size_t din = t.dim_in();
  const std::size_t dout = t.dim_out();
  ChoiMatrix c{din, dout, CMatrix(din * dout, din * dout)};
  for (std::size_t i = 0; i < din; ++i)
    for (std::size_t j = 0; j < din; ++j)
      for (std::size_t k = 0; k < dout; ++k)
        for (std::size_t l = 0; l < dout; ++l)
          c.mat(i * dout + k, j * dout + l) = t.transfer()(k + l * dout, i + j * din);
  return c;
}

Superoperator transfer_from_choi(const ChoiMatrix& c) {
  const std::size_t din = c.dim_in;
  const std::size_t dout = c.dim_out;
  if (c.mat.rows() != din * dout || c.mat.cols() != din * dout) {
    throw DimensionError("transfer_from_choi: Choi matrix shape does not match dims");
  }
  CMatrix s(dout * dout, din * din);
  for (std::size_t i = 0; i < din; ++i)
    for (std::size_t j = 0; j < din; ++j)
      for (std::size_t k = 0; k < dout; ++k)
        for (std::size_t l = 0; l < dout; ++l) s(k + l * dout, i + j * din) = c.mat(i * dout + k, j * dout + l);
  return {din, dout, std::move(s)};
}

//============================================================================
// Kraus
//============================================================================

KrausSet::KrausSet(std::vector<CMatrix> ops, Completeness completeness, double tol)
    : ops_(std::move(ops)), completeness_(completeness) {
  if (ops_.empty()) throw std::invalid_argument("KrausSet: at least one operator required");
  for (const auto& w : ops_) {
    if (w.rows() != ops_.front().rows() || w.cols() != ops_.front().cols() || w.empty()) {
      throw DimensionError("KrausSet: operators must share one shape");
    }
  }
  const CMatrix g = gram();
  const CMatrix id = CMatrix::identity(dim_in());
  if (completeness_ == Completeness::kTracePreserving) {
    const double r = max_abs_diff(g, id);
    if (r > tol * std::max(1.0, g.norm_inf())) {
      throw std::invalid_argument("KrausSet: sum W^dagger W != I (residual " + std::to_string(r) + ")");
    }
  } else {
    const CMatrix slack = id - g;
    if (min_eigenvalue(slack) < psd_threshold(slack, tol)) {
      throw std::invalid_argument("KrausSet: sum W^dagger W exceeds I");
    }
  }
}

CMatrix KrausSet::gram() const {
  CMatrix g(dim_in(), dim_in());
  for (const auto& w : ops_) g += w.adjoint() * w;
  return g;
}

Superoperator transfer_from_kraus(const KrausSet& k) {
  CMatrix s(k.dim_out() * k.dim_out(), k.dim_in() * k.dim_in());
  for (const auto& w : k.ops()) s += kron(w.conj(), w);
  return {k.dim_in(), k.dim_out(), std::move(s)};
}

KrausSet kraus_from_choi(const ChoiMatrix& c, double tol) {
  const HermEig e = herm_eig_unchecked(c.mat);
  const double floor = tol * std::max(1.0, c.mat.norm_inf());
  if (e.eigenvalues.front() < -floor) {
    throw NcpMapError("kraus_from_choi: Choi matrix has eigenvalue " + std::to_string(e.eigenvalues.front()) +
                      "; the map is not completely positive and has no Kraus form");
  }
  std::vector<CMatrix> ops;
  for (std::size_t m = e.eigenvalues.size(); m-- > 0;) {
    const double lambda = e.eigenvalues[m];
    if (lambda <= floor) break;
    const double w = std::sqrt(lambda);
    CMatrix op(c.dim_out, c.dim_in);
    for (std::size_t i = 0; i < c.dim_in; ++i)
      for (std::size_t k = 0; k < c.dim_out; ++k) op(k, i) = w * e.eigenvectors(i * c.dim_out + k, m);
    ops.push_back(std::move(op));
  }
  if (ops.empty()) ops.emplace_back(c.dim_out, c.dim_in);

  CMatrix g(c.dim_in, c.dim_in);
  for (const auto& w : ops) g += w.adjoint() * w;
  const bool tp = max_abs_diff(g, CMatrix::identity(c.dim_in)) <= tol * std::max(1.0, g.norm_inf());
  return {std::move(ops), tp ? Completeness::kTracePreserving : Completeness::kSelective, tol};
}

//============================================================================
// Positivity
//============================================================================

std::string to_string(PositivityVerdict v) {
  return v == PositivityVerdict::kCertifiedViolation ? "certified-violation" : "no-violation-found";
}

OutputMinimum minimize_output_eigenvalue(const Superoperator& t, const SearchOptions& opts) {
  const std::size_t d = t.dim_in();
  const Superoperator dual = adjoint_map(t);

  auto value = [&](const std::vector<cplx>& ket) { return min_eigenvalue(t.apply(CMatrix::outer(ket, ket))); };

  const std::size_t budget = std::max<std::size_t>(opts.budget, 1);
  std::vector<std::vector<cplx>> candidates;
  candidates.reserve(budget);
  if (d == 2) {
    for (const auto& r : fibonacci_sphere(budget)) candidates.push_back(ket_from_bloch(r));
  } else {
    Rng rng(opts.seed);
    for (std::size_t k = 0; k < budget; ++k) candidates.push_back(random_ket(d, rng));
  }

  // Candidates are evaluated in parallel chunks; the reduction runs in index
  // order so the selected start point does not depend on the thread count.
  std::vector<double> values(candidates.size());
  const std::size_t workers =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::max<std::size_t>(1, candidates.size() / 256));
  const std::size_t chunk = (candidates.size() + workers - 1) / workers;
  std::vector<std::future<void>> jobs;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk, hi = std::min(candidates.size(), lo + chunk);
    jobs.push_back(std::async(std::launch::async, [&, lo, hi] {
      for (std::size_t k = lo; k < hi; ++k) values[k] = value(candidates[k]);
    }));
  }
  for (auto& j : jobs) j.get();

  std::size_t arg = 0;
  for (std::size_t k = 1; k < values.size(); ++k)
    if (values[k] < values[arg]) arg = k;
  std::vector<cplx> best_ket = candidates[arg];
  double best = values[arg];
  std::size_t used = candidates.size();

  // Seesaw: alternate the minimizing output eigenvector and the minimizing
  // input for the dual; lambda_min is non-increasing along the iteration.
  std::vector<cplx> ket = best_ket;
  for (std::size_t step = 0; step < opts.descent_steps; ++step) {
    const HermEig out = herm_eig_unchecked(t.apply(CMatrix::outer(ket, ket)));
    const double v = out.eigenvalues.front();
    if (v < best) {
      best = v;
      best_ket = ket;
    }
    const auto phi = out.eigenvectors.column(0);
    const HermEig in = herm_eig_unchecked(dual.apply(CMatrix::outer(phi, phi)));
    auto next = in.eigenvectors.column(0);
    const double nv = value(next);
    ++used;
    if (nv < best) {
      best = nv;
      best_ket = next;
    }
    if (v - nv < 1e-15) break;
    ket = std::move(next);
  }
  return {DensityMatrix::pure(best_ket), best, used};
}

PositivityReport is_cp(const Superoperator& t, double tol) {
  const ChoiMatrix c = choi_of(t);
  PositivityReport rep;
  rep.min_choi_eigenvalue = min_eigenvalue(c.mat);
  rep.is_cp = hermiticity_residual(c.mat) <= tol * std::max(1.0, c.mat.norm_inf()) &&
              rep.min_choi_eigenvalue >= psd_threshold(c.mat, tol);
  return rep;
}

PositivityReport is_positive_map(const Superoperator& t, const SearchOptions& opts, double tol) {
  PositivityReport rep = is_cp(t, tol);
  const OutputMinimum m = minimize_output_eigenvalue(t, opts);
  rep.samples_used = m.samples_used;
  rep.search_min_eigenvalue = m.min_eigenvalue;
  if (m.min_eigenvalue < -10.0 * tol) {
    rep.is_positive = PositivityVerdict::kCertifiedViolation;
    rep.witness = m.state;
  }
  return rep;
}

PositivityReport is_n_positive(const Superoperator& t, std::size_t n, const SearchOptions& opts, double tol) {
  if (n == 0) throw std::invalid_argument("is_n_positive: n must be >= 1");
  PositivityReport rep = is_positive_map(extend_with_identity(t, n), opts, tol);
  const PositivityReport own = is_cp(t, tol);
  rep.min_choi_eigenvalue = own.min_choi_eigenvalue;
  rep.is_cp = own.is_cp;
  return rep;
}

//============================================================================
// Measurement
//============================================================================

void check_projector_set(const std::vector<CMatrix>& projectors, std::size_t dim, double tol) {
  if (projectors.empty()) throw std::invalid_argument("projector set is empty");
  CMatrix sum(dim, dim);
  for (std::size_t a = 0; a < projectors.size(); ++a) {
    const CMatrix& p = projectors[a];
    if (p.rows() != dim || p.cols() != dim) throw DimensionError("projector has wrong dimension");
    if (!is_hermitian(p, tol)) throw std::invalid_argument("projector is not Hermitian");
    if (max_abs_diff(p * p, p) > tol) throw std::invalid_argument("projector is not idempotent");
    for (std::size_t b = a + 1; b < projectors.size(); ++b) {
      if ((p * projectors[b]).max_abs() > tol) throw std::invalid_argument("projectors are not mutually orthogonal");
    }
    sum += p;
  }
  if (max_abs_diff(sum, CMatrix::identity(dim)) > tol) {
    throw std::invalid_argument("projector set is incomplete (does not sum to I)");
  }
}

std::vector<LuedersOutcome> lueders(const DensityMatrix& rho, const std::vector<CMatrix>& projectors, double tol) {
  check_projector_set(projectors, rho.dim(), tol);
  std::vector<LuedersOutcome> out;
  for (std::size_t i = 0; i < projectors.size(); ++i) {
    const CMatrix& p = projectors[i];
    const double prob = expectation(rho, p);
    if (prob <= tol) continue;
    CMatrix post = p * rho.mat() * p;
    post *= 1.0 / prob;
    out.push_back({i, prob, DensityMatrix(hermitian_part(post))});
  }
  return out;
}

DensityMatrix nonselective(const DensityMatrix& rho, const std::vector<CMatrix>& projectors, double tol) {
  check_projector_set(projectors, rho.dim(), tol);
  CMatrix sum(rho.dim(), rho.dim());
  for (const auto& p : projectors) sum += p * rho.mat() * p;
  return DensityMatrix(std::move(sum));
}

SelectiveResult selective_apply(const KrausSet& k, const DensityMatrix& rho, double tol) {
  if (k.dim_in() != rho.dim()) throw DimensionError("selective_apply: dimension mismatch");
  const CMatrix slack = CMatrix::identity(k.dim_in()) - k.gram();
  if (min_eigenvalue(slack) < psd_threshold(slack, tol)) {
    throw std::invalid_argument("selective_apply: sum W^dagger W exceeds I");
  }
  CMatrix out(k.dim_out(), k.dim_out());
  for (const auto& w : k.ops()) out += w * rho.mat() * w.adjoint();
  const double prob = std::clamp(out.trace().real(), 0.0, 1.0);
  if (prob <= tol) return {prob, std::nullopt};
  out *= 1.0 / out.trace().real();
  return {prob, DensityMatrix(hermitian_part(out))};
}

//============================================================================
// Standard maps
//============================================================================

namespace maps {

Superoperator unitary(const CMatrix& u) {
  if (!u.is_square()) throw DimensionError("unitary map needs a square matrix");
  return transfer_from_kraus(KrausSet({u}, Completeness::kTracePreserving));
}

Superoperator transpose(std::size_t dim) {
  return Superoperator::from_action(dim, dim, [](const CMatrix& m) { return m.transpose(); });
}

Superoperator bloch_linear(const std::array<std::array<double, 3>, 3>& m) {
  const auto sigma = pauli::xyz();
  return Superoperator::from_action(2, 2, [&](const CMatrix& x) {
    CMatrix out = pauli::I() * x.trace();
    for (std::size_t i = 0; i < 3; ++i) {
      cplx coeff = 0.0;
      for (std::size_t j = 0; j < 3; ++j) coeff += m[i][j] * (x * sigma[j]).trace();
      out += sigma[i] * coeff;
    }
    out *= 0.5;
    return out;
  });
}

Superoperator flip() { return bloch_linear({{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, -1.0}}}); }

Superoperator dephasing(std::size_t dim) {
  std::vector<CMatrix> ops;
  for (std::size_t i = 0; i < dim; ++i) ops.push_back(CMatrix::unit(dim, i, i));
  return transfer_from_kraus(KrausSet(std::move(ops), Completeness::kTracePreserving));
}

Superoperator depolarizing(std::size_t dim, double p) {
  return Superoperator::from_action(dim, dim, [&](const CMatrix& x) {
    return (1.0 - p) * x + (p / static_cast<double>(dim)) * x.trace() * CMatrix::identity(dim);
  });
}

KrausSet random_cptp_kraus(std::size_t dim, std::size_t kraus_count, Rng& rng) {
  const CMatrix g = random_matrix(dim * kraus_count, dim, rng);
  const HermEig e = herm_eig_unchecked(g.adjoint() * g);
  std::vector<cplx> inv_sqrt(dim);
  for (std::size_t k = 0; k < dim; ++k) inv_sqrt[k] = 1.0 / std::sqrt(e.eigenvalues[k]);
  const CMatrix v = g * (e.eigenvectors * CMatrix::diag(inv_sqrt) * e.eigenvectors.adjoint());
  std::vector<CMatrix> ops;
  for (std::size_t a = 0; a < kraus_count; ++a) {
    CMatrix w(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) w(i, j) = v(a * dim + i, j);
    ops.push_back(std::move(w));
  }
  return {std::move(ops), Completeness::kTracePreserving};
}

}  // namespace maps

}  // namespace qdyn
