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


#include "qdyn/opendyn.hpp"

#include <algorithm>
#include <cmath>

namespace qdyn {

namespace {

constexpr double kTableMatchFactor = 100.0;

const TableEntry* find_entry(const TabulatedAssignment& t, const CMatrix& rho, double tol) {
  for (const auto& e : t.entries) {
    if (max_abs_diff(e.system.mat(), rho) <= kTableMatchFactor * tol) return &e;
  }
  return nullptr;
}

void require_system_dim(const AssignmentMap& phi, std::size_t dim, const char* what) {
  if (dim != phi.dims().system) {
    throw DimensionError(std::string(what) + ": state dimension " + std::to_string(dim) +
                         " does not match assignment system dimension " + std::to_string(phi.dims().system));
  }
}

}  // namespace

std::string to_string(AssignmentKind k) {
  switch (k) {
    case AssignmentKind::kProduct: return "product";
    case AssignmentKind::kAffine: return "affine";
    case AssignmentKind::kTabulated: return "tabulated";
  }
  return "unknown";
}

//============================================================================
// AssignmentMap
//============================================================================

AssignmentMap AssignmentMap::product(std::size_t system_dim, DensityMatrix reservoir) {
  if (system_dim == 0) throw DimensionError("product assignment: system dimension must be positive");
  const BipartiteDims dims{system_dim, reservoir.dim()};
  return {dims, ProductAssignment{std::move(reservoir)}};
}

AssignmentMap AssignmentMap::affine(BipartiteDims dims, Superoperator linear, CMatrix constant) {
  if (linear.dim_in() != dims.system || linear.dim_out() != dims.total()) {
    throw DimensionError("affine assignment: linear part must map d_s to d_s*d_r");
  }
  if (constant.rows() != dims.total() || constant.cols() != dims.total()) {
    throw DimensionError("affine assignment: constant part must be (d_s*d_r)-square");
  }
  return {dims, AffineAssignment{std::move(linear), std::move(constant)}};
}

AssignmentMap AssignmentMap::tabulated(BipartiteDims dims, std::vector<TableEntry> entries, bool inconsistent,
                                       double tol) {
  if (entries.empty()) throw std::invalid_argument("tabulated assignment: table is empty");
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto& e = entries[k];
    if (e.system.dim() != dims.system || e.joint.dim() != dims.total()) {
      throw DimensionError("tabulated assignment: entry " + std::to_string(k) + " has wrong dimensions");
    }
    if (!inconsistent) {
      const double r = max_abs_diff(partial_trace(e.joint.mat(), dims, Subsystem::kSystem), e.system.mat());
      if (r > tol) {
        throw std::invalid_argument("tabulated assignment: entry " + std::to_string(k) +
                                    " is inconsistent (tr_R joint != system); set inconsistent to allow");
      }
    }
  }
  return {dims, TabulatedAssignment{std::move(entries), inconsistent}};
}

AssignmentKind AssignmentMap::kind() const {
  switch (rep_.index()) {
    case 0: return AssignmentKind::kProduct;
    case 1: return AssignmentKind::kAffine;
    default: return AssignmentKind::kTabulated;
  }
}

Superoperator AssignmentMap::linear_extension() const {
  if (const auto* p = as_product()) {
    return Superoperator::from_action(dims_.system, dims_.total(),
                                      [&](const CMatrix& x) { return kron(x, p->reservoir.mat()); });
  }
  if (const auto* a = as_affine()) {
    return Superoperator::from_action(dims_.system, dims_.total(),
                                      [&](const CMatrix& x) { return a->linear.apply(x) + x.trace() * a->constant; });
  }
  throw std::logic_error("tabulated assignment has no linear extension; call extend_linearly first");
}

CMatrix assign(const AssignmentMap& phi, const DensityMatrix& rho, double tol) {
  require_system_dim(phi, rho.dim(), "assign");
  if (const auto* p = phi.as_product()) return kron(rho.mat(), p->reservoir.mat());
  if (const auto* a = phi.as_affine()) return a->linear.apply(rho.mat()) + a->constant;
  const TableEntry* e = find_entry(*phi.as_tabulated(), rho.mat(), tol);
  if (e == nullptr) throw TableMissError("assign: state is not in the assignment table");
  return e->joint.mat();
}

namespace assignments {

AssignmentMap correlated(double c) {
  const CMatrix half_identity = pauli::I() * 0.5;
  Superoperator linear =
      Superoperator::from_action(2, 4, [&](const CMatrix& x) { return kron(x, half_identity); });
  CMatrix constant = kron(pauli::Z(), pauli::Z()) * (c / 4.0);
  return AssignmentMap::affine({2, 2}, std::move(linear), std::move(constant));
}

AssignmentMap dephasing_product(const DensityMatrix& reservoir, std::size_t system_dim) {
  const Superoperator deph = maps::dephasing(system_dim);
  Superoperator linear = Superoperator::from_action(
      system_dim, system_dim * reservoir.dim(), [&](const CMatrix& x) { return kron(deph.apply(x), reservoir.mat()); });
  const BipartiteDims dims{system_dim, reservoir.dim()};
  return AssignmentMap::affine(dims, std::move(linear), CMatrix(dims.total(), dims.total()));
}

}  // namespace assignments

//============================================================================
// Audits
//============================================================================

ConsistencyReport check_consistency(const AssignmentMap& phi, const std::vector<DensityMatrix>& probes, double tol) {
  ConsistencyReport rep;
  auto visit = [&](const CMatrix& rho, const CMatrix& joint, std::size_t idx) {
    const double r = trace_norm(partial_trace(joint, phi.dims(), Subsystem::kSystem) - rho);
    if (r > rep.max_residual) {
      rep.max_residual = r;
      rep.worst_probe = idx;
    }
    ++rep.probes;
  };
  if (const auto* t = phi.as_tabulated()) {
    for (std::size_t k = 0; k < t->entries.size(); ++k) visit(t->entries[k].system.mat(), t->entries[k].joint.mat(), k);
  } else {
    for (std::size_t k = 0; k < probes.size(); ++k) {
      require_system_dim(phi, probes[k].dim(), "check_consistency");
      visit(probes[k].mat(), assign(phi, probes[k], tol), k);
    }
  }
  rep.consistent = rep.max_residual <= tol;
  return rep;
}

double consistency_residual(const AssignmentMap& phi) {
  const Superoperator ext = phi.linear_extension();
  const std::size_t ds = phi.dims().system;
  const Superoperator marginal = Superoperator::from_action(
      ds, ds, [&](const CMatrix& x) { return partial_trace(ext.apply(x), phi.dims(), Subsystem::kSystem); });
  return max_abs_diff(marginal.transfer(), CMatrix::identity(ds * ds));
}

LinearityReport check_linearity(const AssignmentMap& phi, const std::vector<LinearityProbe>& probes, double tol) {
  LinearityReport rep;
  for (const auto& p : probes) {
    if (p.weight < 0.0 || p.weight > 1.0) throw std::invalid_argument("check_linearity: weight outside [0, 1]");
    require_system_dim(phi, p.first.dim(), "check_linearity");
    require_system_dim(phi, p.second.dim(), "check_linearity");
    const CMatrix mix = p.weight * p.first.mat() + (1.0 - p.weight) * p.second.mat();
    CMatrix lhs;
    CMatrix a;
    CMatrix b;
    if (const auto* t = phi.as_tabulated()) {
      const TableEntry* em = find_entry(*t, mix, tol);
      const TableEntry* ea = find_entry(*t, p.first.mat(), tol);
      const TableEntry* eb = find_entry(*t, p.second.mat(), tol);
      if (em == nullptr || ea == nullptr || eb == nullptr) {
        rep.entries.push_back({ProbeStatus::kUndefined, 0.0});
        ++rep.undefined;
        continue;
      }
      lhs = em->joint.mat();
      a = ea->joint.mat();
      b = eb->joint.mat();
    } else {
      lhs = assign(phi, DensityMatrix(mix), tol);
      a = assign(phi, p.first, tol);
      b = assign(phi, p.second, tol);
    }
    const double r = trace_norm(lhs - p.weight * a - (1.0 - p.weight) * b);
    rep.entries.push_back({ProbeStatus::kDefined, r});
    rep.max_residual = std::max(rep.max_residual, r);
  }
  return rep;
}

std::vector<DensityMatrix> standard_probes(std::size_t dim, std::size_t random_count, std::uint64_t seed) {
  std::vector<DensityMatrix> out;
  const double h = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < dim; ++i) {
    std::vector<cplx> k(dim, 0.0);
    k[i] = 1.0;
    out.push_back(DensityMatrix::pure(k));
  }
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = i + 1; j < dim; ++j) {
      std::vector<cplx> k(dim, 0.0);
      k[i] = h;
      k[j] = h;
      out.push_back(DensityMatrix::pure(k));
      k[j] = cplx{0.0, h};
      out.push_back(DensityMatrix::pure(k));
    }
  }
  out.push_back(DensityMatrix::maximally_mixed(dim));
  Rng rng(seed);
  for (std::size_t n = 0; n < random_count; ++n) out.push_back(random_density(dim, rng));
  return out;
}

//============================================================================
// Reduced dynamics
//============================================================================

Generator Generator::unitary(CMatrix u, double tol) {
  if (!u.is_square() || u.empty()) throw DimensionError("generator: unitary must be square");
  const double r = unitarity_residual(u);
  if (r > tol * std::max(1.0, static_cast<double>(u.rows()))) {
    throw std::invalid_argument("generator: matrix is not unitary (residual " + std::to_string(r) + ")");
  }
  return {std::move(u), false};
}

Generator Generator::hamiltonian(CMatrix h, double tol) {
  if (!h.is_square() || h.empty()) throw DimensionError("generator: Hamiltonian must be square");
  if (!is_hermitian(h, tol)) throw NotHermitianError("generator: Hamiltonian is not Hermitian");
  return {std::move(h), true};
}

CMatrix Generator::at(double t) const { return hamiltonian_ ? unitary_at(m_, t) : m_; }

ReducedDynamics::ReducedDynamics(AssignmentMap phi_in, Generator generator_in)
    : phi(std::move(phi_in)), generator(std::move(generator_in)) {
  if (generator.dim() != phi.dims().total()) {
    throw DimensionError("reduced dynamics: generator dimension " + std::to_string(generator.dim()) +
                         " does not match d_s*d_r = " + std::to_string(phi.dims().total()));
  }
}

Superoperator reduced_map(const ReducedDynamics& rd, double t) {
  const Superoperator ext = rd.phi.linear_extension();
  const CMatrix u = rd.generator.at(t);
  const CMatrix ud = u.adjoint();
  const std::size_t ds = rd.phi.dims().system;
  return Superoperator::from_action(
      ds, ds, [&](const CMatrix& x) { return partial_trace(u * ext.apply(x) * ud, rd.phi.dims(), Subsystem::kSystem); });
}

//============================================================================
// Extension of tabulated maps
//============================================================================

ExtensionResult extend_linearly(const AssignmentMap& phi, double tol) {
  const auto* table = phi.as_tabulated();
  if (table == nullptr) throw std::invalid_argument("extend_linearly: tabulated assignment required");
  const BipartiteDims dims = phi.dims();
  const std::size_t m = table->entries.size();
  const std::size_t ds2 = dims.system * dims.system;
  const std::size_t dj2 = dims.total() * dims.total();

  CMatrix states(ds2, m);
  CMatrix images(dj2, m);
  for (std::size_t k = 0; k < m; ++k) {
    const auto vs = vec(table->entries[k].system.mat());
    const auto vj = vec(table->entries[k].joint.mat());
    for (std::size_t r = 0; r < ds2; ++r) states(r, k) = vs[r];
    for (std::size_t r = 0; r < dj2; ++r) images(r, k) = vj[r];
  }

  // Hilbert-Schmidt Gram matrix of Hermitian states: real symmetric.
  const HermEig gram = herm_eig_unchecked(states.adjoint() * states);
  const double rank_floor = 1e-10 * std::max(1.0, gram.eigenvalues.back());
  std::vector<std::size_t> null_cols;
  std::vector<std::size_t> range_cols;
  for (std::size_t k = 0; k < m; ++k) (gram.eigenvalues[k] <= rank_floor ? null_cols : range_cols).push_back(k);

  CMatrix null_basis(m, null_cols.size());
  for (std::size_t c = 0; c < null_cols.size(); ++c)
    for (std::size_t k = 0; k < m; ++k) null_basis(k, c) = gram.eigenvectors(k, null_cols[c]).real();

  const CMatrix residual = images * null_basis;
  const double residual_norm = null_cols.empty() ? 0.0 : residual.norm_frobenius();

  if (residual_norm > 1e3 * tol) {
    // The null direction with the largest image change gives two convex
    // decompositions of one state with different images.
    const HermEig spread = herm_eig_unchecked(residual.adjoint() * residual);
    const std::size_t top = spread.eigenvalues.size() - 1;
    std::vector<double> a(m, 0.0);
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t c = 0; c < null_cols.size(); ++c)
        a[k] += null_basis(k, c).real() * spread.eigenvectors(c, top).real();

    double pos = 0.0;
    double neg = 0.0;
    for (double v : a) (v > 0.0 ? pos : neg) += std::abs(v);
    Conflict conflict;
    conflict.first.weights.assign(m, 0.0);
    conflict.second.weights.assign(m, 0.0);
    conflict.state = CMatrix(dims.system, dims.system);
    conflict.image_first = CMatrix(dims.total(), dims.total());
    conflict.image_second = CMatrix(dims.total(), dims.total());
    for (std::size_t k = 0; k < m; ++k) {
      const auto& e = table->entries[k];
      if (a[k] > 0.0) {
        conflict.first.weights[k] = a[k] / pos;
        conflict.state += conflict.first.weights[k] * e.system.mat();
        conflict.image_first += conflict.first.weights[k] * e.joint.mat();
      } else if (a[k] < 0.0) {
        conflict.second.weights[k] = -a[k] / neg;
        conflict.image_second += conflict.second.weights[k] * e.joint.mat();
      }
    }
    conflict.image_distance = trace_norm(conflict.image_first - conflict.image_second);
    conflict.residual_norm = residual_norm;
    return {std::move(conflict)};
  }

  // Reference product map with the mean reservoir marginal.
  CMatrix mean_joint(dims.total(), dims.total());
  for (const auto& e : table->entries) mean_joint += e.joint.mat();
  mean_joint *= 1.0 / static_cast<double>(m);
  const CMatrix tau = partial_trace(mean_joint, dims, Subsystem::kReservoir);
  const Superoperator reference =
      Superoperator::from_action(dims.system, dims.total(), [&](const CMatrix& x) { return kron(x, tau); });

  // Pseudo-inverse of the state matrix through the Gram eigenbasis.
  CMatrix gram_pinv(m, m);
  for (std::size_t c : range_cols) {
    const auto v = gram.eigenvectors.column(c);
    gram_pinv += CMatrix::outer(v, v) * (1.0 / gram.eigenvalues[c]);
  }
  const CMatrix correction = (images - reference.transfer() * states) * gram_pinv * states.adjoint();
  Superoperator linear(dims.system, dims.total(), reference.transfer() + correction);
  return {AssignmentMap::affine(dims, std::move(linear), CMatrix(dims.total(), dims.total()))};
}

//============================================================================
// Witnesses and trajectories
//============================================================================

WitnessResult pechukas_witness(const AssignmentMap& phi, const SearchOptions& opts, double tol) {
  if (!phi.totally_defined()) throw std::invalid_argument("pechukas_witness: assignment must be totally defined");
  const double r = consistency_residual(phi);
  if (r > tol) {
    throw std::invalid_argument("pechukas_witness: assignment is not consistent (residual " + std::to_string(r) + ")");
  }
  const OutputMinimum best = minimize_output_eigenvalue(phi.linear_extension(), opts);
  WitnessResult out{std::nullopt, best.min_eigenvalue, best.samples_used};
  if (best.min_eigenvalue < -tol) out.witness = best.state;
  return out;
}

TrajectoryReport inconsistency_analysis(const AssignmentMap& phi, const DensityMatrix& rho_s,
                                        const CMatrix& true_initial, const Generator& generator,
                                        const std::vector<double>& times, double tol) {
  require_system_dim(phi, rho_s.dim(), "inconsistency_analysis");
  if (generator.dim() != phi.dims().total()) throw DimensionError("inconsistency_analysis: generator dimension");
  const CMatrix marginal = partial_trace(true_initial, phi.dims(), Subsystem::kSystem);
  if (max_abs_diff(marginal, rho_s.mat()) > tol) {
    throw std::invalid_argument("inconsistency_analysis: tr_R(true_initial) does not equal rho_S");
  }
  const CMatrix proxy = assign(phi, rho_s, tol);
  TrajectoryReport rep;
  rep.times = times;
  rep.fixed_point_offset = trace_norm(rho_s.mat() - partial_trace(proxy, phi.dims(), Subsystem::kSystem));
  rep.deviation.reserve(times.size());
  for (double t : times) {
    const CMatrix u = generator.at(t);
    const CMatrix ud = u.adjoint();
    const CMatrix truth = partial_trace(u * true_initial * ud, phi.dims(), Subsystem::kSystem);
    const CMatrix approx = partial_trace(u * proxy * ud, phi.dims(), Subsystem::kSystem);
    rep.deviation.push_back(trace_norm(truth - approx));
  }
  return rep;
}

}  // namespace qdyn
