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


#include "qdyn/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace qdyn::io {

namespace {

const json& field(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw FormatError(path + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw FormatError(path + "." + key + ": missing field");
  return *it;
}

std::size_t positive_int(const json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() <= 0) throw FormatError(path + ": expected a positive integer");
  return j.get<std::size_t>();
}

std::vector<std::vector<double>> real_rows(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw FormatError(path + ": expected a non-empty array of rows");
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string rp = path + "[" + std::to_string(i) + "]";
    if (!j[i].is_array()) throw FormatError(rp + ": expected an array of numbers");
    std::vector<double> row;
    for (std::size_t k = 0; k < j[i].size(); ++k) {
      if (!j[i][k].is_number()) throw FormatError(rp + "[" + std::to_string(k) + "]: expected a number");
      row.push_back(j[i][k].get<double>());
    }
    if (!rows.empty() && row.size() != rows.front().size()) throw FormatError(rp + ": ragged row");
    rows.push_back(std::move(row));
  }
  if (rows.front().empty()) throw FormatError(path + ": empty rows");
  return rows;
}

json matrix_list(const std::vector<CMatrix>& ms) {
  json arr = json::array();
  for (const auto& m : ms) arr.push_back(matrix_to_json(m));
  return arr;
}

DensityMatrix density_from_json(const json& j, const std::string& path) {
  try {
    return DensityMatrix(matrix_from_json(j, path));
  } catch (const InvalidStateError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

json bloch_json(const BlochVector& r) { return json::array({r.x, r.y, r.z}); }

}  // namespace

json matrix_to_json(const CMatrix& m) {
  json re = json::array();
  json im = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json rr = json::array();
    json ir = json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) {
      rr.push_back(m(i, k).real());
      ir.push_back(m(i, k).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ir));
  }
  return {{"dim", m.rows()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

CMatrix matrix_from_json(const json& j, const std::string& path) {
  const std::size_t dim = positive_int(field(j, "dim", path), path + ".dim");
  const auto re = real_rows(field(j, "re", path), path + ".re");
  const auto im = real_rows(field(j, "im", path), path + ".im");
  if (re.size() != im.size() || re.front().size() != im.front().size()) {
    throw FormatError(path + ": re and im shapes differ");
  }
  if (re.size() != dim) throw FormatError(path + ".dim: " + std::to_string(dim) + " does not match row count");
  CMatrix m(re.size(), re.front().size());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t k = 0; k < m.cols(); ++k) m(i, k) = cplx{re[i][k], im[i][k]};
  return m;
}

json superoperator_to_json(const Superoperator& t) {
  return {{"dim_in", t.dim_in()},
          {"dim_out", t.dim_out()},
          {"kind", "transfer"},
          {"data", matrix_list({t.transfer()})}};
}

Superoperator superoperator_from_json(const json& j, const std::string& path) {
  const std::size_t din = positive_int(field(j, "dim_in", path), path + ".dim_in");
  const std::size_t dout = positive_int(field(j, "dim_out", path), path + ".dim_out");
  const json& kind = field(j, "kind", path);
  const json& data = field(j, "data", path);
  if (!kind.is_string()) throw FormatError(path + ".kind: expected a string");
  if (!data.is_array() || data.empty()) throw FormatError(path + ".data: expected a non-empty array of matrices");
  std::vector<CMatrix> ms;
  for (std::size_t k = 0; k < data.size(); ++k) ms.push_back(matrix_from_json(data[k], path + ".data[" + std::to_string(k) + "]"));

  const std::string k = kind.get<std::string>();
  try {
    if (k == "transfer") {
      if (ms.size() != 1) throw FormatError(path + ".data: transfer kind takes exactly one matrix");
      return {din, dout, ms.front()};
    }
    if (k == "choi") {
      if (ms.size() != 1) throw FormatError(path + ".data: choi kind takes exactly one matrix");
      return transfer_from_choi({din, dout, ms.front()});
    }
    if (k == "kraus") {
      for (std::size_t i = 0; i < ms.size(); ++i) {
        if (ms[i].rows() != dout || ms[i].cols() != din) {
          throw FormatError(path + ".data[" + std::to_string(i) + "]: Kraus operator must be dim_out x dim_in");
        }
      }
      // Completeness is audited by the caller; build the transfer directly.
      CMatrix s(dout * dout, din * din);
      for (const auto& w : ms) s += kron(w.conj(), w);
      return {din, dout, std::move(s)};
    }
  } catch (const DimensionError& e) {
    throw FormatError(path + ": " + e.what());
  }
  throw FormatError(path + ".kind: unknown kind '" + k + "' (expected kraus, transfer or choi)");
}

json assignment_to_json(const AssignmentMap& phi) {
  json j = {{"variant", to_string(phi.kind())}, {"d_s", phi.dims().system}, {"d_r", phi.dims().reservoir}};
  if (const auto* p = phi.as_product()) {
    j["reservoir"] = matrix_to_json(p->reservoir.mat());
  } else if (const auto* a = phi.as_affine()) {
    std::vector<CMatrix> images;
    const std::size_t ds = phi.dims().system;
    for (std::size_t i = 0; i < ds; ++i)
      for (std::size_t k = 0; k < ds; ++k) images.push_back(a->linear.apply(CMatrix::unit(ds, i, k)));
    j["linear"] = matrix_list(images);
    j["constant"] = matrix_to_json(a->constant);
  } else {
    const auto* t = phi.as_tabulated();
    json table = json::array();
    for (const auto& e : t->entries) {
      table.push_back({{"system", matrix_to_json(e.system.mat())}, {"joint", matrix_to_json(e.joint.mat())}});
    }
    j["table"] = std::move(table);
    j["inconsistent"] = t->inconsistent;
  }
  return j;
}

AssignmentMap assignment_from_json(const json& j, const std::string& path) {
  const json& variant = field(j, "variant", path);
  if (!variant.is_string()) throw FormatError(path + ".variant: expected a string");
  const BipartiteDims dims{positive_int(field(j, "d_s", path), path + ".d_s"),
                           positive_int(field(j, "d_r", path), path + ".d_r")};
  const std::string v = variant.get<std::string>();
  try {
    if (v == "product") {
      DensityMatrix tau = density_from_json(field(j, "reservoir", path), path + ".reservoir");
      if (tau.dim() != dims.reservoir) throw FormatError(path + ".reservoir: dimension does not match d_r");
      return AssignmentMap::product(dims.system, std::move(tau));
    }
    if (v == "affine") {
      const json& lin = field(j, "linear", path);
      const std::size_t ds = dims.system;
      if (!lin.is_array() || lin.size() != ds * ds) {
        throw FormatError(path + ".linear: expected " + std::to_string(ds * ds) + " matrices (images of E_ij)");
      }
      std::vector<CMatrix> images;
      for (std::size_t k = 0; k < lin.size(); ++k) {
        images.push_back(matrix_from_json(lin[k], path + ".linear[" + std::to_string(k) + "]"));
      }
      Superoperator linear = Superoperator::from_action(ds, dims.total(), [&](const CMatrix& e) {
        for (std::size_t i = 0; i < ds; ++i)
          for (std::size_t k = 0; k < ds; ++k)
            if (e(i, k) != cplx{0.0, 0.0}) return images[i * ds + k];
        return CMatrix(dims.total(), dims.total());
      });
      CMatrix constant = matrix_from_json(field(j, "constant", path), path + ".constant");
      return AssignmentMap::affine(dims, std::move(linear), std::move(constant));
    }
    if (v == "tabulated") {
      const json& table = field(j, "table", path);
      if (!table.is_array() || table.empty()) throw FormatError(path + ".table: expected a non-empty array");
      bool inconsistent = false;
      if (auto it = j.find("inconsistent"); it != j.end()) {
        if (!it->is_boolean()) throw FormatError(path + ".inconsistent: expected a boolean");
        inconsistent = it->get<bool>();
      }
      std::vector<TableEntry> entries;
      for (std::size_t k = 0; k < table.size(); ++k) {
        const std::string ep = path + ".table[" + std::to_string(k) + "]";
        entries.push_back({density_from_json(field(table[k], "system", ep), ep + ".system"),
                           density_from_json(field(table[k], "joint", ep), ep + ".joint")});
      }
      return AssignmentMap::tabulated(dims, std::move(entries), inconsistent);
    }
  } catch (const FormatError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw FormatError(path + ": " + e.what());
  }
  throw FormatError(path + ".variant: unknown variant '" + v + "' (expected product, affine or tabulated)");
}

json generator_to_json(const Generator& g) {
  return {{"kind", g.is_hamiltonian() ? "hamiltonian" : "unitary"}, {"matrix", matrix_to_json(g.matrix())}};
}

Generator generator_from_json(const json& j, const std::string& path) {
  const json& kind = field(j, "kind", path);
  if (!kind.is_string()) throw FormatError(path + ".kind: expected a string");
  CMatrix m = matrix_from_json(field(j, "matrix", path), path + ".matrix");
  const std::string k = kind.get<std::string>();
  try {
    if (k == "unitary") return Generator::unitary(std::move(m));
    if (k == "hamiltonian") return Generator::hamiltonian(std::move(m));
  } catch (const std::invalid_argument& e) {
    throw FormatError(path + ".matrix: " + e.what());
  }
  throw FormatError(path + ".kind: unknown generator kind '" + k + "' (expected unitary or hamiltonian)");
}

json domain_report_to_json(const DomainReport& r) {
  json j;
  j["status"] = r.status;
  j["tol"] = r.tol;
  j["seed"] = r.seed;
  j["center"] = {{"member", r.center.member}, {"lmin", r.center.min_eigenvalue}};
  json probes = json::array();
  for (const auto& [rho, m] : r.probes) {
    probes.push_back({{"state", matrix_to_json(rho)}, {"member", m.member}, {"lmin", m.min_eigenvalue}});
  }
  j["probes"] = std::move(probes);
  json radii = json::array();
  for (const auto& rr : r.radii) radii.push_back({{"direction", bloch_json(rr.direction)}, {"radius", rr.radius}});
  j["radii"] = std::move(radii);
  json samples = json::array();
  for (const auto& s : r.samples) samples.push_back(json::array({s.r.x, s.r.y, s.r.z, s.min_eigenvalue}));
  j["samples"] = std::move(samples);
  if (r.convexity) {
    j["convexity"] = {{"trials", r.convexity->trials},
                      {"failures", r.convexity->failures},
                      {"concavity_failures", r.convexity->concavity_failures},
                      {"worst_concavity_gap", r.convexity->worst_concavity_gap},
                      {"empty_interior", r.convexity->empty_interior}};
  }
  return j;
}

std::string domain_report_csv(const DomainReport& r) {
  std::ostringstream os;
  os << "rx,ry,rz,lmin\n" << std::setprecision(17);
  for (const auto& s : r.samples) os << s.r.x << ',' << s.r.y << ',' << s.r.z << ',' << s.min_eigenvalue << '\n';
  return os.str();
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // Translate the byte offset into line/column.
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw FormatError("JSON syntax error at line " + std::to_string(line) + ", column " + std::to_string(col) +
                      ": " + e.what());
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str());
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write '" + path + "'");
  out << text;
}

}  // namespace qdyn::io
