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


#include <algorithm>
#include <string>

#include "doctest.h"
#include "qdyn/io.hpp"
#include "qdyn/sampling.hpp"

using namespace qdyn;
using qdyn::io::json;

TEST_CASE("matrix JSON") {
  Rng rng(61);
  const CMatrix m = random_matrix(3, 3, rng);
  const json j = io::matrix_to_json(m);
  CHECK(j.at("dim") == 3);
  CHECK(j.at("re").size() == 3);
  CHECK(max_abs_diff(io::matrix_from_json(j), m) == 0.0);

  SUBCASE("missing field reports the path") {
    json bad = j;
    bad.erase("im");
    try {
      io::matrix_from_json(bad, "$.data[0]");
      FAIL("expected FormatError");
    } catch (const io::FormatError& e) {
      CHECK(std::string(e.what()).find("$.data[0].im") != std::string::npos);
    }
  }
  SUBCASE("ragged rows and wrong dim") {
    json ragged = j;
    ragged["re"][1].erase(0);
    CHECK_THROWS_AS(io::matrix_from_json(ragged), io::FormatError);
    json wrong = j;
    wrong["dim"] = 4;
    CHECK_THROWS_AS(io::matrix_from_json(wrong), io::FormatError);
  }
}

TEST_CASE("superoperator JSON") {
  Rng rng(62);
  const Superoperator t = transfer_from_kraus(maps::random_cptp_kraus(3, 2, rng));
  const Superoperator back = io::superoperator_from_json(io::superoperator_to_json(t));
  CHECK(max_abs_diff(back.transfer(), t.transfer()) == 0.0);

  SUBCASE("kraus and choi kinds") {
    const KrausSet k = maps::random_cptp_kraus(2, 2, rng);
    json jk{{"dim_in", 2}, {"dim_out", 2}, {"kind", "kraus"}, {"data", json::array()}};
    for (const CMatrix& w : k.ops()) jk["data"].push_back(io::matrix_to_json(w));
    CHECK(max_abs_diff(io::superoperator_from_json(jk).transfer(), transfer_from_kraus(k).transfer()) < 1e-14);

    json jc{{"dim_in", 2}, {"dim_out", 2}, {"kind", "choi"}, {"data", {io::matrix_to_json(choi_of(maps::flip()).mat)}}};
    CHECK(max_abs_diff(io::superoperator_from_json(jc).transfer(), maps::flip().transfer()) < 1e-14);
  }
  SUBCASE("unknown kind") {
    json j = io::superoperator_to_json(t);
    j["kind"] = "stinespring";
    CHECK_THROWS_AS(io::superoperator_from_json(j), io::FormatError);
  }
}

TEST_CASE("assignment JSON round trips") {
  const DensityMatrix tau(CMatrix::diag(std::vector<double>{0.7, 0.3}));
  const auto check_round_trip = [](const AssignmentMap& phi) {
    const AssignmentMap back = io::assignment_from_json(io::assignment_to_json(phi));
    CHECK(back.kind() == phi.kind());
    CHECK(back.dims().system == phi.dims().system);
    CHECK(back.dims().reservoir == phi.dims().reservoir);
    if (phi.totally_defined()) {
      CHECK(max_abs_diff(back.linear_extension().transfer(), phi.linear_extension().transfer()) < 1e-15);
    } else {
      CHECK(back.as_tabulated()->entries.size() == phi.as_tabulated()->entries.size());
      CHECK(back.as_tabulated()->inconsistent == phi.as_tabulated()->inconsistent);
    }
  };
  check_round_trip(AssignmentMap::product(2, tau));
  check_round_trip(assignments::correlated(0.5));
  check_round_trip(assignments::dephasing_product(tau, 3));
  check_round_trip(AssignmentMap::tabulated(
      {2, 2}, {{axis_state('x', 1), DensityMatrix(kron(axis_state('x', 1).mat(), tau.mat()))}}));
  check_round_trip(AssignmentMap::tabulated(
      {2, 2}, {{axis_state('x', 1), DensityMatrix(kron(axis_state('z', 1).mat(), tau.mat()))}}, true));

  json bad = io::assignment_to_json(assignments::correlated(0.5));
  bad["variant"] = "nonlinear";
  CHECK_THROWS_AS(io::assignment_from_json(bad), io::FormatError);
}

TEST_CASE("generator JSON") {
  const Generator h = Generator::hamiltonian(kron(pauli::Z(), pauli::X()));
  const Generator back = io::generator_from_json(io::generator_to_json(h));
  CHECK(back.is_hamiltonian());
  CHECK(max_abs_diff(back.matrix(), h.matrix()) == 0.0);
  json j = io::generator_to_json(Generator::unitary(pauli::X()));
  CHECK(j.at("kind") == "unitary");
  j["matrix"] = io::matrix_to_json(CMatrix::identity(2) * 2.0);
  CHECK_THROWS(io::generator_from_json(j));
}

TEST_CASE("parse errors carry positions") {
  try {
    io::parse_json("{\n  \"dim\": 2,\n  \"re\": [\n");
    FAIL("expected FormatError");
  } catch (const io::FormatError& e) {
    CHECK(std::string(e.what()).find("line") != std::string::npos);
  }
  CHECK_THROWS_AS(io::read_json_file("/nonexistent/path.json"), io::FormatError);
}

TEST_CASE("domain report serialisation") {
  DomainReportOptions opts;
  opts.resolution = 4;
  opts.convexity_trials = 10;
  const DomainReport r = domain_report(DomainQuery::assignment(assignments::correlated(0.5)), opts);
  const json j = io::domain_report_to_json(r);
  CHECK(j.at("status") == "ok");
  CHECK(j.at("samples").size() == r.samples.size());
  CHECK(j.at("radii").size() == 6);
  CHECK(j.at("samples")[0].size() == 4);
  const std::string csv = io::domain_report_csv(r);
  CHECK(csv.rfind("rx,ry,rz,lmin\n", 0) == 0);
  CHECK(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')) == r.samples.size() + 1);
}
