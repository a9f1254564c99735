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


#ifndef QDYN_CASES_HPP_
#define QDYN_CASES_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace qdyn {

// One pinned expectation of a reproduction case.
struct CaseCheck {
  enum class Relation { kNear, kAtMost, kAtLeast };

  std::string label;
  double actual = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;  // used by kNear
  Relation relation = Relation::kNear;
  bool pass = false;
};

struct CaseResult {
  std::string name;
  std::vector<std::pair<std::string, double>> values;
  std::vector<std::string> notes;
  std::vector<CaseCheck> checks;

  bool pass() const;
  void near(std::string label, double actual, double expected, double tolerance);
  void at_most(std::string label, double actual, double bound);
  void at_least(std::string label, double actual, double bound);
  void flag(std::string label, bool ok);

  std::string text() const;
  nlohmann::json to_json() const;
};

struct CaseOptions {
  double c = 0.5;
  double t0 = 0.0;
  double t1 = 2.0;
  std::size_t steps = 21;
  std::uint64_t seed = 0;
};

const std::vector<std::string>& case_names();

// Throws std::invalid_argument for an unknown name or out-of-range option.
CaseResult run_case(const std::string& name, const CaseOptions& opts);

}  // namespace qdyn

#endif  // QDYN_CASES_HPP_
