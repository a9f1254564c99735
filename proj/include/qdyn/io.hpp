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


#ifndef QDYN_IO_HPP_
#define QDYN_IO_HPP_

#include <string>

#include "json.hpp"
#include "qdyn/channels.hpp"
#include "qdyn/compatdomain.hpp"
#include "qdyn/opendyn.hpp"

namespace qdyn::io {

using json = nlohmann::json;

/// Malformed input. The message names the offending field path or the
/// line/column of a syntax error.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// {"dim": rows, "re": [[...]], "im": [[...]]}; `dim` is the row count and must
// equal the column count for square matrices.
json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const json& j, const std::string& path = "$");

// Always written as kind "transfer".
json superoperator_to_json(const Superoperator& t);
// Accepts kinds "transfer", "choi" and "kraus".
Superoperator superoperator_from_json(const json& j, const std::string& path = "$");

json assignment_to_json(const AssignmentMap& phi);
AssignmentMap assignment_from_json(const json& j, const std::string& path = "$");

json generator_to_json(const Generator& g);
Generator generator_from_json(const json& j, const std::string& path = "$");

json domain_report_to_json(const DomainReport& r);
// Header rx,ry,rz,lmin followed by one line per landscape sample.
std::string domain_report_csv(const DomainReport& r);

json parse_json(const std::string& text);
json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace qdyn::io

#endif  // QDYN_IO_HPP_
