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


#ifndef QDYN_CLI_HPP_
#define QDYN_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace qdyn::cli {

// Exit codes shared by every subcommand.
inline constexpr int kClean = 0;
inline constexpr int kInputError = 1;
inline constexpr int kNegativeFinding = 2;

// Entry point of the qdyn tool; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qdyn::cli

#endif  // QDYN_CLI_HPP_
