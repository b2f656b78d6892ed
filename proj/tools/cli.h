// Copyright 2026 The diffcoref Authors.
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

#ifndef DIFFCOREF_TOOLS_CLI_H_
#define DIFFCOREF_TOOLS_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace diffcoref {
namespace cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

// Runs one subcommand. `args` excludes the program name. Returns the process
// exit code: 0 on success, 1 on invalid input, 2 on a runtime failure.
int Run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err);

}  // namespace cli
}  // namespace diffcoref

#endif  // DIFFCOREF_TOOLS_CLI_H_
