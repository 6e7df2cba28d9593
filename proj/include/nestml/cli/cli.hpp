// Copyright 2026 The nestmlc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef NESTML_CLI_CLI_HPP
#define NESTML_CLI_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace nestml {

enum ExitCode : int {
  kExitOk = 0,
  kExitSyntax = 1,
  kExitSemantic = 2,
  kExitSolver = 3,
  kExitRuntime = 4,
  kExitUsage = 64,
};

// nestmlc with `args` excluding the program name. Data products go to `out`
// (a trace without --out) or under --out; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace nestml

#endif  // NESTML_CLI_CLI_HPP
