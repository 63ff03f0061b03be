// Copyright 2026 The gameform Authors
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

#ifndef GAMEFORM_CLI_H_
#define GAMEFORM_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace gameform {

// Runs the command line `args` (without the program name). Machine output
// goes to `out`, diagnostics to `err`; `in` feeds the query loop of `solve`.
// Returns 0 on success, 1 on a domain failure, 2 on a usage error.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err, std::istream& in);

}  // namespace gameform

#endif  // GAMEFORM_CLI_H_
