/*
 * Copyright 2026 The threshcert Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef THRESHCERT_CLI_H_
#define THRESHCERT_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace threshcert::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitInfeasible = 3;

// Runs one subcommand (simulate, select, certify, ensemble, diagnose).
// args excludes the program name. Reports go to `out`, errors to `err`.
int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int Main(int argc, char** argv);

}  // namespace threshcert::cli

#endif  // THRESHCERT_CLI_H_
