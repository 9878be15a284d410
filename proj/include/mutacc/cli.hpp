// Copyright 2026 The mutacc Authors.
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

#ifndef MUTACC_CLI_HPP
#define MUTACC_CLI_HPP

#include <iosfwd>

namespace mutacc {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitIncompatible = 3;

/// Environment variable naming the default output directory.
inline constexpr const char* kOutDirEnv = "MUTACC_OUT_DIR";

/// Entry point of the `mutacc` tool: subcommands analyze, sweep and report.
/// Returns the process exit code; diagnostics go to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mutacc

#endif  // MUTACC_CLI_HPP
