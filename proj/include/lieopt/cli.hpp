// Copyright 2026 The lieopt Authors
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

#ifndef LIEOPT_CLI_HPP
#define LIEOPT_CLI_HPP

#include <ostream>

namespace lieopt {

inline constexpr int kExitOk = 0;
inline constexpr int kExitToleranceFailure = 1;
inline constexpr int kExitError = 2;

/// Entry point of the `lieopt` tool. Subcommands: algebra, target, optimize,
/// verify, bound. Errors are reported on `err` as `error[<kind>]: message`.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace lieopt

#endif
