// Copyright 2026 The hinpair Authors.
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

#ifndef HINPAIR_CLI_H_
#define HINPAIR_CLI_H_

#include <ostream>

namespace hinpair {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // I/O or input data errors; failed gradcheck
inline constexpr int kExitUsage = 2;    // bad flags or config values
inline constexpr int kExitAbort = 3;    // numerical abort, unreadable checkpoint

// Commands: synth, train, disambiguate, eval, gradcheck.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace hinpair

#endif  // HINPAIR_CLI_H_
