// Copyright 2026 The triagelab Authors
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

#ifndef TRIAGE_CLI_HPP_
#define TRIAGE_CLI_HPP_

#include <iosfwd>

namespace triage::cli {

// Environment variables mirror the long flags with this prefix, upper case
// and '-' replaced by '_' (TRIAGELAB_ALPHA, TRIAGELAB_LDA_ITERATIONS...).
inline constexpr const char* kEnvPrefix = "TRIAGELAB_";

// Runs one subcommand. Returns 0 on success, 1 on a runtime failure and 2
// for a usage error.
int Dispatch(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err);

}  // namespace triage::cli

#endif  // TRIAGE_CLI_HPP_
