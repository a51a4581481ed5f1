// Copyright 2026 The dirtree Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DIRTREE_CLI_H_
#define DIRTREE_CLI_H_

#include <iosfwd>

namespace dirtree::cli {

// Exit codes of run().
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitInternalError = 2;

// Entry point of the dirtree command. Subcommands: validate, annotate,
// features, train, classify, segment, tree, blocks, eval. Results go to
// `out` (or --out), diagnostics to `err`. The DIRTREE_CONFIG environment
// variable may name a JSON config whose settings the flags override.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dirtree::cli

#endif  // DIRTREE_CLI_H_
