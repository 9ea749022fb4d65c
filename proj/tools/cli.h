// Copyright 2026 The xeblab Authors
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

#ifndef XEBLAB_TOOLS_CLI_H
#define XEBLAB_TOOLS_CLI_H

#include <iosfwd>

namespace xeblab {

enum ExitCode : int {
    kExitOk = 0,
    kExitTestFailed = 1,
    kExitUsage = 2,
    kExitIo = 3,
    kExitResource = 4,
};

/// Entry point of the `xeblab` binary. Subcommands: gen, simulate, sample,
/// xeb, reduce, analyze. Reports go to `out`, diagnostics and timing to `err`.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace xeblab

#endif
