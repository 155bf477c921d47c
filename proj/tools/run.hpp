// Copyright 2026 The Thermo Authors
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


// Scenario runner shared by the command-line tool and its tests.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace thermo::app {

enum ExitCode : int {
  kExitPass = 0,
  kExitFail = 1,
  kExitInvalid = 2,
  kExitResource = 3,
};

struct RunOptions {
  std::filesystem::path scenario;
  std::filesystem::path out_dir;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> overrides;  ///< "dotted.path=value"
};

/// Runs every task, writes <name>.csv and <name>.json into out_dir, prints one
/// status line per task to `log` and returns the exit code. Never throws.
int run_scenario(const RunOptions& opts, std::ostream& log);

}  // namespace thermo::app
