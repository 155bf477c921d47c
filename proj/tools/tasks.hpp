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


// Task dispatch: each task turns scenario data into one CSV table and one
// JSON summary.

#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "report.hpp"
#include "scenario.hpp"

namespace thermo::app {

struct TaskOutput {
  std::string name;
  std::string type;
  bool pass = true;
  CsvTable csv;
  nlohmann::json json;
};

/// Runs one task. Throws ValidationError for malformed task fields,
/// ResourceError when a size cap is hit; other library errors propagate.
TaskOutput run_task(const Scenario& scenario, const nlohmann::json& task, std::size_t index);

}  // namespace thermo::app
