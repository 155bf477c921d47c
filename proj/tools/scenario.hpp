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


// Scenario documents: named shift systems with their potentials and
// measures, plus an ordered task list.

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "thermo/errors.hpp"
#include "thermo/markov.hpp"
#include "thermo/potential.hpp"
#include "thermo/sft.hpp"

namespace thermo::app {

/// Malformed scenario content; `path()` locates the offending field.
class ValidationError : public InputError {
 public:
  ValidationError(const std::string& path, const std::string& message)
      : InputError(path + ": " + message), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct System {
  std::string name;
  Sft sft;
  std::map<std::string, Potential> potentials;
  std::map<std::string, MarkovMeasure> measures;

  /// Throws ValidationError naming `where` when the name does not resolve.
  const Potential& potential(const std::string& key, const std::string& where) const;
  const MarkovMeasure& measure(const std::string& key, const std::string& where) const;
};

struct Scenario {
  std::uint64_t seed = 0;
  std::map<std::string, System> systems;
  std::vector<nlohmann::json> tasks;

  const System& system(const std::string& key, const std::string& where) const;
};

/// Parses text, reporting syntax errors with line and column.
nlohmann::json parse_json_text(const std::string& text, const std::string& origin);

/// Applies "a.b.0.c=value" overrides; the value is read as JSON when it
/// parses and as a string otherwise.
void apply_override(nlohmann::json& doc, const std::string& assignment);

Scenario build_scenario(const nlohmann::json& doc);

/// Reads a required field of a given JSON type.
const nlohmann::json& require(const nlohmann::json& obj, const std::string& key,
                              const std::string& path);

}  // namespace thermo::app
