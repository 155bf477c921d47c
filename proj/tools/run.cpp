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


#include "run.hpp"

#include <chrono>
#include <fstream>
#include <ostream>
#include <sstream>

#include "tasks.hpp"

namespace thermo::app {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(path.string(), "cannot read scenario file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int run_scenario(const RunOptions& opts, std::ostream& log) {
  try {
    nlohmann::json doc = parse_json_text(read_file(opts.scenario), opts.scenario.string());
    for (const auto& o : opts.overrides) apply_override(doc, o);
    if (opts.seed) doc["seed"] = *opts.seed;
    const Scenario scenario = build_scenario(doc);
    std::filesystem::create_directories(opts.out_dir);

    bool all_pass = true;
    nlohmann::json summary = nlohmann::json::array();
    for (std::size_t i = 0; i < scenario.tasks.size(); ++i) {
      const auto start = std::chrono::steady_clock::now();
      const TaskOutput out = run_task(scenario, scenario.tasks[i], i);
      const double seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      write_atomic(opts.out_dir / (out.name + ".csv"), out.csv.str());
      write_atomic(opts.out_dir / (out.name + ".json"), out.json.dump(2) + "\n");
      log << (out.pass ? "PASS " : "FAIL ") << out.name << " (" << out.type << ", " << seconds
          << " s)\n";
      summary.push_back({{"task", out.name}, {"type", out.type}, {"pass", out.pass}});
      all_pass = all_pass && out.pass;
    }
    write_atomic(opts.out_dir / "summary.json",
                 nlohmann::json{{"seed", scenario.seed}, {"pass", all_pass}, {"tasks", summary}}
                         .dump(2) + "\n");
    return all_pass ? kExitPass : kExitFail;
  } catch (const ValidationError& e) {
    log << "error: invalid scenario: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const ResourceError& e) {
    log << "error: resource limit: " << e.what() << "\n";
    return kExitResource;
  } catch (const InputError& e) {
    log << "error: invalid input: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kExitFail;
  }
}

}  // namespace thermo::app
