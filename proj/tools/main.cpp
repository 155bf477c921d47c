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


#include <iostream>

#include <CLI11.hpp>

#include "run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Thermodynamic formalism on subshifts of finite type"};
  app.require_subcommand(1);
  thermo::app::RunOptions opts;
  std::uint64_t seed = 0;
  CLI::App* run = app.add_subcommand("run", "Run every task of a scenario file");
  run->add_option("scenario", opts.scenario, "Scenario JSON file")->required();
  run->add_option("--out,-o", opts.out_dir, "Output directory")->required();
  CLI::Option* seed_opt = run->add_option("--seed", seed, "Override the scenario seed");
  run->add_option("--set", opts.overrides, "Override a field: dotted.path=json_value");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : thermo::app::kExitInvalid;
  }
  if (*seed_opt) opts.seed = seed;
  return thermo::app::run_scenario(opts, std::cout);
}
