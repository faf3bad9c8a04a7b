// Copyright 2026 The sbqs developers
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

#include "sbqs/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"state-based quantum simulation scenario runner"};
  app.require_subcommand(1);

  std::string file;
  std::string mode;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out;

  CLI::App* run = app.add_subcommand("run", "execute a scenario file");
  run->add_option("file", file, "scenario JSON file")->required();
  run->add_option("--mode", mode, "exact | circuit | sampled");
  run->add_option("--seed", seed, "RNG seed for sampled modes")
      ->each([&](const std::string&) { seed_set = true; });
  run->add_option("--out", out, "override the output path");

  CLI::App* validate = app.add_subcommand("validate", "schema-check a scenario file");
  validate->add_option("file", file, "scenario JSON file")->required();

  CLI11_PARSE(app, argc, argv);

  if (app.got_subcommand(validate)) {
    const sbqs::ValidationReport report = sbqs::validate_scenario(file);
    if (report.ok()) {
      std::cout << "OK\n";
      return 0;
    }
    for (const auto& v : report.violations) std::cout << "violation: " << v << "\n";
    return 2;
  }

  sbqs::CliOverrides overrides;
  if (!mode.empty()) overrides.mode = mode;
  if (seed_set) overrides.seed = seed;
  if (!out.empty()) overrides.out = out;

  try {
    const sbqs::Json summary = sbqs::run_scenario(file, overrides);
    std::cout << summary.dump(2) << "\n";
    return 0;
  } catch (const sbqs::SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
