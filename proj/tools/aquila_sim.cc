// Copyright 2026 The Aquila Authors
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

// Scenario runner.
//
//   aquila_sim run <config> --out <dir> [--seed N]
//   aquila_sim compare <config> --out <dir> [--seed N]
//   aquila_sim list [--dir <custom-scenarios>]
//
// <config> is a scenario file or the name of a bundled scenario.
// Exit status: 0 ok, 1 invariant breach, 2 usage or config error.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "aquila/errors.h"
#include "aquila/report.h"
#include "aquila/scenario.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvariant = 1;
constexpr int kExitUsage = 2;

int Execute(const std::string& config_path, const std::string& out_dir,
            std::optional<std::uint64_t> seed, aquila::RunMode mode) {
  aquila::ScenarioConfig config = aquila::ResolveScenario(config_path);
  if (seed) config.seed = *seed;
  aquila::ValidateScenario(config);
  const aquila::RunReport report = aquila::ExecuteScenario(config, mode);
  aquila::WriteReport(report, out_dir);
  std::cout << "wrote " << out_dir << "/report.json and " << report.series.size()
            << " series\n";
  if (!report.ok()) {
    for (const auto& v : report.violations) std::cerr << "invariant: " << v << '\n';
    return kExitInvariant;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"AQUILA transport scenario runner"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::string custom_dir;

  auto* run = app.add_subcommand("run", "Run a scenario and write its report");
  run->add_option("config", config_path, "Scenario file or bundled scenario name")->required();
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_option("--seed", seed, "Override the scenario seed");

  auto* compare = app.add_subcommand("compare", "Run the scenario against its baseline arm");
  compare->add_option("config", config_path, "Scenario file or bundled scenario name")
      ->required();
  compare->add_option("--out", out_dir, "Output directory")->required();
  compare->add_option("--seed", seed, "Override the scenario seed");

  auto* list = app.add_subcommand("list", "List bundled and custom scenarios");
  list->add_option("--dir", custom_dir, "Directory of additional *.conf scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*list) {
      for (const auto& s : aquila::ListScenarios(custom_dir)) {
        std::cout << s.name << "\t" << s.description;
        if (s.source != "bundled") std::cout << "\t(" << s.source << ")";
        std::cout << '\n';
      }
      return kExitOk;
    }
    const auto mode = *compare ? aquila::RunMode::kCompare : aquila::RunMode::kRun;
    return Execute(config_path, out_dir, seed, mode);
  } catch (const aquila::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const aquila::TraceParseError& e) {
    std::cerr << "trace error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const aquila::SimulationAborted& e) {
    std::cerr << "aborted: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const aquila::ContractViolation& e) {
    std::cerr << "invariant: " << e.what() << '\n';
    return kExitInvariant;
  }
}
