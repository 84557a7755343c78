/*
 * Copyright 2026 The moonsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include "moonsim/cli/recipes.hpp"
#include "moonsim/cli/scenario.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace moonsim::cli {

inline constexpr const char* kToolName = "moonsim";
inline constexpr const char* kToolVersion = "1.0.0";

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitRuntime = 2 };

struct SimulateResult {
    SweepTable table;
    std::vector<CombinedReport> combined;
};

/// Runs every slice × load × seed of a scenario plus one combined report
/// per (load, seed).
SimulateResult simulate(const ScenarioConfig& cfg, unsigned threads);

/// Writes metrics.csv, combined.json and manifest.json into `dir`.
void write_simulation(const ScenarioConfig& cfg, const SimulateResult& result, const std::filesystem::path& dir);

/// Manifest document; its "config" member re-parses to `cfg`.
json manifest(const ScenarioConfig& cfg);

/// Entry point shared by the tool and the tests. `args` excludes argv[0].
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace moonsim::cli
