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

#include "moonsim/cli/scenario.hpp"
#include "moonsim/plot.hpp"
#include "moonsim/traffic.hpp"

#include <map>
#include <string>
#include <vector>

namespace moonsim::cli {

struct Job {
    SliceSpec slice;
    double offered_gbps = 0.0;
    std::uint64_t seed = 1;
    std::string scenario_id;
};

struct JobSet {
    Constants constants;
    std::uint64_t packet_bits = kDefaultPacketBits;
    /// Horizon and warmup; seed and scenario id come from each job.
    RunParams run;
    std::vector<Job> jobs;
};

/// Runs every job (in parallel when threads > 1). Results keep job order.
std::vector<MetricsReport> run_jobs(const JobSet& set, unsigned threads);

struct SweepRequest {
    SliceKind slice = SliceKind::OtsIntra;
    /// Keys M, W, B, M_remote; each value list must be non-empty.
    std::map<std::string, std::vector<std::uint32_t>> grid;
    std::vector<double> loads;
    bool normalized = false;
    std::vector<std::uint64_t> seeds{1};
    double horizon_us = 2520.0;
    double warmup_us = 0.0;
    std::uint64_t packet_bits = kDefaultPacketBits;
    Constants constants;
};

/// Full cross product grid × loads × seeds. Every grid point shares the
/// slice id, hence the random streams (common random numbers). Throws
/// ConfigError on empty grids or loads and unknown grid keys.
JobSet build_sweep(const SweepRequest& req);

/// Parses "A:B:STEP" (inclusive) or "v1,v2,...". Throws ConfigError.
std::vector<double> parse_load_grid(const std::string& text);
/// Parses "1..10" or "1,2,5". Throws ConfigError.
std::vector<std::uint64_t> parse_seed_list(const std::string& text);
/// Parses "K=v1,v2" into (K, values). Throws ConfigError.
std::pair<std::string, std::vector<std::uint32_t>> parse_grid_entry(const std::string& text);

struct RecipeOptions {
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    /// Measurement window after warmup.
    double window_us = 25200.0;
    /// Long enough for every in-flight frame of the slowest slice to land.
    double warmup_us = 3024.0;
};

struct Recipe {
    std::string id;
    std::string description;
    JobSet jobs;
    FigureSpec figure;
    /// W values of the combined scenario; empty for single-slice figures.
    std::vector<std::uint32_t> combined_W;
};

inline const std::vector<std::string> kFigureIds{"fig2", "fig3", "fig4", "fig5", "fig6"};

/// Throws ConfigError("figure", ...) listing the valid ids.
Recipe make_recipe(const std::string& id, const RecipeOptions& opts = {});

/// Runs a recipe and returns the sorted table including mean rows and, for
/// the combined scenario, one total row per (W, load, seed).
SweepTable run_recipe(const Recipe& recipe, unsigned threads);

/// Nominal capacity of the combined network for a given OTS W.
double combined_nominal_gbps(const Constants& c, std::uint32_t W);

/// Slices of the combined network with the given OTS W.
std::vector<SliceSpec> combined_slices(std::uint32_t W);

}  // namespace moonsim::cli
