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

/**
 * @file scenario.hpp
 * @brief Scenario documents (JSON), slice dispatch and the combined report.
 *
 * Document keys (all optional except where noted):
 *
 *   seeds        [uint]                 default [1]
 *   horizon_us   number                 default 2520
 *   warmup_us    number                 default 0
 *   packet_bits  uint                   default 12000
 *   loads        {mode: "normalized" | "gbps", values: [number]}   required
 *   output_dir   string                 default "out"
 *   constants    {…}                    see Constants
 *   slices       [{id, type, M, W, B, M_remote}]                   required
 *
 * Unknown keys are rejected with the dotted path of the offending key.
 */

#pragma once

#include "moonsim/metrics.hpp"
#include "moonsim/ots_ring.hpp"
#include "moonsim/run.hpp"
#include "moonsim/slice.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace moonsim::cli {

using json = nlohmann::ordered_json;

struct Constants {
    double slot_duration_us = 2.1;
    double ots_rate_gbps = 25.0;
    std::uint32_t ots_slots_per_ring = 240;
    std::uint64_t ots_buffer_bytes = 65536;
    std::uint32_t ots_control_interval_slots = 10;
    double ocs_rate_gbps = 100.0;
    std::uint64_t ocs_buffer_bytes = 25600;
    double intra_ring_us = 504.0;
    double mcn_ring_us = 5040.0;
    double agg_rate_gbps = 100.0;
    std::uint64_t agg_buffer_bytes = 16384;
    double mcn_transit_us = 2520.0;
    double agg_forward_share = 0.5;

    friend bool operator==(const Constants&, const Constants&) = default;
};

struct SliceSpec {
    std::string id;
    SliceKind kind = SliceKind::OtsIntra;
    /// Node count of the MAN (OTS, OCS intra, aggregation source MAN).
    std::optional<std::uint32_t> M;
    std::optional<std::uint32_t> W;
    std::optional<std::uint32_t> B;
    std::optional<std::uint32_t> M_remote;

    friend bool operator==(const SliceSpec&, const SliceSpec&) = default;
};

enum class LoadMode : std::uint8_t { Normalized, Gbps };

struct ScenarioConfig {
    std::vector<std::uint64_t> seeds{1};
    double horizon_us = 2520.0;
    double warmup_us = 0.0;
    std::uint64_t packet_bits = 12000;
    LoadMode load_mode = LoadMode::Normalized;
    std::vector<double> loads;
    std::string output_dir = "out";
    Constants constants;
    std::vector<SliceSpec> slices;

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// The six-slice default network: two MANs of 12 nodes, W=4, an 8-node MCN,
/// one aggregation slice; normalized load 0.8; 3024 us warmup, 25200 us window.
ScenarioConfig default_scenario();

/// Parses and validates. Throws ConfigError naming the dotted field path.
ScenarioConfig parse_scenario(const json& doc);
json to_json(const ScenarioConfig& cfg);

/// Validates bounds (M >= 2, W >= 1, B >= 2, ...). Throws ConfigError.
void validate(const ScenarioConfig& cfg);

/// Applies `path=value` (dotted path, array indices allowed) to a document.
/// The value is parsed as JSON when possible, else taken as a string.
void apply_override(json& doc, const std::string& assignment);

/// Nominal capacity of one slice under the constants, in Gbps.
double slice_nominal_gbps(const SliceSpec& s, const Constants& c);

/// OTS ring parameters under the constants.
OtsRingConfig ots_ring_config(const Constants& c, std::uint32_t M, std::uint32_t W);

/// Runs one slice at `offered_gbps`. The slice id seeds the random streams.
MetricsReport run_slice(const SliceSpec& s, const Constants& c, std::uint64_t packet_bits, double offered_gbps,
                        const RunParams& run, const std::string& scenario_id);

struct CombinedReport {
    std::vector<MetricsReport> slices;
    ReportRow total;
    double nominal_gbps = 0.0;
    double utilization = 0.0;
};

/// Total row: sums of rates and frame counts, delivery-weighted delays.
CombinedReport combine(std::vector<MetricsReport> slices, double nominal_gbps, const std::string& scenario_id,
                       std::optional<std::uint32_t> W);

/// Worker count for sweeps: MOON_SIM_THREADS if set and valid, otherwise
/// the hardware concurrency.
unsigned thread_count();

}  // namespace moonsim::cli
