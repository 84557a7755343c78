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
 * @file planner.hpp
 * @brief Wavelength dimensioning: closed-form OCS counts and a simulated
 *        search for the smallest OTS wavelength count meeting QoS targets.
 */

#pragma once

#include "moonsim/metrics.hpp"
#include "moonsim/ots_ring.hpp"
#include "moonsim/run.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace moonsim {

/// L = M(M−1). Throws ConfigError for M < 2.
std::uint64_t required_lightpaths(std::uint32_t M);

/// N = L / 2. Throws ConfigError for M < 2.
std::uint64_t required_ocs_wavelengths(std::uint32_t M);

struct QosTarget {
    std::optional<double> max_avg_queuing_us;
    std::optional<double> max_avg_total_delay_us;
    std::optional<double> max_drop_gbps;
    /// Dropped / offered.
    std::optional<double> max_drop_fraction;

    /// Load at which each candidate W is evaluated: either a fraction of the
    /// candidate's nominal W × 25 Gbps, or a fixed offered rate.
    enum class LoadMode : std::uint8_t { Normalized, FixedGbps } load_mode = LoadMode::Normalized;
    double at_load = 0.8;

    /// Throws ConfigError when no target is set or the load is out of range.
    /// Non-positive delay limits are accepted and simply unmeetable.
    void validate() const;
    /// Every set limit holds inclusively (value <= limit).
    [[nodiscard]] bool met_by(const ReportRow& mean) const;
};

struct EvidenceRow {
    std::uint32_t W = 0;
    ReportRow mean;
    bool meets = false;
};

struct PlanResult {
    std::optional<std::uint32_t> chosen_W;
    std::vector<EvidenceRow> evidence;
    /// "W=<n>" or "no W in range [lo, hi]".
    std::string summary;
};

/// Per-(W, seed) evaluation hook; the default runs run_ots_slice.
using OtsEvaluator = std::function<ReportRow(std::uint32_t W, double offered_gbps, std::uint64_t seed)>;

struct PlanRequest {
    std::uint32_t M = 12;
    QosTarget target;
    std::uint32_t W_min = 1;
    std::uint32_t W_max = 16;
    std::vector<std::uint64_t> seeds{1};
    RunParams run;
    OtsRingConfig base;
    std::uint64_t packet_bits = kDefaultPacketBits;
    unsigned threads = 1;
};

/// Linear ascending search. Every W in range is evaluated so the evidence
/// table is complete; the result is the smallest qualifying W.
PlanResult min_ots_wavelengths(const PlanRequest& req, const OtsEvaluator& evaluate = {});

/// Evidence rows as CSV (W, offered, metric means, meets).
std::string evidence_csv(const PlanResult& result);

}  // namespace moonsim
