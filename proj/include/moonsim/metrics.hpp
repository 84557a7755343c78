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
 * @file metrics.hpp
 * @brief Run counters, the conservation ledger, report rows, CSV I/O.
 *
 * Two kinds of counts are kept per run:
 *  - the ledger, over the whole run: every generated multi-frame ends the run
 *    delivered, dropped, waiting in a buffer, or in flight. The identity is
 *    exact and checked by finalize().
 *  - the measurement window (warmup, horizon]: deliveries and drops whose
 *    event time falls in the window feed the rates and delay averages.
 */

#pragma once

#include "moonsim/framing.hpp"
#include "moonsim/time.hpp"

#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace moonsim {

/// One CSV row. Frame counts cover the whole run, warmup included, so that
/// delivered + dropped + residual equals generated on every row; they are
/// doubles so mean rows share the layout.
struct ReportRow {
    std::string scenario_id;
    std::string slice;
    std::optional<std::uint32_t> M;
    std::optional<std::uint32_t> B;
    std::optional<std::uint32_t> W;
    std::optional<std::uint32_t> N;
    std::optional<std::uint32_t> K;
    /// Decimal seed, or "mean" for aggregated rows.
    std::string seed;
    double offered_gbps = 0.0;
    double normalized_load = 0.0;
    double throughput_gbps = 0.0;
    double dropping_gbps = 0.0;
    double avg_queuing_us = 0.0;
    double avg_total_delay_us = 0.0;
    double delivered_frames = 0.0;
    double dropped_frames = 0.0;
    double residual_frames = 0.0;

    friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

inline constexpr const char* kMeanSeed = "mean";

struct Ledger {
    std::uint64_t generated_frames = 0;
    std::uint64_t delivered_frames = 0;
    std::uint64_t dropped_frames = 0;
    std::uint64_t buffered_frames = 0;
    std::uint64_t in_flight_frames = 0;
    /// Client blocks still in assemblers, not yet part of any frame.
    std::uint64_t pending_blocks = 0;
    std::uint64_t generated_packets = 0;

    [[nodiscard]] std::uint64_t residual_frames() const noexcept { return buffered_frames + in_flight_frames; }
    [[nodiscard]] static std::uint64_t bits(std::uint64_t frames) noexcept {
        return frames * FramingConstants::multiframe_wire_bits;
    }
    [[nodiscard]] bool balanced() const noexcept {
        return generated_frames == delivered_frames + dropped_frames + residual_frames();
    }
};

/// Counters filled by a slice model during one run.
struct RawCounters {
    ReportRow identity;  // rate/delay fields ignored
    SimTime warmup = SimTime::zero();
    SimTime horizon = SimTime::zero();
    Ledger ledger;

    std::uint64_t window_delivered = 0;
    std::uint64_t window_dropped = 0;
    std::uint64_t window_delivered_blocks = 0;
    std::int64_t queuing_ps_sum = 0;
    std::int64_t total_ps_sum = 0;
    SimTime min_total = SimTime::from_ps(std::numeric_limits<std::int64_t>::max());
    SimTime max_total = SimTime::zero();
    SimTime max_queuing = SimTime::zero();

    std::uint64_t buffer_capacity_bytes = 0;
    std::uint64_t peak_buffer_bytes = 0;

    [[nodiscard]] bool in_window(SimTime t) const noexcept { return t > warmup && t <= horizon; }

    void on_generated() noexcept { ++ledger.generated_frames; }

    void on_drop(SimTime at) noexcept {
        ++ledger.dropped_frames;
        if (in_window(at)) {
            ++window_dropped;
        }
    }

    /// `start` is the start of transmission, `at` the delivery instant.
    void on_delivery(const MultiFrame& mf, SimTime start, SimTime at) noexcept;
};

struct MetricsReport {
    ReportRow row;
    Ledger ledger;
    double goodput_gbps = 0.0;
    double avg_propagation_us = 0.0;
    /// Extremes over delivered frames in the window; zero if none.
    double min_total_delay_us = 0.0;
    double max_total_delay_us = 0.0;
    double max_queuing_us = 0.0;
    std::uint64_t buffer_capacity_bytes = 0;
    std::uint64_t peak_buffer_bytes = 0;
};

/// Converts counters to rates and averages. Throws SimulationError if the
/// ledger does not balance or the window is empty.
MetricsReport finalize(const RawCounters& raw);

/// Ordered rows of a sweep.
class SweepTable {
public:
    void add(ReportRow row) { rows_.push_back(std::move(row)); }
    void add(const MetricsReport& r) { rows_.push_back(r.row); }

    /// Appends one mean row per group of rows that differ only in seed.
    void append_means();

    /// Sorts by slice, parameters, load, scenario id, then seed (mean last).
    void sort();

    [[nodiscard]] const std::vector<ReportRow>& rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t size() const noexcept { return rows_.size(); }
    [[nodiscard]] bool empty() const noexcept { return rows_.empty(); }

    friend bool operator==(const SweepTable&, const SweepTable&) = default;

private:
    std::vector<ReportRow> rows_;
};

inline constexpr const char* kCsvHeader =
    "scenario_id,slice,M,B,W,N,K,seed,offered_gbps,normalized_load,throughput_gbps,dropping_gbps,"
    "avg_queuing_us,avg_total_delay_us,delivered_frames,dropped_frames,residual_frames";

std::string to_csv(const SweepTable& table);
SweepTable parse_csv(const std::string& text);

/// Writes to_csv(table). Throws std::runtime_error naming the path on
/// failure and std::invalid_argument for an empty table.
void write_csv(const SweepTable& table, const std::filesystem::path& path);
SweepTable read_csv(const std::filesystem::path& path);

/// Shortest round-tripping decimal form.
std::string format_number(double v);

}  // namespace moonsim
