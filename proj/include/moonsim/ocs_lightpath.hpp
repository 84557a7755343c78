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
 * @file ocs_lightpath.hpp
 * @brief Non-blocking OCS slice: one dedicated 100 Gbps lightpath per
 *        ordered node pair, each fed by a per-destination drop-tail buffer.
 *
 * Used for the intra-MAN slice (M nodes, 504 us ring) and the MCN slice
 * (B ROADMs, 5040 us ring). Each ordered pair is an independent
 * single-server queue, and a frame holds buffer space until its own
 * transmission ends.
 */

#pragma once

#include "moonsim/metrics.hpp"
#include "moonsim/node_buffer.hpp"
#include "moonsim/run.hpp"
#include "moonsim/slice.hpp"
#include "moonsim/traffic.hpp"

#include <cstdint>
#include <optional>

namespace moonsim {

inline constexpr SimTime kIntraManRingPropagation = SimTime::from_ps(504'000'000);
inline constexpr SimTime kMcnRingPropagation = SimTime::from_ps(5'040'000'000);

struct OcsConfig {
    SliceKind slice = SliceKind::OcsIntra;
    std::uint32_t node_count = 12;
    double rate_gbps = 100.0;
    std::uint64_t buffer_bytes_per_destination = 25600;
    SimTime ring_propagation = kIntraManRingPropagation;

    /// L = n(n−1) directed lightpaths.
    [[nodiscard]] std::uint64_t lightpaths() const noexcept {
        return std::uint64_t{node_count} * (node_count - 1);
    }
    /// N (or K) = L / 2.
    [[nodiscard]] std::uint64_t wavelengths() const noexcept { return lightpaths() / 2; }

    void validate() const;

    static OcsConfig intra_man(std::uint32_t M);
    static OcsConfig mcn(std::uint32_t B);
};

/// Shortest-arc propagation between evenly spaced nodes; an exact half-ring
/// tie goes clockwise.
SimTime ocs_propagation(const OcsConfig& cfg, NodeId src, NodeId dst);

class LightpathServer {
public:
    struct Service {
        SimTime start;
        SimTime end;
    };

    LightpathServer(NodeId src, NodeId dst, const OcsConfig& cfg);

    /// Admits `mf` at `now` if it fits (counting the frame in service) and
    /// schedules its transmission FIFO behind earlier frames.
    std::optional<Service> enqueue(const MultiFrame& mf, SimTime now);

    [[nodiscard]] SimTime busy_until() const noexcept { return buffer_.last_end(); }
    [[nodiscard]] SimTime service_time() const noexcept { return service_; }
    [[nodiscard]] NodeBuffer& buffer() noexcept { return buffer_; }
    [[nodiscard]] NodeId source() const noexcept { return src_; }
    [[nodiscard]] NodeId destination() const noexcept { return dst_; }

private:
    NodeId src_;
    NodeId dst_;
    SimTime service_;
    NodeBuffer buffer_;
};

enum class OcsEngine : std::uint8_t {
    /// All pairs merged on one Simulator event loop.
    EventLoop,
    /// Pairs simulated one after another; valid because pairs share nothing.
    PerPair,
};

/// `traffic.sources` must equal cfg.node_count and traffic.slice cfg.slice.
MetricsReport run_ocs_slice(const OcsConfig& cfg, const TrafficConfig& traffic, const RunParams& run,
                            OcsEngine engine = OcsEngine::PerPair);

/// run_ocs_slice for an MCN config.
MetricsReport run_mcn_slice(const OcsConfig& cfg, const TrafficConfig& traffic, const RunParams& run,
                            OcsEngine engine = OcsEngine::PerPair);

}  // namespace moonsim
