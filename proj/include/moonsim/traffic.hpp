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
 * @file traffic.hpp
 * @brief Poisson packet sources per (source, destination) pair and the
 *        multi-frame arrival process they induce.
 *
 * Each ordered pair owns one RandomStream keyed by (slice instance, src,
 * dst). Packets of a pair are cut into blocks and packed by a
 * MultiFrameAssembler; a multi-frame arrives at a node buffer when the packet
 * that completes it arrives. Offered load is measured in wire bits, so a
 * pair offered `r` Gbps emits r / 49152 multi-frames per ns on average.
 */

#pragma once

#include "moonsim/framing.hpp"
#include "moonsim/random.hpp"
#include "moonsim/slice.hpp"
#include "moonsim/time.hpp"

#include <cstdint>
#include <optional>
#include <queue>
#include <string>
#include <vector>

namespace moonsim {

inline constexpr std::uint64_t kDefaultPacketBits = 12000;

struct TrafficConfig {
    SliceKind slice = SliceKind::OtsIntra;
    /// Slice instance name; seeds the per-pair streams.
    std::string instance = "ots_intra";
    /// Aggregate offered load over all pairs, wire Gbps.
    double offered_gbps = 0.0;
    std::uint64_t packet_bits = kDefaultPacketBits;
    std::uint32_t sources = 2;
    /// Destination node count. Equal to `sources` for intra-network slices,
    /// where self-traffic is excluded; the remote MAN size for aggregation.
    std::uint32_t destinations = 2;
    /// Row-major sources × destinations weights; empty means uniform. Weights
    /// are normalized to sum to 1 over admissible pairs.
    std::vector<double> pair_weights;

    [[nodiscard]] bool excludes_self() const noexcept { return slice != SliceKind::OtsAgg; }
};

/// Throws ConfigError when sources/destinations/packet size/weights are
/// unusable or offered load is negative.
void validate(const TrafficConfig& cfg);

/// Per-ordered-pair offered rate in Gbps, row-major; zero on excluded pairs.
std::vector<double> pair_rates_gbps(const TrafficConfig& cfg);

/// Nominal slice capacity in Gbps: W×25 (OTS intra), M(M−1)×100 (OCS intra),
/// B(B−1)×100 (OCS MCN), 100 (aggregation). Throws ConfigError naming the
/// missing or out-of-range parameter.
double nominal_capacity(SliceKind slice, std::optional<std::uint32_t> M, std::optional<std::uint32_t> W,
                        std::optional<std::uint32_t> B);

/// Mean wire bits carried per packet: blocks × (49152 / 185).
double wire_bits_per_packet(std::uint64_t packet_bits);

struct PacketArrival {
    SimTime time;
    NodeId source = 0;
    NodeId destination = 0;
    std::uint64_t bits = 0;

    friend bool operator==(const PacketArrival&, const PacketArrival&) = default;
};

struct FrameArrival {
    SimTime time;
    NodeId source = 0;
    NodeId destination = 0;

    friend bool operator==(const FrameArrival&, const FrameArrival&) = default;
};

/// Packet arrival times of one pair: cumulative exponential gaps.
class PacketStream {
public:
    PacketStream(std::uint64_t seed, StreamId id, double pair_gbps, std::uint64_t packet_bits);

    /// Next arrival time; never returns for a zero-rate stream (check active()).
    SimTime next();
    [[nodiscard]] bool active() const noexcept { return mean_gap_ps_ > 0.0; }

private:
    RandomStream rng_;
    double mean_gap_ps_ = 0.0;
    SimTime t_ = SimTime::zero();
};

/// Multi-frame arrivals of one pair up to a horizon.
class FrameStream {
public:
    FrameStream(std::uint64_t seed, StreamId id, double pair_gbps, std::uint64_t packet_bits, SimTime horizon);

    /// Generation time of the next multi-frame, or nullopt once the pair has
    /// no more frames completed at or before the horizon.
    std::optional<SimTime> next();

    [[nodiscard]] std::uint64_t packets() const noexcept { return packets_; }
    [[nodiscard]] std::uint32_t pending_blocks() const noexcept { return assembler_.pending_blocks(); }

private:
    PacketStream packets_src_;
    MultiFrameAssembler assembler_;
    std::uint32_t blocks_per_packet_;
    SimTime horizon_;
    std::uint32_t ready_ = 0;
    SimTime ready_time_;
    std::uint64_t packets_ = 0;
    bool exhausted_ = false;
};

/// Time-ordered merge of every pair's FrameStream; ties go to the lower
/// (source, destination) index. Same sequence as generate_frame_arrivals().
class ArrivalSource {
public:
    ArrivalSource(const TrafficConfig& cfg, std::uint64_t seed, SimTime horizon);

    std::optional<FrameArrival> next();
    [[nodiscard]] std::optional<SimTime> peek_time() const;

    [[nodiscard]] std::uint64_t frames_emitted() const noexcept { return emitted_; }
    /// Packets that arrived at or before the horizon (valid once drained).
    [[nodiscard]] std::uint64_t packets() const noexcept;
    /// Blocks waiting in assemblers (valid once drained).
    [[nodiscard]] std::uint64_t pending_blocks() const noexcept;

private:
    struct Pair {
        NodeId source;
        NodeId destination;
        FrameStream stream;
    };
    struct Head {
        SimTime at;
        std::uint32_t pair;
    };
    struct Later {
        bool operator()(const Head& a, const Head& b) const noexcept {
            return a.at != b.at ? a.at > b.at : a.pair > b.pair;
        }
    };

    std::vector<Pair> pairs_;
    std::priority_queue<Head, std::vector<Head>, Later> heap_;
    std::uint64_t emitted_ = 0;
};

/// Pre-generated packet list, time-sorted, ties by (source, destination).
std::vector<PacketArrival> generate_arrivals(const TrafficConfig& cfg, std::uint64_t seed, SimTime horizon);

/// Pre-generated multi-frame arrivals; identical to draining ArrivalSource.
std::vector<FrameArrival> generate_frame_arrivals(const TrafficConfig& cfg, std::uint64_t seed, SimTime horizon);

}  // namespace moonsim
