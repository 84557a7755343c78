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
 * @file ots_aggregation.hpp
 * @brief Inter-MAN OTS slice over a horseshoe: grooming on λ1, MCN transit,
 *        distribution on λ2.
 *
 * Each 2.1 us slot of the 100 Gbps grooming wavelength is split into four
 * 0.525 us cells, one multi-frame each. The horseshoe is modelled as a
 * conveyor of slots_per_ring × 4 cells that advances one cell per cell time.
 * Cells enter just downstream of the gateway (node 0), pass nodes
 * 1 .. M−1 in order, reach node 0 last and exit to the MCN.
 *
 * Every cell a node sees may take one frame from that node's buffer. Source
 * arc, MCN transit and the distribution arc from the remote gateway to the
 * destination make up the propagation part of the total delay. λ2 is
 * contention-free.
 *
 * Traffic runs both ways between the two MANs on separate λ1 conveyors; the
 * slice's offered load is split evenly between the directions.
 */

#pragma once

#include "moonsim/framing.hpp"
#include "moonsim/metrics.hpp"
#include "moonsim/node_buffer.hpp"
#include "moonsim/run.hpp"
#include "moonsim/traffic.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace moonsim {

inline constexpr SimTime kMcnTransit = SimTime::from_ps(2'520'000'000);

struct AggregationConfig {
    std::uint32_t M_local = 12;
    std::uint32_t M_remote = 12;
    double rate_gbps = 100.0;
    SimTime slot_duration = kSlotDuration;
    std::uint32_t slots_per_ring = 240;
    std::uint64_t buffer_bytes = 16384;
    SimTime mcn_transit = kMcnTransit;
    /// Fraction of the offered load sent from the local to the remote MAN;
    /// the rest flows back. 1 gives one-way traffic.
    double forward_share = 0.5;

    /// floor(rate × slot / 49152): 4 at 100 Gbps and 2.1 us.
    [[nodiscard]] std::uint32_t slot_capacity_frames() const noexcept;
    [[nodiscard]] SimTime cell_duration() const noexcept;
    [[nodiscard]] SimTime ring_propagation() const noexcept { return slot_duration * slots_per_ring; }
    void validate() const;
};

struct AggCell {
    bool occupied = false;
    MultiFrame frame;
    SimTime written_at;
};

struct AggregationSlot {
    std::vector<AggCell> cells;

    explicit AggregationSlot(std::uint32_t capacity = 4) : cells(capacity) {}
    [[nodiscard]] std::uint32_t used() const noexcept;
};

/// Writes the head frame of `buffer` into `cell` if the cell is free.
/// Returns true on a write. The frame's buffer space is held until
/// `now + tx_time`.
bool groom_cell(AggCell& cell, NodeBuffer& buffer, SimTime now, SimTime tx_time);

/// Slot-level grooming: the slot passes `nodes` in horseshoe order and each
/// node fills the remaining free cells FIFO. Returns frames written per node.
std::vector<std::uint32_t> groom_tick(AggregationSlot& slot, std::span<NodeBuffer* const> nodes, SimTime now,
                                      SimTime tx_time);

/// One λ1 conveyor plus the buffers of its source MAN.
class GroomingHorseshoe {
public:
    GroomingHorseshoe(const AggregationConfig& cfg, std::uint32_t nodes, std::uint32_t remote_nodes);

    bool enqueue(const MultiFrame& mf, SimTime now);

    /// Cell time c (now = c × cell duration): every node grooms into the cell
    /// at its position, then the cell at the gateway exits. Deliveries at or
    /// before `horizon` are recorded; later ones count as in flight.
    void cell_tick(std::int64_t c, RawCounters& out, SimTime horizon);

    /// Source node i to gateway, in conveyor cells.
    [[nodiscard]] std::uint32_t cells_to_gateway(NodeId i) const noexcept;
    /// Remote gateway to remote node j.
    [[nodiscard]] SimTime distribution_delay(NodeId j) const noexcept;

    [[nodiscard]] std::uint64_t buffered_frames() const noexcept;
    [[nodiscard]] std::uint64_t occupied_cells() const noexcept;
    [[nodiscard]] std::uint64_t peak_buffer_bytes() const noexcept;
    [[nodiscard]] std::uint64_t exits_beyond_horizon() const noexcept { return late_; }
    [[nodiscard]] NodeBuffer& buffer(NodeId i) { return buffers_[i]; }

private:
    AggCell& cell_at(std::uint32_t position, std::int64_t c);

    AggregationConfig cfg_;
    std::uint32_t nodes_;
    std::uint32_t remote_nodes_;
    std::uint32_t cells_per_slot_;
    std::uint32_t conveyor_cells_;
    SimTime cell_time_;
    SimTime tx_time_;
    std::vector<std::uint32_t> positions_;
    std::vector<NodeBuffer> buffers_;
    std::vector<AggCell> conveyor_;
    std::uint64_t late_ = 0;
};

/// Full slice run over both directions. `traffic.sources` must be M_local and
/// `traffic.destinations` M_remote; the reverse direction swaps the roles.
MetricsReport run_aggregation_slice(const AggregationConfig& cfg, const TrafficConfig& traffic,
                                    const RunParams& run);

}  // namespace moonsim
