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
 * @file ots_ring.hpp
 * @brief OTS intra-MAN slice: time-slotted WDM ring with per-node shared
 *        drop-tail buffers.
 *
 * Each wavelength carries `slots_per_ring` cells that advance one node
 * position per slot. Node i sits at position floor(i × slots / M). At tick k
 * the cell seen at position p is cell (p − k) mod slots, so rotation costs
 * nothing.
 *
 * Slot access follows the control cadence: a frame may be written only once
 * a control instant (every `control_interval_slots` slots) has passed since
 * its generation, i.e. the node controller has reported it and received a
 * grant. control_interval_slots = 0 gives an ideal oracle that grants every
 * slot immediately.
 */

#pragma once

#include "moonsim/framing.hpp"
#include "moonsim/metrics.hpp"
#include "moonsim/node_buffer.hpp"
#include "moonsim/run.hpp"
#include "moonsim/traffic.hpp"

#include <cstdint>
#include <vector>

namespace moonsim {

enum class StrippingPolicy : std::uint8_t {
    /// Receiver empties the cell; downstream nodes may reuse it.
    Destination,
    /// Cell circulates back to its source before being freed.
    Source,
};

struct OtsRingConfig {
    std::uint32_t M = 12;
    std::uint32_t W = 4;
    double rate_gbps = 25.0;
    std::uint32_t slots_per_ring = 240;
    SimTime slot_duration = kSlotDuration;
    std::uint64_t buffer_bytes = 65536;
    std::uint32_t control_interval_slots = 10;
    /// Writes per node per tick; 0 means W (one per transceiver).
    std::uint32_t max_writes_per_tick = 0;
    StrippingPolicy stripping = StrippingPolicy::Destination;

    [[nodiscard]] SimTime ring_propagation() const noexcept { return slot_duration * slots_per_ring; }
    [[nodiscard]] std::uint32_t writes_per_tick() const noexcept {
        return max_writes_per_tick == 0 ? W : max_writes_per_tick;
    }
    /// Throws ConfigError on out-of-range fields.
    void validate() const;
};

struct OtsCell {
    bool occupied = false;
    bool delivered = false;
    MultiFrame frame;
    SimTime written_at;
};

/// Circulating cell state of every wavelength.
class SlotGrid {
public:
    SlotGrid(std::uint32_t wavelengths, std::uint32_t slots_per_ring);

    [[nodiscard]] std::uint32_t wavelengths() const noexcept { return wavelengths_; }
    [[nodiscard]] std::uint32_t slots() const noexcept { return slots_; }

    /// Cell passing ring position `position` at tick `tick`.
    OtsCell& at(std::uint32_t wavelength, std::uint32_t position, std::int64_t tick);
    [[nodiscard]] const OtsCell& cell(std::uint32_t wavelength, std::uint32_t index) const {
        return cells_[std::size_t{wavelength} * slots_ + index];
    }

    /// Places a frame into an empty cell; SimulationError if occupied.
    void write(OtsCell& c, const MultiFrame& mf, SimTime now);

    /// Occupied cells whose frame is not yet delivered.
    [[nodiscard]] std::uint64_t in_flight() const noexcept;
    [[nodiscard]] std::uint64_t occupied() const noexcept;

private:
    std::uint32_t wavelengths_;
    std::uint32_t slots_;
    std::vector<OtsCell> cells_;
};

class OtsRing {
public:
    explicit OtsRing(const OtsRingConfig& cfg);

    [[nodiscard]] const OtsRingConfig& config() const noexcept { return cfg_; }
    [[nodiscard]] std::uint32_t position(NodeId node) const noexcept { return positions_[node]; }

    /// Drop-tail admission into the source node's buffer.
    bool enqueue(const MultiFrame& mf, SimTime now);

    /// One slot boundary (tick index k, time now = k × slot). Every node in
    /// ascending order, every wavelength in ascending order: receive and
    /// strip frames addressed to the node, then write the head frame into a
    /// free cell if granted. Records deliveries into `out`.
    void slot_tick(std::int64_t k, RawCounters& out);

    [[nodiscard]] SlotGrid& grid() noexcept { return grid_; }
    [[nodiscard]] const SlotGrid& grid() const noexcept { return grid_; }
    [[nodiscard]] NodeBuffer& buffer(NodeId node) { return buffers_[node]; }

    [[nodiscard]] std::uint64_t buffered_frames() const noexcept;
    [[nodiscard]] std::uint64_t peak_buffer_bytes() const noexcept;

    /// Hops from src to dst in the ring direction, in slot positions.
    [[nodiscard]] std::uint32_t slot_distance(NodeId src, NodeId dst) const noexcept;

private:
    OtsRingConfig cfg_;
    SimTime tx_time_;
    std::vector<std::uint32_t> positions_;
    std::vector<NodeBuffer> buffers_;
    SlotGrid grid_;
};

/// Full slice run. `traffic.sources` must equal cfg.M.
MetricsReport run_ots_slice(const OtsRingConfig& cfg, const TrafficConfig& traffic, const RunParams& run);

}  // namespace moonsim
