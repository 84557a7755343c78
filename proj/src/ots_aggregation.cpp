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

#include "moonsim/ots_aggregation.hpp"

#include "moonsim/errors.hpp"
#include "moonsim/sim_core.hpp"

#include <algorithm>
#include <optional>

namespace moonsim {

std::uint32_t AggregationConfig::slot_capacity_frames() const noexcept {
    const double bits = rate_gbps * static_cast<double>(slot_duration.ps()) / 1000.0;
    return static_cast<std::uint32_t>(bits / static_cast<double>(multiframe_wire_bits()));
}

SimTime AggregationConfig::cell_duration() const noexcept {
    const std::uint32_t n = std::max<std::uint32_t>(slot_capacity_frames(), 1);
    return SimTime::from_ps(slot_duration.ps() / n);
}

void AggregationConfig::validate() const {
    if (M_local < 2) {
        throw ConfigError("M", "must be >= 2, got " + std::to_string(M_local));
    }
    if (M_remote < 2) {
        throw ConfigError("M_remote", "must be >= 2, got " + std::to_string(M_remote));
    }
    if (slots_per_ring < std::max(M_local, M_remote)) {
        throw ConfigError("slots_per_ring", "must be >= node count");
    }
    if (!(rate_gbps > 0.0) || slot_capacity_frames() == 0) {
        throw ConfigError("rate_gbps", "a slot must hold at least one multi-frame");
    }
    if (slot_duration.ps() % slot_capacity_frames() != 0) {
        throw ConfigError("slot_duration", "must split into whole picosecond cells");
    }
    if (buffer_bytes < FramingConstants::multiframe_wire_bytes) {
        throw ConfigError("buffer_bytes", "must hold at least one multi-frame");
    }
    if (!(forward_share >= 0.0 && forward_share <= 1.0)) {
        throw ConfigError("forward_share", "must lie in [0, 1]");
    }
    if (mcn_transit < SimTime::zero()) {
        throw ConfigError("mcn_transit", "must be non-negative");
    }
}

std::uint32_t AggregationSlot::used() const noexcept {
    return static_cast<std::uint32_t>(
        std::count_if(cells.begin(), cells.end(), [](const AggCell& c) { return c.occupied; }));
}

bool groom_cell(AggCell& cell, NodeBuffer& buffer, SimTime now, SimTime tx_time) {
    if (cell.occupied || buffer.empty()) {
        return false;
    }
    cell.frame = buffer.begin_transmission(now + tx_time);
    cell.written_at = now;
    cell.occupied = true;
    return true;
}

std::vector<std::uint32_t> groom_tick(AggregationSlot& slot, std::span<NodeBuffer* const> nodes, SimTime now,
                                      SimTime tx_time) {
    std::vector<std::uint32_t> written(nodes.size(), 0);
    for (std::size_t n = 0; n < nodes.size(); ++n) {
        for (auto& cell : slot.cells) {
            if (groom_cell(cell, *nodes[n], now, tx_time)) {
                ++written[n];
            }
        }
    }
    return written;
}

GroomingHorseshoe::GroomingHorseshoe(const AggregationConfig& cfg, std::uint32_t nodes, std::uint32_t remote_nodes)
    : cfg_(cfg),
      nodes_(nodes),
      remote_nodes_(remote_nodes),
      cells_per_slot_(cfg.slot_capacity_frames()),
      conveyor_cells_(cfg.slots_per_ring * cfg.slot_capacity_frames()),
      cell_time_(cfg.cell_duration()),
      tx_time_(SimTime::transmission(multiframe_wire_bits(), cfg.rate_gbps)),
      conveyor_(conveyor_cells_) {
    positions_.reserve(nodes);
    buffers_.reserve(nodes);
    for (std::uint32_t i = 0; i < nodes; ++i) {
        const auto slot = static_cast<std::uint32_t>(std::uint64_t{i} * cfg.slots_per_ring / nodes);
        positions_.push_back(slot * cells_per_slot_);
        buffers_.emplace_back(cfg.buffer_bytes);
    }
}

bool GroomingHorseshoe::enqueue(const MultiFrame& mf, SimTime now) {
    return buffers_.at(mf.source).try_enqueue(mf, now);
}

AggCell& GroomingHorseshoe::cell_at(std::uint32_t position, std::int64_t c) {
    const std::int64_t n = conveyor_cells_;
    return conveyor_[static_cast<std::size_t>(((position - c) % n + n) % n)];
}

void GroomingHorseshoe::cell_tick(std::int64_t c, RawCounters& out, SimTime horizon) {
    const SimTime now = cell_time_ * c;
    // Node 0 is last on the horseshoe; its cell is the one about to exit.
    for (NodeId i = 1; i <= nodes_; ++i) {
        const NodeId node = i % nodes_;
        groom_cell(cell_at(positions_[node], c), buffers_[node], now, tx_time_);
    }
    AggCell& exiting = cell_at(0, c);
    if (exiting.occupied) {
        const SimTime at = now + cfg_.mcn_transit + distribution_delay(exiting.frame.destination);
        if (at <= horizon) {
            out.on_delivery(exiting.frame, exiting.written_at, at);
        } else {
            ++late_;
        }
        exiting.occupied = false;
    }
}

std::uint32_t GroomingHorseshoe::cells_to_gateway(NodeId i) const noexcept {
    return i == 0 ? 0 : conveyor_cells_ - positions_[i];
}

SimTime GroomingHorseshoe::distribution_delay(NodeId j) const noexcept {
    const auto slot = static_cast<std::int64_t>(std::uint64_t{j} * cfg_.slots_per_ring / remote_nodes_);
    return cfg_.slot_duration * slot;
}

std::uint64_t GroomingHorseshoe::buffered_frames() const noexcept {
    std::uint64_t n = 0;
    for (const auto& b : buffers_) {
        n += b.waiting();
    }
    return n;
}

std::uint64_t GroomingHorseshoe::occupied_cells() const noexcept {
    return static_cast<std::uint64_t>(
        std::count_if(conveyor_.begin(), conveyor_.end(), [](const AggCell& c) { return c.occupied; }));
}

std::uint64_t GroomingHorseshoe::peak_buffer_bytes() const noexcept {
    std::uint64_t p = 0;
    for (const auto& b : buffers_) {
        p = std::max(p, b.peak_bytes());
    }
    return p;
}

namespace {

struct AggEvent {
    enum class Kind : std::uint8_t { Arrival, Cell } kind;
    std::uint8_t direction = 0;
    std::int64_t cell = 0;
};

}  // namespace

MetricsReport run_aggregation_slice(const AggregationConfig& cfg, const TrafficConfig& traffic,
                                    const RunParams& run) {
    cfg.validate();
    run.validate();
    if (traffic.slice != SliceKind::OtsAgg || traffic.sources != cfg.M_local ||
        traffic.destinations != cfg.M_remote) {
        throw ConfigError("traffic", "aggregation traffic must be ots_agg over M_local x M_remote pairs");
    }
    TrafficConfig forward = traffic;
    forward.instance = traffic.instance + "/forward";
    forward.offered_gbps = traffic.offered_gbps * cfg.forward_share;
    TrafficConfig reverse = traffic;
    reverse.instance = traffic.instance + "/reverse";
    reverse.offered_gbps = traffic.offered_gbps - forward.offered_gbps;
    reverse.sources = cfg.M_remote;
    reverse.destinations = cfg.M_local;
    if (!traffic.pair_weights.empty()) {
        // Transpose so reverse weights stay attached to the same node pair.
        reverse.pair_weights.assign(traffic.pair_weights.size(), 0.0);
        for (std::uint32_t s = 0; s < cfg.M_local; ++s) {
            for (std::uint32_t d = 0; d < cfg.M_remote; ++d) {
                reverse.pair_weights[std::size_t{d} * cfg.M_local + s] =
                    traffic.pair_weights[std::size_t{s} * cfg.M_remote + d];
            }
        }
    }

    std::array<GroomingHorseshoe, 2> dirs{GroomingHorseshoe(cfg, cfg.M_local, cfg.M_remote),
                                          GroomingHorseshoe(cfg, cfg.M_remote, cfg.M_local)};
    std::array<ArrivalSource, 2> sources{ArrivalSource(forward, run.seed, run.horizon),
                                         ArrivalSource(reverse, run.seed, run.horizon)};
    std::array<std::optional<FrameArrival>, 2> next{sources[0].next(), sources[1].next()};

    RawCounters raw;
    raw.identity.scenario_id = run.scenario_id;
    raw.identity.slice = std::string(to_string(SliceKind::OtsAgg));
    raw.identity.M = cfg.M_local;
    raw.identity.seed = std::to_string(run.seed);
    raw.identity.offered_gbps = traffic.offered_gbps;
    raw.identity.normalized_load = traffic.offered_gbps / nominal_capacity(SliceKind::OtsAgg, cfg.M_local, {}, {});
    raw.warmup = run.warmup;
    raw.horizon = run.horizon;
    raw.buffer_capacity_bytes = cfg.buffer_bytes;

    const SimTime cell = cfg.cell_duration();
    Simulator<AggEvent> sim(cfg.slot_duration);
    for (std::uint8_t d = 0; d < 2; ++d) {
        if (next[d]) {
            sim.schedule(next[d]->time, AggEvent{AggEvent::Kind::Arrival, d});
        }
    }
    sim.schedule(cell, AggEvent{AggEvent::Kind::Cell, 0, 1});

    sim.run_until(run.horizon, [&](Simulator<AggEvent>& s, AggEvent& ev) {
        if (ev.kind == AggEvent::Kind::Cell) {
            dirs[0].cell_tick(ev.cell, raw, run.horizon);
            dirs[1].cell_tick(ev.cell, raw, run.horizon);
            s.schedule(cell * (ev.cell + 1), AggEvent{AggEvent::Kind::Cell, 0, ev.cell + 1});
            return;
        }
        const std::uint8_t d = ev.direction;
        MultiFrame mf;
        mf.source = next[d]->source;
        mf.destination = next[d]->destination;
        mf.slice = TrafficSlice::Aggregation;
        mf.generation_time = next[d]->time;
        raw.on_generated();
        if (!dirs[d].enqueue(mf, s.now())) {
            raw.on_drop(s.now());
        }
        next[d] = sources[d].next();
        if (next[d]) {
            s.schedule(next[d]->time, AggEvent{AggEvent::Kind::Arrival, d});
        }
    });

    for (std::size_t d = 0; d < 2; ++d) {
        raw.ledger.buffered_frames += dirs[d].buffered_frames();
        raw.ledger.in_flight_frames += dirs[d].occupied_cells() + dirs[d].exits_beyond_horizon();
        raw.ledger.pending_blocks += sources[d].pending_blocks();
        raw.ledger.generated_packets += sources[d].packets();
        raw.peak_buffer_bytes = std::max(raw.peak_buffer_bytes, dirs[d].peak_buffer_bytes());
    }
    return finalize(raw);
}

}  // namespace moonsim
