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

#include "moonsim/ots_ring.hpp"

#include "moonsim/errors.hpp"
#include "moonsim/sim_core.hpp"

#include <algorithm>

namespace moonsim {

void OtsRingConfig::validate() const {
    if (M < 2) {
        throw ConfigError("M", "must be >= 2, got " + std::to_string(M));
    }
    if (W < 1) {
        throw ConfigError("W", "must be >= 1");
    }
    if (slots_per_ring < M) {
        throw ConfigError("slots_per_ring", "must be >= M so nodes occupy distinct positions");
    }
    if (!(rate_gbps > 0.0)) {
        throw ConfigError("rate_gbps", "must be positive");
    }
    if (slot_duration <= SimTime::zero()) {
        throw ConfigError("slot_duration", "must be positive");
    }
    if (SimTime::transmission(multiframe_wire_bits(), rate_gbps) > slot_duration) {
        throw ConfigError("rate_gbps", "a multi-frame does not fit in one slot");
    }
    if (buffer_bytes < FramingConstants::multiframe_wire_bytes) {
        throw ConfigError("buffer_bytes", "must hold at least one multi-frame");
    }
}

SlotGrid::SlotGrid(std::uint32_t wavelengths, std::uint32_t slots_per_ring)
    : wavelengths_(wavelengths), slots_(slots_per_ring), cells_(std::size_t{wavelengths} * slots_per_ring) {}

OtsCell& SlotGrid::at(std::uint32_t wavelength, std::uint32_t position, std::int64_t tick) {
    const std::int64_t n = slots_;
    const auto idx = static_cast<std::uint32_t>(((position - tick) % n + n) % n);
    return cells_[std::size_t{wavelength} * slots_ + idx];
}

void SlotGrid::write(OtsCell& c, const MultiFrame& mf, SimTime now) {
    if (c.occupied) {
        throw SimulationError("write into an occupied OTS cell");
    }
    c.occupied = true;
    c.delivered = false;
    c.frame = mf;
    c.written_at = now;
}

std::uint64_t SlotGrid::in_flight() const noexcept {
    return static_cast<std::uint64_t>(
        std::count_if(cells_.begin(), cells_.end(), [](const OtsCell& c) { return c.occupied && !c.delivered; }));
}

std::uint64_t SlotGrid::occupied() const noexcept {
    return static_cast<std::uint64_t>(
        std::count_if(cells_.begin(), cells_.end(), [](const OtsCell& c) { return c.occupied; }));
}

OtsRing::OtsRing(const OtsRingConfig& cfg)
    : cfg_(cfg), tx_time_(SimTime::transmission(multiframe_wire_bits(), cfg.rate_gbps)), grid_(cfg.W, cfg.slots_per_ring) {
    cfg_.validate();
    positions_.reserve(cfg_.M);
    buffers_.reserve(cfg_.M);
    for (std::uint32_t i = 0; i < cfg_.M; ++i) {
        positions_.push_back(static_cast<std::uint32_t>(std::uint64_t{i} * cfg_.slots_per_ring / cfg_.M));
        buffers_.emplace_back(cfg_.buffer_bytes);
    }
}

bool OtsRing::enqueue(const MultiFrame& mf, SimTime now) { return buffers_.at(mf.source).try_enqueue(mf, now); }

void OtsRing::slot_tick(std::int64_t k, RawCounters& out) {
    const SimTime now = cfg_.slot_duration * k;
    const std::int64_t period = cfg_.control_interval_slots;
    const SimTime granted_upto = period == 0 ? now : cfg_.slot_duration * ((k / period) * period);
    const std::uint32_t limit = cfg_.writes_per_tick();
    for (NodeId i = 0; i < cfg_.M; ++i) {
        NodeBuffer& buf = buffers_[i];
        std::uint32_t writes = 0;
        for (std::uint32_t w = 0; w < cfg_.W; ++w) {
            OtsCell& c = grid_.at(w, positions_[i], k);
            if (c.occupied) {
                if (c.frame.destination == i && !c.delivered) {
                    out.on_delivery(c.frame, c.written_at, now);
                    c.delivered = true;
                }
                const NodeId owner = cfg_.stripping == StrippingPolicy::Destination ? c.frame.destination : c.frame.source;
                if (owner == i && c.delivered) {
                    c.occupied = false;
                }
            }
            if (!c.occupied && writes < limit && !buf.empty() && buf.front().generation_time <= granted_upto) {
                grid_.write(c, buf.begin_transmission(now + tx_time_), now);
                ++writes;
            }
        }
    }
}

std::uint64_t OtsRing::buffered_frames() const noexcept {
    std::uint64_t n = 0;
    for (const auto& b : buffers_) {
        n += b.waiting();
    }
    return n;
}

std::uint64_t OtsRing::peak_buffer_bytes() const noexcept {
    std::uint64_t p = 0;
    for (const auto& b : buffers_) {
        p = std::max(p, b.peak_bytes());
    }
    return p;
}

std::uint32_t OtsRing::slot_distance(NodeId src, NodeId dst) const noexcept {
    const std::uint32_t n = cfg_.slots_per_ring;
    return (positions_[dst] + n - positions_[src]) % n;
}

namespace {

struct OtsEvent {
    enum class Kind : std::uint8_t { Arrival, Tick } kind;
    std::int64_t tick = 0;
};

}  // namespace

MetricsReport run_ots_slice(const OtsRingConfig& cfg, const TrafficConfig& traffic, const RunParams& run) {
    cfg.validate();
    run.validate();
    if (traffic.sources != cfg.M || traffic.slice != SliceKind::OtsIntra) {
        throw ConfigError("traffic", "OTS traffic must be ots_intra over the ring's M nodes");
    }
    OtsRing ring(cfg);
    ArrivalSource arrivals(traffic, run.seed, run.horizon);

    RawCounters raw;
    raw.identity.scenario_id = run.scenario_id;
    raw.identity.slice = std::string(to_string(SliceKind::OtsIntra));
    raw.identity.M = cfg.M;
    raw.identity.W = cfg.W;
    raw.identity.seed = std::to_string(run.seed);
    raw.identity.offered_gbps = traffic.offered_gbps;
    raw.identity.normalized_load = traffic.offered_gbps / nominal_capacity(SliceKind::OtsIntra, cfg.M, cfg.W, {});
    raw.warmup = run.warmup;
    raw.horizon = run.horizon;
    raw.buffer_capacity_bytes = cfg.buffer_bytes;

    Simulator<OtsEvent> sim(cfg.slot_duration);
    std::optional<FrameArrival> next = arrivals.next();
    if (next) {
        sim.schedule(next->time, OtsEvent{OtsEvent::Kind::Arrival});
    }
    sim.schedule(cfg.slot_duration, OtsEvent{OtsEvent::Kind::Tick, 1});

    sim.run_until(run.horizon, [&](Simulator<OtsEvent>& s, OtsEvent& ev) {
        if (ev.kind == OtsEvent::Kind::Tick) {
            ring.slot_tick(ev.tick, raw);
            s.schedule(cfg.slot_duration * (ev.tick + 1), OtsEvent{OtsEvent::Kind::Tick, ev.tick + 1});
            return;
        }
        MultiFrame mf;
        mf.source = next->source;
        mf.destination = next->destination;
        mf.slice = TrafficSlice::Ots;
        mf.generation_time = next->time;
        raw.on_generated();
        if (!ring.enqueue(mf, s.now())) {
            raw.on_drop(s.now());
        }
        next = arrivals.next();
        if (next) {
            s.schedule(next->time, OtsEvent{OtsEvent::Kind::Arrival});
        }
    });

    raw.ledger.buffered_frames = ring.buffered_frames();
    raw.ledger.in_flight_frames = ring.grid().in_flight();
    raw.ledger.pending_blocks = arrivals.pending_blocks();
    raw.ledger.generated_packets = arrivals.packets();
    raw.peak_buffer_bytes = ring.peak_buffer_bytes();
    return finalize(raw);
}

}  // namespace moonsim
