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

#include "moonsim/traffic.hpp"

#include "moonsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

namespace moonsim {
namespace {

std::uint32_t require(std::optional<std::uint32_t> v, const char* name, std::uint32_t min) {
    if (!v) {
        throw ConfigError(name, "required for this slice");
    }
    if (*v < min) {
        throw ConfigError(name, "must be >= " + std::to_string(min) + ", got " + std::to_string(*v));
    }
    return *v;
}

}  // namespace

void validate(const TrafficConfig& cfg) {
    if (!(cfg.offered_gbps >= 0.0) || !std::isfinite(cfg.offered_gbps)) {
        throw ConfigError("offered_gbps", "must be a finite non-negative rate");
    }
    if (cfg.packet_bits == 0) {
        throw ConfigError("packet_bits", "must be >= 1");
    }
    const std::uint32_t min_nodes = cfg.excludes_self() ? 2 : 1;
    if (cfg.sources < min_nodes) {
        throw ConfigError("sources", "must be >= " + std::to_string(min_nodes));
    }
    if (cfg.excludes_self() && cfg.destinations != cfg.sources) {
        throw ConfigError("destinations", "must equal sources for intra-network traffic");
    }
    if (cfg.destinations < 1) {
        throw ConfigError("destinations", "must be >= 1");
    }
    if (!cfg.pair_weights.empty()) {
        if (cfg.pair_weights.size() != std::size_t{cfg.sources} * cfg.destinations) {
            throw ConfigError("pair_weights", "expected sources x destinations entries");
        }
        double sum = 0.0;
        for (std::uint32_t s = 0; s < cfg.sources; ++s) {
            for (std::uint32_t d = 0; d < cfg.destinations; ++d) {
                const double w = cfg.pair_weights[std::size_t{s} * cfg.destinations + d];
                if (!(w >= 0.0) || !std::isfinite(w)) {
                    throw ConfigError("pair_weights", "weights must be finite and non-negative");
                }
                if (!(cfg.excludes_self() && s == d)) {
                    sum += w;
                }
            }
        }
        if (!(sum > 0.0)) {
            throw ConfigError("pair_weights", "no admissible pair has positive weight");
        }
    }
}

std::vector<double> pair_rates_gbps(const TrafficConfig& cfg) {
    validate(cfg);
    const std::size_t n = std::size_t{cfg.sources} * cfg.destinations;
    std::vector<double> w(n, 0.0);
    for (std::uint32_t s = 0; s < cfg.sources; ++s) {
        for (std::uint32_t d = 0; d < cfg.destinations; ++d) {
            if (cfg.excludes_self() && s == d) {
                continue;
            }
            const std::size_t i = std::size_t{s} * cfg.destinations + d;
            w[i] = cfg.pair_weights.empty() ? 1.0 : cfg.pair_weights[i];
        }
    }
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    for (double& x : w) {
        x = cfg.offered_gbps * x / total;
    }
    return w;
}

double nominal_capacity(SliceKind slice, std::optional<std::uint32_t> M, std::optional<std::uint32_t> W,
                        std::optional<std::uint32_t> B) {
    switch (slice) {
        case SliceKind::OtsIntra:
            return 25.0 * require(W, "W", 1);
        case SliceKind::OcsIntra: {
            const double m = require(M, "M", 2);
            return m * (m - 1.0) * 100.0;
        }
        case SliceKind::OcsMcn: {
            const double b = require(B, "B", 2);
            return b * (b - 1.0) * 100.0;
        }
        case SliceKind::OtsAgg:
            require(M, "M", 1);
            return 100.0;
    }
    throw ConfigError("slice", "unknown slice kind");
}

double wire_bits_per_packet(std::uint64_t packet_bits) {
    return static_cast<double>(blocks_for_bits(packet_bits)) * static_cast<double>(multiframe_wire_bits()) /
           static_cast<double>(FramingConstants::blocks_per_multiframe);
}

PacketStream::PacketStream(std::uint64_t seed, StreamId id, double pair_gbps, std::uint64_t packet_bits)
    : rng_(seed, id) {
    if (pair_gbps > 0.0) {
        // bits / Gbps = ns
        mean_gap_ps_ = wire_bits_per_packet(packet_bits) / pair_gbps * 1000.0;
    }
}

SimTime PacketStream::next() {
    t_ += sample_exponential_ps(rng_, mean_gap_ps_);
    return t_;
}

FrameStream::FrameStream(std::uint64_t seed, StreamId id, double pair_gbps, std::uint64_t packet_bits,
                         SimTime horizon)
    : packets_src_(seed, id, pair_gbps, packet_bits),
      blocks_per_packet_(blocks_for_bits(packet_bits)),
      horizon_(horizon),
      exhausted_(!packets_src_.active()) {}

std::optional<SimTime> FrameStream::next() {
    while (ready_ == 0) {
        if (exhausted_) {
            return std::nullopt;
        }
        const SimTime t = packets_src_.next();
        if (t > horizon_) {
            exhausted_ = true;
            return std::nullopt;
        }
        ++packets_;
        ready_ = assembler_.add_packet_blocks(blocks_per_packet_);
        ready_time_ = t;
    }
    --ready_;
    return ready_time_;
}

ArrivalSource::ArrivalSource(const TrafficConfig& cfg, std::uint64_t seed, SimTime horizon) {
    const auto rates = pair_rates_gbps(cfg);
    const std::uint32_t tag = stable_tag(cfg.instance);
    for (std::uint32_t s = 0; s < cfg.sources; ++s) {
        for (std::uint32_t d = 0; d < cfg.destinations; ++d) {
            const double r = rates[std::size_t{s} * cfg.destinations + d];
            if (r <= 0.0) {
                continue;
            }
            pairs_.push_back(Pair{s, d, FrameStream(seed, StreamId{tag, s, d}, r, cfg.packet_bits, horizon)});
        }
    }
    for (std::uint32_t i = 0; i < pairs_.size(); ++i) {
        if (auto t = pairs_[i].stream.next()) {
            heap_.push(Head{*t, i});
        }
    }
}

std::optional<FrameArrival> ArrivalSource::next() {
    if (heap_.empty()) {
        return std::nullopt;
    }
    const Head h = heap_.top();
    heap_.pop();
    Pair& p = pairs_[h.pair];
    if (auto t = p.stream.next()) {
        heap_.push(Head{*t, h.pair});
    }
    ++emitted_;
    return FrameArrival{h.at, p.source, p.destination};
}

std::optional<SimTime> ArrivalSource::peek_time() const {
    if (heap_.empty()) {
        return std::nullopt;
    }
    return heap_.top().at;
}

std::uint64_t ArrivalSource::packets() const noexcept {
    std::uint64_t n = 0;
    for (const auto& p : pairs_) {
        n += p.stream.packets();
    }
    return n;
}

std::uint64_t ArrivalSource::pending_blocks() const noexcept {
    std::uint64_t n = 0;
    for (const auto& p : pairs_) {
        n += p.stream.pending_blocks();
    }
    return n;
}

std::vector<PacketArrival> generate_arrivals(const TrafficConfig& cfg, std::uint64_t seed, SimTime horizon) {
    const auto rates = pair_rates_gbps(cfg);
    const std::uint32_t tag = stable_tag(cfg.instance);
    std::vector<PacketArrival> out;
    for (std::uint32_t s = 0; s < cfg.sources; ++s) {
        for (std::uint32_t d = 0; d < cfg.destinations; ++d) {
            const double r = rates[std::size_t{s} * cfg.destinations + d];
            if (r <= 0.0) {
                continue;
            }
            PacketStream ps(seed, StreamId{tag, s, d}, r, cfg.packet_bits);
            for (SimTime t = ps.next(); t <= horizon; t = ps.next()) {
                out.push_back(PacketArrival{t, s, d, cfg.packet_bits});
            }
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const PacketArrival& a, const PacketArrival& b) {
        return std::tie(a.time, a.source, a.destination) < std::tie(b.time, b.source, b.destination);
    });
    return out;
}

std::vector<FrameArrival> generate_frame_arrivals(const TrafficConfig& cfg, std::uint64_t seed, SimTime horizon) {
    ArrivalSource src(cfg, seed, horizon);
    std::vector<FrameArrival> out;
    while (auto a = src.next()) {
        out.push_back(*a);
    }
    return out;
}

}  // namespace moonsim
