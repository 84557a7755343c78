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

#include "moonsim/ocs_lightpath.hpp"

#include "moonsim/errors.hpp"
#include "moonsim/sim_core.hpp"

#include <algorithm>

namespace moonsim {

void OcsConfig::validate() const {
    const char* name = slice == SliceKind::OcsMcn ? "B" : "M";
    if (slice != SliceKind::OcsIntra && slice != SliceKind::OcsMcn) {
        throw ConfigError("slice", "OCS config must be ocs_intra or ocs_mcn");
    }
    if (node_count < 2) {
        throw ConfigError(name, "must be >= 2, got " + std::to_string(node_count));
    }
    if (!(rate_gbps > 0.0)) {
        throw ConfigError("rate_gbps", "must be positive");
    }
    if (buffer_bytes_per_destination < FramingConstants::multiframe_wire_bytes) {
        throw ConfigError("buffer_bytes_per_destination", "must hold at least one multi-frame");
    }
    if (ring_propagation < SimTime::zero()) {
        throw ConfigError("ring_propagation", "must be non-negative");
    }
}

OcsConfig OcsConfig::intra_man(std::uint32_t M) {
    OcsConfig c;
    c.slice = SliceKind::OcsIntra;
    c.node_count = M;
    c.ring_propagation = kIntraManRingPropagation;
    return c;
}

OcsConfig OcsConfig::mcn(std::uint32_t B) {
    OcsConfig c;
    c.slice = SliceKind::OcsMcn;
    c.node_count = B;
    c.ring_propagation = kMcnRingPropagation;
    return c;
}

SimTime ocs_propagation(const OcsConfig& cfg, NodeId src, NodeId dst) {
    const std::uint32_t n = cfg.node_count;
    const std::uint32_t cw = (dst + n - src) % n;
    const std::uint32_t arc = std::min(cw, n - cw);
    return SimTime::from_ps(cfg.ring_propagation.ps() * arc / n);
}

LightpathServer::LightpathServer(NodeId src, NodeId dst, const OcsConfig& cfg)
    : src_(src),
      dst_(dst),
      service_(SimTime::transmission(multiframe_wire_bits(), cfg.rate_gbps)),
      buffer_(cfg.buffer_bytes_per_destination) {}

std::optional<LightpathServer::Service> LightpathServer::enqueue(const MultiFrame& mf, SimTime now) {
    if (!buffer_.try_enqueue(mf, now)) {
        return std::nullopt;
    }
    const SimTime start = std::max(now, buffer_.last_end());
    const SimTime end = start + service_;
    buffer_.begin_transmission(end);
    return Service{start, end};
}

namespace {

class OcsRun {
public:
    OcsRun(const OcsConfig& cfg, const TrafficConfig& traffic, const RunParams& run) : cfg_(cfg), run_(run) {
        raw.identity.scenario_id = run.scenario_id;
        raw.identity.slice = std::string(to_string(cfg.slice));
        if (cfg.slice == SliceKind::OcsMcn) {
            raw.identity.B = cfg.node_count;
            raw.identity.K = static_cast<std::uint32_t>(cfg.wavelengths());
        } else {
            raw.identity.M = cfg.node_count;
            raw.identity.N = static_cast<std::uint32_t>(cfg.wavelengths());
        }
        raw.identity.seed = std::to_string(run.seed);
        raw.identity.offered_gbps = traffic.offered_gbps;
        const double nominal = cfg.rate_gbps * static_cast<double>(cfg.lightpaths());
        raw.identity.normalized_load = traffic.offered_gbps / nominal;
        raw.warmup = run.warmup;
        raw.horizon = run.horizon;
        raw.buffer_capacity_bytes = cfg.buffer_bytes_per_destination;
    }

    void arrive(LightpathServer& server, SimTime t) {
        MultiFrame mf;
        mf.source = server.source();
        mf.destination = server.destination();
        mf.slice = TrafficSlice::Ocs;
        mf.generation_time = t;
        raw.on_generated();
        const auto svc = server.enqueue(mf, t);
        if (!svc) {
            raw.on_drop(t);
            return;
        }
        const SimTime at = svc->end + ocs_propagation(cfg_, mf.source, mf.destination);
        if (svc->start > run_.horizon) {
            ++raw.ledger.buffered_frames;
        } else if (at > run_.horizon) {
            ++raw.ledger.in_flight_frames;
        } else {
            raw.on_delivery(mf, svc->start, at);
        }
    }

    RawCounters raw;

private:
    const OcsConfig& cfg_;
    const RunParams& run_;
};

}  // namespace

MetricsReport run_ocs_slice(const OcsConfig& cfg, const TrafficConfig& traffic, const RunParams& run,
                            OcsEngine engine) {
    cfg.validate();
    run.validate();
    if (traffic.slice != cfg.slice || traffic.sources != cfg.node_count) {
        throw ConfigError("traffic", "OCS traffic must match the slice kind and node count");
    }
    OcsRun state(cfg, traffic, run);
    const std::uint32_t n = cfg.node_count;
    std::vector<LightpathServer> servers;
    servers.reserve(std::size_t{n} * n);
    for (NodeId s = 0; s < n; ++s) {
        for (NodeId d = 0; d < n; ++d) {
            servers.emplace_back(s, d, cfg);
        }
    }

    if (engine == OcsEngine::PerPair) {
        const auto rates = pair_rates_gbps(traffic);
        const std::uint32_t tag = stable_tag(traffic.instance);
        for (NodeId s = 0; s < n; ++s) {
            for (NodeId d = 0; d < n; ++d) {
                const double r = rates[std::size_t{s} * n + d];
                if (r <= 0.0) {
                    continue;
                }
                FrameStream fs(run.seed, StreamId{tag, s, d}, r, traffic.packet_bits, run.horizon);
                LightpathServer& server = servers[std::size_t{s} * n + d];
                while (auto t = fs.next()) {
                    state.arrive(server, *t);
                }
                state.raw.ledger.generated_packets += fs.packets();
                state.raw.ledger.pending_blocks += fs.pending_blocks();
            }
        }
    } else {
        struct Arrival {
            NodeId source;
            NodeId destination;
        };
        ArrivalSource arrivals(traffic, run.seed, run.horizon);
        Simulator<Arrival> sim;
        if (auto a = arrivals.next()) {
            sim.schedule(a->time, Arrival{a->source, a->destination});
        }
        sim.run_until(run.horizon, [&](Simulator<Arrival>& s, Arrival& ev) {
            state.arrive(servers[std::size_t{ev.source} * n + ev.destination], s.now());
            if (auto a = arrivals.next()) {
                s.schedule(a->time, Arrival{a->source, a->destination});
            }
        });
        state.raw.ledger.generated_packets = arrivals.packets();
        state.raw.ledger.pending_blocks = arrivals.pending_blocks();
    }

    for (auto& sv : servers) {
        state.raw.peak_buffer_bytes = std::max(state.raw.peak_buffer_bytes, sv.buffer().peak_bytes());
    }
    return finalize(state.raw);
}

MetricsReport run_mcn_slice(const OcsConfig& cfg, const TrafficConfig& traffic, const RunParams& run,
                            OcsEngine engine) {
    if (cfg.slice != SliceKind::OcsMcn) {
        throw ConfigError("slice", "run_mcn_slice needs an ocs_mcn config");
    }
    return run_ocs_slice(cfg, traffic, run, engine);
}

}  // namespace moonsim
