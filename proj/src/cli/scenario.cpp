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

#include "moonsim/cli/scenario.hpp"

#include "moonsim/errors.hpp"
#include "moonsim/ocs_lightpath.hpp"
#include "moonsim/ots_aggregation.hpp"
#include "moonsim/ots_ring.hpp"
#include "moonsim/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <initializer_list>
#include <set>
#include <thread>

namespace moonsim::cli {
namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

void allow_only(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
    if (!obj.is_object()) {
        throw ConfigError(path.empty() ? "(root)" : path, "must be an object");
    }
    for (const auto& [k, v] : obj.items()) {
        bool ok = false;
        for (const char* allowed : keys) {
            ok = ok || k == allowed;
        }
        if (!ok) {
            throw ConfigError(join(path, k), "unknown key");
        }
    }
}

double get_number(const json& v, const std::string& path) {
    if (!v.is_number()) {
        throw ConfigError(path, "must be a number");
    }
    const double d = v.get<double>();
    if (!std::isfinite(d)) {
        throw ConfigError(path, "must be finite");
    }
    return d;
}

std::uint64_t get_uint(const json& v, const std::string& path) {
    if (v.is_number_unsigned()) {
        return v.get<std::uint64_t>();
    }
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
        return static_cast<std::uint64_t>(v.get<std::int64_t>());
    }
    throw ConfigError(path, "must be a non-negative integer");
}

std::uint32_t get_u32(const json& v, const std::string& path) {
    const std::uint64_t x = get_uint(v, path);
    if (x > 0xFFFFFFFFULL) {
        throw ConfigError(path, "out of range");
    }
    return static_cast<std::uint32_t>(x);
}

std::string get_string(const json& v, const std::string& path) {
    if (!v.is_string()) {
        throw ConfigError(path, "must be a string");
    }
    return v.get<std::string>();
}

void require_min(const std::optional<std::uint32_t>& v, const std::string& path, std::uint32_t min) {
    if (!v) {
        throw ConfigError(path, "required for this slice type");
    }
    if (*v < min) {
        throw ConfigError(path, "must be >= " + std::to_string(min) + ", got " + std::to_string(*v));
    }
}

void forbid(const std::optional<std::uint32_t>& v, const std::string& path) {
    if (v) {
        throw ConfigError(path, "not used by this slice type");
    }
}

SimTime us(double v) { return SimTime::from_us(v); }

}  // namespace

ScenarioConfig default_scenario() {
    ScenarioConfig c;
    c.seeds = {1};
    // Warmup covers the slowest slice's transit so the window sees every slice in steady state.
    c.warmup_us = 3024.0;
    c.horizon_us = 28224.0;
    c.load_mode = LoadMode::Normalized;
    c.loads = {0.8};
    c.slices = {
        SliceSpec{"ots_intra_1", SliceKind::OtsIntra, 12, 4, {}, {}},
        SliceSpec{"ots_intra_2", SliceKind::OtsIntra, 12, 4, {}, {}},
        SliceSpec{"ocs_intra_1", SliceKind::OcsIntra, 12, {}, {}, {}},
        SliceSpec{"ocs_intra_2", SliceKind::OcsIntra, 12, {}, {}, {}},
        SliceSpec{"ocs_mcn", SliceKind::OcsMcn, {}, {}, 8, {}},
        SliceSpec{"ots_agg", SliceKind::OtsAgg, 12, {}, {}, 12},
    };
    return c;
}

void validate(const ScenarioConfig& cfg) {
    if (cfg.seeds.empty()) {
        throw ConfigError("seeds", "at least one seed is required");
    }
    if (!(cfg.horizon_us > 0.0)) {
        throw ConfigError("horizon_us", "must be positive");
    }
    if (!(cfg.warmup_us >= 0.0 && cfg.warmup_us < cfg.horizon_us)) {
        throw ConfigError("warmup_us", "must lie in [0, horizon_us)");
    }
    if (cfg.packet_bits == 0) {
        throw ConfigError("packet_bits", "must be >= 1");
    }
    if (cfg.loads.empty()) {
        throw ConfigError("loads.values", "at least one load is required");
    }
    for (std::size_t i = 0; i < cfg.loads.size(); ++i) {
        if (!(cfg.loads[i] >= 0.0)) {
            throw ConfigError("loads.values." + std::to_string(i), "must be >= 0");
        }
    }
    if (cfg.slices.empty()) {
        throw ConfigError("slices", "at least one slice is required");
    }
    const Constants& k = cfg.constants;
    if (!(k.slot_duration_us > 0.0)) {
        throw ConfigError("constants.slot_duration_us", "must be positive");
    }
    for (auto [v, name] : {std::pair{k.ots_rate_gbps, "ots_rate_gbps"}, std::pair{k.ocs_rate_gbps, "ocs_rate_gbps"},
                           std::pair{k.agg_rate_gbps, "agg_rate_gbps"}}) {
        if (!(v > 0.0)) {
            throw ConfigError(std::string("constants.") + name, "must be positive");
        }
    }
    for (auto [v, name] : {std::pair{k.intra_ring_us, "intra_ring_us"}, std::pair{k.mcn_ring_us, "mcn_ring_us"},
                           std::pair{k.mcn_transit_us, "mcn_transit_us"}}) {
        if (!(v >= 0.0)) {
            throw ConfigError(std::string("constants.") + name, "must be >= 0");
        }
    }
    std::set<std::string> ids;
    for (std::size_t i = 0; i < cfg.slices.size(); ++i) {
        const SliceSpec& s = cfg.slices[i];
        const std::string p = "slices." + std::to_string(i);
        if (s.id.empty()) {
            throw ConfigError(p + ".id", "must be a non-empty string");
        }
        if (!ids.insert(s.id).second) {
            throw ConfigError(p + ".id", "duplicate slice id '" + s.id + "'");
        }
        switch (s.kind) {
            case SliceKind::OtsIntra:
                require_min(s.M, p + ".M", 2);
                require_min(s.W, p + ".W", 1);
                forbid(s.B, p + ".B");
                forbid(s.M_remote, p + ".M_remote");
                break;
            case SliceKind::OcsIntra:
                require_min(s.M, p + ".M", 2);
                forbid(s.W, p + ".W");
                forbid(s.B, p + ".B");
                forbid(s.M_remote, p + ".M_remote");
                break;
            case SliceKind::OcsMcn:
                require_min(s.B, p + ".B", 2);
                forbid(s.M, p + ".M");
                forbid(s.W, p + ".W");
                forbid(s.M_remote, p + ".M_remote");
                break;
            case SliceKind::OtsAgg:
                require_min(s.M, p + ".M", 2);
                require_min(s.M_remote, p + ".M_remote", 2);
                forbid(s.W, p + ".W");
                forbid(s.B, p + ".B");
                break;
        }
    }
}

ScenarioConfig parse_scenario(const json& doc) {
    allow_only(doc, "", {"seeds", "horizon_us", "warmup_us", "packet_bits", "loads", "output_dir", "constants",
                         "slices"});
    ScenarioConfig c;
    c.slices.clear();
    if (doc.contains("seeds")) {
        const json& s = doc["seeds"];
        if (!s.is_array()) {
            throw ConfigError("seeds", "must be an array of integers");
        }
        c.seeds.clear();
        for (std::size_t i = 0; i < s.size(); ++i) {
            c.seeds.push_back(get_uint(s[i], "seeds." + std::to_string(i)));
        }
    }
    if (doc.contains("horizon_us")) {
        c.horizon_us = get_number(doc["horizon_us"], "horizon_us");
    }
    if (doc.contains("warmup_us")) {
        c.warmup_us = get_number(doc["warmup_us"], "warmup_us");
    }
    if (doc.contains("packet_bits")) {
        c.packet_bits = get_uint(doc["packet_bits"], "packet_bits");
    }
    if (doc.contains("output_dir")) {
        c.output_dir = get_string(doc["output_dir"], "output_dir");
    }
    if (!doc.contains("loads")) {
        throw ConfigError("loads", "required");
    }
    {
        const json& l = doc["loads"];
        allow_only(l, "loads", {"mode", "values"});
        if (l.contains("mode")) {
            const std::string m = get_string(l["mode"], "loads.mode");
            if (m == "normalized") {
                c.load_mode = LoadMode::Normalized;
            } else if (m == "gbps") {
                c.load_mode = LoadMode::Gbps;
            } else {
                throw ConfigError("loads.mode", "must be \"normalized\" or \"gbps\", got \"" + m + "\"");
            }
        }
        if (!l.contains("values") || !l["values"].is_array()) {
            throw ConfigError("loads.values", "must be an array of numbers");
        }
        for (std::size_t i = 0; i < l["values"].size(); ++i) {
            c.loads.push_back(get_number(l["values"][i], "loads.values." + std::to_string(i)));
        }
    }
    if (doc.contains("constants")) {
        const json& k = doc["constants"];
        allow_only(k, "constants",
                   {"slot_duration_us", "ots_rate_gbps", "ots_slots_per_ring", "ots_buffer_bytes",
                    "ots_control_interval_slots", "ocs_rate_gbps", "ocs_buffer_bytes", "intra_ring_us", "mcn_ring_us",
                    "agg_rate_gbps", "agg_buffer_bytes", "mcn_transit_us", "agg_forward_share"});
        Constants& o = c.constants;
        const auto num = [&](const char* key, double& out) {
            if (k.contains(key)) {
                out = get_number(k[key], std::string("constants.") + key);
            }
        };
        const auto u64 = [&](const char* key, std::uint64_t& out) {
            if (k.contains(key)) {
                out = get_uint(k[key], std::string("constants.") + key);
            }
        };
        const auto u32 = [&](const char* key, std::uint32_t& out) {
            if (k.contains(key)) {
                out = get_u32(k[key], std::string("constants.") + key);
            }
        };
        num("slot_duration_us", o.slot_duration_us);
        num("ots_rate_gbps", o.ots_rate_gbps);
        u32("ots_slots_per_ring", o.ots_slots_per_ring);
        u64("ots_buffer_bytes", o.ots_buffer_bytes);
        u32("ots_control_interval_slots", o.ots_control_interval_slots);
        num("ocs_rate_gbps", o.ocs_rate_gbps);
        u64("ocs_buffer_bytes", o.ocs_buffer_bytes);
        num("intra_ring_us", o.intra_ring_us);
        num("mcn_ring_us", o.mcn_ring_us);
        num("agg_rate_gbps", o.agg_rate_gbps);
        u64("agg_buffer_bytes", o.agg_buffer_bytes);
        num("mcn_transit_us", o.mcn_transit_us);
        num("agg_forward_share", o.agg_forward_share);
    }
    if (!doc.contains("slices") || !doc["slices"].is_array()) {
        throw ConfigError("slices", "must be an array of slice objects");
    }
    for (std::size_t i = 0; i < doc["slices"].size(); ++i) {
        const json& s = doc["slices"][i];
        const std::string p = "slices." + std::to_string(i);
        allow_only(s, p, {"id", "type", "M", "W", "B", "M_remote"});
        SliceSpec spec;
        if (!s.contains("type")) {
            throw ConfigError(p + ".type", "required");
        }
        const std::string type = get_string(s["type"], p + ".type");
        const auto kind = parse_slice_kind(type);
        if (!kind) {
            throw ConfigError(p + ".type", "unknown slice type '" + type +
                                               "' (expected ots_intra, ocs_intra, ocs_mcn or ots_agg)");
        }
        spec.kind = *kind;
        spec.id = s.contains("id") ? get_string(s["id"], p + ".id") : type;
        for (auto [key, field] : {std::pair{"M", &SliceSpec::M}, std::pair{"W", &SliceSpec::W},
                                  std::pair{"B", &SliceSpec::B}, std::pair{"M_remote", &SliceSpec::M_remote}}) {
            if (s.contains(key)) {
                spec.*field = get_u32(s[key], p + "." + key);
            }
        }
        if (spec.kind == SliceKind::OtsAgg && !spec.M_remote && spec.M) {
            spec.M_remote = spec.M;
        }
        c.slices.push_back(std::move(spec));
    }
    validate(c);
    return c;
}

json to_json(const ScenarioConfig& cfg) {
    json doc;
    doc["seeds"] = cfg.seeds;
    doc["horizon_us"] = cfg.horizon_us;
    doc["warmup_us"] = cfg.warmup_us;
    doc["packet_bits"] = cfg.packet_bits;
    doc["loads"] = {{"mode", cfg.load_mode == LoadMode::Normalized ? "normalized" : "gbps"}, {"values", cfg.loads}};
    doc["output_dir"] = cfg.output_dir;
    const Constants& k = cfg.constants;
    doc["constants"] = {{"slot_duration_us", k.slot_duration_us},
                        {"ots_rate_gbps", k.ots_rate_gbps},
                        {"ots_slots_per_ring", k.ots_slots_per_ring},
                        {"ots_buffer_bytes", k.ots_buffer_bytes},
                        {"ots_control_interval_slots", k.ots_control_interval_slots},
                        {"ocs_rate_gbps", k.ocs_rate_gbps},
                        {"ocs_buffer_bytes", k.ocs_buffer_bytes},
                        {"intra_ring_us", k.intra_ring_us},
                        {"mcn_ring_us", k.mcn_ring_us},
                        {"agg_rate_gbps", k.agg_rate_gbps},
                        {"agg_buffer_bytes", k.agg_buffer_bytes},
                        {"mcn_transit_us", k.mcn_transit_us},
                        {"agg_forward_share", k.agg_forward_share}};
    json slices = json::array();
    for (const auto& s : cfg.slices) {
        json j;
        j["id"] = s.id;
        j["type"] = std::string(to_string(s.kind));
        for (auto [key, field] : {std::pair{"M", &SliceSpec::M}, std::pair{"W", &SliceSpec::W},
                                  std::pair{"B", &SliceSpec::B}, std::pair{"M_remote", &SliceSpec::M_remote}}) {
            if (s.*field) {
                j[key] = *(s.*field);
            }
        }
        slices.push_back(std::move(j));
    }
    doc["slices"] = std::move(slices);
    return doc;
}

void apply_override(json& doc, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ConfigError("--set", "expected path=value, got '" + assignment + "'");
    }
    const std::string path = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);
    json value = json::parse(raw, nullptr, false);
    if (value.is_discarded()) {
        value = raw;
    }
    json* node = &doc;
    std::size_t start = 0;
    while (true) {
        const auto dot = path.find('.', start);
        const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (key.empty()) {
            throw ConfigError(path, "empty path component");
        }
        const bool index = key.find_first_not_of("0123456789") == std::string::npos;
        json* child = nullptr;
        if (node->is_array()) {
            if (!index || std::stoull(key) >= node->size()) {
                throw ConfigError(path, "array index '" + key + "' out of range");
            }
            child = &(*node)[std::stoull(key)];
        } else {
            if (!node->is_object() && !node->is_null()) {
                throw ConfigError(path, "'" + key + "' addresses inside a scalar");
            }
            child = &(*node)[key];
        }
        if (dot == std::string::npos) {
            *child = value;
            return;
        }
        node = child;
        start = dot + 1;
    }
}

double slice_nominal_gbps(const SliceSpec& s, const Constants& c) {
    switch (s.kind) {
        case SliceKind::OtsIntra: return c.ots_rate_gbps * s.W.value_or(0);
        case SliceKind::OcsIntra: {
            const double m = s.M.value_or(0);
            return m * (m - 1.0) * c.ocs_rate_gbps;
        }
        case SliceKind::OcsMcn: {
            const double b = s.B.value_or(0);
            return b * (b - 1.0) * c.ocs_rate_gbps;
        }
        case SliceKind::OtsAgg: return c.agg_rate_gbps;
    }
    return 0.0;
}

OtsRingConfig ots_ring_config(const Constants& c, std::uint32_t M, std::uint32_t W) {
    OtsRingConfig cfg;
    cfg.M = M;
    cfg.W = W;
    cfg.rate_gbps = c.ots_rate_gbps;
    cfg.slots_per_ring = c.ots_slots_per_ring;
    cfg.slot_duration = us(c.slot_duration_us);
    cfg.buffer_bytes = c.ots_buffer_bytes;
    cfg.control_interval_slots = c.ots_control_interval_slots;
    return cfg;
}

MetricsReport run_slice(const SliceSpec& s, const Constants& c, std::uint64_t packet_bits, double offered_gbps,
                        const RunParams& run, const std::string& scenario_id) {
    RunParams rp = run;
    rp.scenario_id = scenario_id;
    TrafficConfig t;
    t.slice = s.kind;
    t.instance = s.id;
    t.offered_gbps = offered_gbps;
    t.packet_bits = packet_bits;
    const SimTime slot = us(c.slot_duration_us);
    switch (s.kind) {
        case SliceKind::OtsIntra: {
            const OtsRingConfig cfg = ots_ring_config(c, *s.M, *s.W);
            t.sources = t.destinations = cfg.M;
            return run_ots_slice(cfg, t, rp);
        }
        case SliceKind::OcsIntra:
        case SliceKind::OcsMcn: {
            OcsConfig cfg;
            cfg.slice = s.kind;
            cfg.node_count = s.kind == SliceKind::OcsMcn ? *s.B : *s.M;
            cfg.rate_gbps = c.ocs_rate_gbps;
            cfg.buffer_bytes_per_destination = c.ocs_buffer_bytes;
            cfg.ring_propagation = us(s.kind == SliceKind::OcsMcn ? c.mcn_ring_us : c.intra_ring_us);
            t.sources = t.destinations = cfg.node_count;
            return run_ocs_slice(cfg, t, rp);
        }
        case SliceKind::OtsAgg: {
            AggregationConfig cfg;
            cfg.M_local = *s.M;
            cfg.M_remote = s.M_remote.value_or(*s.M);
            cfg.rate_gbps = c.agg_rate_gbps;
            cfg.slot_duration = slot;
            cfg.slots_per_ring = c.ots_slots_per_ring;
            cfg.buffer_bytes = c.agg_buffer_bytes;
            cfg.mcn_transit = us(c.mcn_transit_us);
            cfg.forward_share = c.agg_forward_share;
            t.sources = cfg.M_local;
            t.destinations = cfg.M_remote;
            return run_aggregation_slice(cfg, t, rp);
        }
    }
    throw ConfigError("type", "unknown slice kind");
}

CombinedReport combine(std::vector<MetricsReport> slices, double nominal_gbps, const std::string& scenario_id,
                       std::optional<std::uint32_t> W) {
    CombinedReport out;
    out.nominal_gbps = nominal_gbps;
    ReportRow& t = out.total;
    t.scenario_id = scenario_id;
    t.slice = "total";
    t.W = W;
    double weighted_q = 0.0;
    double weighted_total = 0.0;
    double weight = 0.0;
    for (const auto& r : slices) {
        t.seed = r.row.seed;
        t.offered_gbps += r.row.offered_gbps;
        t.throughput_gbps += r.row.throughput_gbps;
        t.dropping_gbps += r.row.dropping_gbps;
        t.delivered_frames += r.row.delivered_frames;
        t.dropped_frames += r.row.dropped_frames;
        t.residual_frames += r.row.residual_frames;
        // Throughput is proportional to frames delivered in the window.
        weighted_q += r.row.avg_queuing_us * r.row.throughput_gbps;
        weighted_total += r.row.avg_total_delay_us * r.row.throughput_gbps;
        weight += r.row.throughput_gbps;
    }
    if (weight > 0.0) {
        t.avg_queuing_us = weighted_q / weight;
        t.avg_total_delay_us = weighted_total / weight;
    }
    t.normalized_load = nominal_gbps > 0.0 ? t.offered_gbps / nominal_gbps : 0.0;
    out.utilization = nominal_gbps > 0.0 ? t.throughput_gbps / nominal_gbps : 0.0;
    out.slices = std::move(slices);
    return out;
}

unsigned thread_count() {
    if (const char* env = std::getenv("MOON_SIM_THREADS")) {
        char* end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1 && v <= 1024) {
            return static_cast<unsigned>(v);
        }
    }
    return std::max(1U, std::thread::hardware_concurrency());
}

}  // namespace moonsim::cli
