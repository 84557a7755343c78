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

#include "moonsim/planner.hpp"

#include "moonsim/errors.hpp"
#include "moonsim/parallel.hpp"

#include <cmath>

namespace moonsim {

std::uint64_t required_lightpaths(std::uint32_t M) {
    if (M < 2) {
        throw ConfigError("M", "must be >= 2, got " + std::to_string(M));
    }
    return std::uint64_t{M} * (M - 1);
}

std::uint64_t required_ocs_wavelengths(std::uint32_t M) { return required_lightpaths(M) / 2; }

void QosTarget::validate() const {
    if (!max_avg_queuing_us && !max_avg_total_delay_us && !max_drop_gbps && !max_drop_fraction) {
        throw ConfigError("target", "at least one QoS limit is required");
    }
    if (load_mode == LoadMode::Normalized && !(at_load > 0.0 && at_load <= 1.0)) {
        throw ConfigError("at_load", "normalized load must lie in (0, 1]");
    }
    if (load_mode == LoadMode::FixedGbps && !(at_load > 0.0 && std::isfinite(at_load))) {
        throw ConfigError("at_load", "offered load must be a positive rate");
    }
}

bool QosTarget::met_by(const ReportRow& m) const {
    // Limits are inclusive. A delay limit <= 0 cannot be met: every frame
    // spends time on the ring.
    const auto delay_ok = [](std::optional<double> limit, double v) {
        return !limit || (*limit > 0.0 && v <= *limit);
    };
    if (!delay_ok(max_avg_queuing_us, m.avg_queuing_us) || !delay_ok(max_avg_total_delay_us, m.avg_total_delay_us)) {
        return false;
    }
    if (max_drop_gbps && !(m.dropping_gbps <= *max_drop_gbps)) {
        return false;
    }
    if (max_drop_fraction && !(m.offered_gbps > 0.0 && m.dropping_gbps / m.offered_gbps <= *max_drop_fraction)) {
        return false;
    }
    return true;
}

PlanResult min_ots_wavelengths(const PlanRequest& req, const OtsEvaluator& evaluate) {
    req.target.validate();
    if (req.W_min < 1 || req.W_max < req.W_min) {
        throw ConfigError("range", "need 1 <= W_min <= W_max");
    }
    if (req.seeds.empty()) {
        throw ConfigError("seeds", "at least one seed is required");
    }
    if (req.M < 2) {
        throw ConfigError("M", "must be >= 2, got " + std::to_string(req.M));
    }

    const OtsEvaluator eval = evaluate ? evaluate : OtsEvaluator([&req](std::uint32_t W, double offered, std::uint64_t seed) {
        OtsRingConfig cfg = req.base;
        cfg.M = req.M;
        cfg.W = W;
        TrafficConfig t;
        t.slice = SliceKind::OtsIntra;
        t.instance = "ots_intra";
        t.offered_gbps = offered;
        t.packet_bits = req.packet_bits;
        t.sources = req.M;
        t.destinations = req.M;
        RunParams run = req.run;
        run.seed = seed;
        run.scenario_id = "plan_W" + std::to_string(W);
        return run_ots_slice(cfg, t, run).row;
    });

    const std::uint32_t nW = req.W_max - req.W_min + 1;
    const std::size_t nS = req.seeds.size();
    std::vector<ReportRow> rows(std::size_t{nW} * nS);
    const auto offered_for = [&](std::uint32_t W) {
        return req.target.load_mode == QosTarget::LoadMode::Normalized ? req.target.at_load * 25.0 * W
                                                                     : req.target.at_load;
    };
    parallel_for(rows.size(), req.threads, [&](std::size_t i) {
        const std::uint32_t W = req.W_min + static_cast<std::uint32_t>(i / nS);
        rows[i] = eval(W, offered_for(W), req.seeds[i % nS]);
    });

    PlanResult result;
    for (std::uint32_t k = 0; k < nW; ++k) {
        SweepTable t;
        for (std::size_t s = 0; s < nS; ++s) {
            t.add(rows[std::size_t{k} * nS + s]);
        }
        t.append_means();
        EvidenceRow e;
        e.W = req.W_min + k;
        e.mean = t.rows().back();
        e.meets = req.target.met_by(e.mean);
        if (e.meets && !result.chosen_W) {
            result.chosen_W = e.W;
        }
        result.evidence.push_back(std::move(e));
    }
    result.summary = result.chosen_W ? "W=" + std::to_string(*result.chosen_W)
                                     : "no W in range [" + std::to_string(req.W_min) + ", " +
                                           std::to_string(req.W_max) + "]";
    return result;
}

std::string evidence_csv(const PlanResult& result) {
    std::string out = "W,offered_gbps,throughput_gbps,dropping_gbps,avg_queuing_us,avg_total_delay_us,meets\n";
    for (const auto& e : result.evidence) {
        out += std::to_string(e.W) + ',' + format_number(e.mean.offered_gbps) + ',' +
               format_number(e.mean.throughput_gbps) + ',' + format_number(e.mean.dropping_gbps) + ',' +
               format_number(e.mean.avg_queuing_us) + ',' + format_number(e.mean.avg_total_delay_us) + ',' +
               (e.meets ? "true" : "false") + '\n';
    }
    return out;
}

}  // namespace moonsim
