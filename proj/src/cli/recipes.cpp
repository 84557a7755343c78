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

#include "moonsim/cli/recipes.hpp"

#include "moonsim/errors.hpp"
#include "moonsim/parallel.hpp"

#include <charconv>
#include <cmath>
#include <tuple>

namespace moonsim::cli {
namespace {

double to_double(const std::string& s, const char* field) {
    double v = 0.0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || p != s.data() + s.size()) {
        throw ConfigError(field, "bad number '" + s + "'");
    }
    return v;
}

std::uint64_t to_uint(const std::string& s, const char* field) {
    std::uint64_t v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || p != s.data() + s.size()) {
        throw ConfigError(field, "bad integer '" + s + "'");
    }
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto at = s.find(sep, start);
        out.push_back(s.substr(start, at == std::string::npos ? std::string::npos : at - start));
        if (at == std::string::npos) {
            return out;
        }
        start = at + 1;
    }
}

std::vector<double> steps(double lo, double hi, double step) {
    std::vector<double> v;
    const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    for (long i = 0; i <= n; ++i) {
        // Rounded to 12 significant digits so 0.1 steps print as 0.3, not 0.30000000000000004.
        const double x = lo + step * static_cast<double>(i);
        v.push_back(std::round(x * 1e9) / 1e9);
    }
    return v;
}

RunParams recipe_run(const RecipeOptions& o) {
    RunParams r;
    r.warmup = SimTime::from_us(o.warmup_us);
    r.horizon = SimTime::from_us(o.warmup_us + o.window_us);
    return r;
}

FigurePanel panel(std::string file, std::string title, std::string slice, SeriesParam param,
                  std::vector<std::uint32_t> values, LoadAxis x, std::vector<double> loads, AxisMetric left,
                  std::optional<AxisMetric> right) {
    FigurePanel p;
    p.file_name = std::move(file);
    p.title = std::move(title);
    p.slice = std::move(slice);
    p.param = param;
    p.param_values = std::move(values);
    p.x = x;
    p.x_label = x == LoadAxis::OfferedGbps ? "Offered load (Gbps)" : "Normalized load";
    p.loads = std::move(loads);
    p.left = std::move(left);
    p.right = std::move(right);
    return p;
}

const AxisMetric kThroughputGbps{Metric::Throughput, 1.0, "Average throughput (Gbps)"};
const AxisMetric kThroughputTbps{Metric::Throughput, 1e-3, "Average throughput (Tbps)"};
const AxisMetric kDropGbps{Metric::Dropping, 1.0, "Average dropping rate (Gbps)"};
const AxisMetric kQueuing{Metric::Queuing, 1.0, "Average queuing delay (us)"};
const AxisMetric kTotal{Metric::TotalDelay, 1.0, "Average total delay (us)"};

}  // namespace

std::vector<MetricsReport> run_jobs(const JobSet& set, unsigned threads) {
    std::vector<MetricsReport> out(set.jobs.size());
    parallel_for(set.jobs.size(), threads, [&](std::size_t i) {
        const Job& j = set.jobs[i];
        RunParams rp = set.run;
        rp.seed = j.seed;
        out[i] = run_slice(j.slice, set.constants, set.packet_bits, j.offered_gbps, rp, j.scenario_id);
    });
    return out;
}

std::vector<double> parse_load_grid(const std::string& text) {
    if (text.empty()) {
        throw ConfigError("loads", "empty load grid");
    }
    std::vector<double> v;
    if (text.find(':') != std::string::npos) {
        const auto parts = split(text, ':');
        if (parts.size() != 3) {
            throw ConfigError("loads", "expected A:B:STEP, got '" + text + "'");
        }
        const double lo = to_double(parts[0], "loads");
        const double hi = to_double(parts[1], "loads");
        const double step = to_double(parts[2], "loads");
        if (!(step > 0.0) || hi < lo) {
            throw ConfigError("loads", "need STEP > 0 and B >= A");
        }
        v = steps(lo, hi, step);
    } else {
        for (const auto& p : split(text, ',')) {
            v.push_back(to_double(p, "loads"));
        }
    }
    for (double x : v) {
        if (!(x >= 0.0)) {
            throw ConfigError("loads", "loads must be >= 0");
        }
    }
    return v;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
    if (text.empty()) {
        throw ConfigError("seeds", "empty seed list");
    }
    std::vector<std::uint64_t> v;
    if (const auto dots = text.find(".."); dots != std::string::npos) {
        const std::uint64_t lo = to_uint(text.substr(0, dots), "seeds");
        const std::uint64_t hi = to_uint(text.substr(dots + 2), "seeds");
        if (hi < lo || hi - lo > 100000) {
            throw ConfigError("seeds", "bad range '" + text + "'");
        }
        for (std::uint64_t s = lo; s <= hi; ++s) {
            v.push_back(s);
        }
        return v;
    }
    for (const auto& p : split(text, ',')) {
        v.push_back(to_uint(p, "seeds"));
    }
    return v;
}

std::pair<std::string, std::vector<std::uint32_t>> parse_grid_entry(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == text.size()) {
        throw ConfigError("grid", "expected K=v1,v2, got '" + text + "'");
    }
    std::pair<std::string, std::vector<std::uint32_t>> out{text.substr(0, eq), {}};
    for (const auto& p : split(text.substr(eq + 1), ',')) {
        const std::uint64_t x = to_uint(p, "grid");
        if (x > 0xFFFFFFFFULL) {
            throw ConfigError("grid", "value out of range: " + p);
        }
        out.second.push_back(static_cast<std::uint32_t>(x));
    }
    return out;
}

JobSet build_sweep(const SweepRequest& req) {
    if (req.loads.empty()) {
        throw ConfigError("loads", "empty load grid");
    }
    if (req.seeds.empty()) {
        throw ConfigError("seeds", "empty seed list");
    }
    for (const auto& [k, values] : req.grid) {
        if (k != "M" && k != "W" && k != "B" && k != "M_remote") {
            throw ConfigError("grid." + k, "unknown grid key (expected M, W, B or M_remote)");
        }
        if (values.empty()) {
            throw ConfigError("grid." + k, "empty value list");
        }
    }
    const auto values = [&](const char* key) -> std::vector<std::optional<std::uint32_t>> {
        const auto it = req.grid.find(key);
        if (it == req.grid.end()) {
            return {std::nullopt};
        }
        return {it->second.begin(), it->second.end()};
    };
    JobSet set;
    set.constants = req.constants;
    set.packet_bits = req.packet_bits;
    set.run.horizon = SimTime::from_us(req.horizon_us);
    set.run.warmup = SimTime::from_us(req.warmup_us);
    set.run.validate();
    const std::string id(to_string(req.slice));
    for (auto M : values("M")) {
        for (auto W : values("W")) {
            for (auto B : values("B")) {
                for (auto R : values("M_remote")) {
                    SliceSpec s{id, req.slice, M, W, B, R};
                    if (req.slice == SliceKind::OtsAgg && !s.M_remote) {
                        s.M_remote = s.M;
                    }
                    ScenarioConfig probe;
                    probe.loads = req.loads;
                    probe.constants = req.constants;
                    probe.slices = {s};
                    validate(probe);
                    const double nominal = slice_nominal_gbps(s, req.constants);
                    for (double load : req.loads) {
                        for (auto seed : req.seeds) {
                            set.jobs.push_back(Job{s, req.normalized ? load * nominal : load, seed, id});
                        }
                    }
                }
            }
        }
    }
    return set;
}

std::vector<SliceSpec> combined_slices(std::uint32_t W) {
    auto slices = default_scenario().slices;
    for (auto& s : slices) {
        if (s.kind == SliceKind::OtsIntra) {
            s.W = W;
        }
    }
    return slices;
}

double combined_nominal_gbps(const Constants& c, std::uint32_t W) {
    double total = 0.0;
    for (const auto& s : combined_slices(W)) {
        total += slice_nominal_gbps(s, c);
    }
    return total;
}

Recipe make_recipe(const std::string& id, const RecipeOptions& opts) {
    if (opts.seeds.empty()) {
        throw ConfigError("seeds", "empty seed list");
    }
    Recipe r;
    r.id = id;
    const auto offered = steps(10, 100, 10);
    const auto normalized = steps(0.1, 1.0, 0.1);
    const auto sweep = [&](SliceKind k, std::map<std::string, std::vector<std::uint32_t>> grid,
                           const std::vector<double>& loads, bool norm) {
        SweepRequest q;
        q.slice = k;
        q.grid = std::move(grid);
        q.loads = loads;
        q.normalized = norm;
        q.seeds = opts.seeds;
        q.warmup_us = opts.warmup_us;
        q.horizon_us = opts.warmup_us + opts.window_us;
        return build_sweep(q);
    };
    if (id == "fig2") {
        r.description = "OTS intra-MAN, M in {4,6,8,12}, W=4, offered 10-100 Gbps";
        r.jobs = sweep(SliceKind::OtsIntra, {{"M", {4, 6, 8, 12}}, {"W", {4}}}, offered, false);
        r.figure.panels = {
            panel("fig2a_throughput_drop.svg", "OTS intra-MAN: throughput and dropping rate (W=4)", "ots_intra",
                  SeriesParam::M, {4, 6, 8, 12}, LoadAxis::OfferedGbps, offered, kThroughputGbps, kDropGbps),
            panel("fig2b_delay.svg", "OTS intra-MAN: queuing and total delay (W=4)", "ots_intra", SeriesParam::M,
                  {4, 6, 8, 12}, LoadAxis::OfferedGbps, offered, kQueuing, kTotal)};
    } else if (id == "fig3") {
        r.description = "OTS intra-MAN, M=12, W in {4,6,8,10}, normalized 0.1-1.0";
        r.jobs = sweep(SliceKind::OtsIntra, {{"M", {12}}, {"W", {4, 6, 8, 10}}}, normalized, true);
        r.figure.panels = {
            panel("fig3a_throughput_drop.svg", "OTS intra-MAN: throughput and dropping rate (M=12)", "ots_intra",
                  SeriesParam::W, {4, 6, 8, 10}, LoadAxis::Normalized, normalized, kThroughputGbps, kDropGbps),
            panel("fig3b_delay.svg", "OTS intra-MAN: queuing and total delay (M=12)", "ots_intra", SeriesParam::W,
                  {4, 6, 8, 10}, LoadAxis::Normalized, normalized, kQueuing, kTotal)};
    } else if (id == "fig4") {
        r.description = "OCS intra-MAN, M in {4,6,8,10,12}, normalized 0.1-1.0";
        r.jobs = sweep(SliceKind::OcsIntra, {{"M", {4, 6, 8, 10, 12}}}, normalized, true);
        r.figure.panels = {
            panel("fig4a_throughput_drop.svg", "OCS intra-MAN: throughput and dropping rate", "ocs_intra",
                  SeriesParam::M, {4, 6, 8, 10, 12}, LoadAxis::Normalized, normalized, kThroughputTbps, kDropGbps),
            panel("fig4b_delay.svg", "OCS intra-MAN: queuing and total delay", "ocs_intra", SeriesParam::M,
                  {4, 6, 8, 10, 12}, LoadAxis::Normalized, normalized, kQueuing, kTotal)};
    } else if (id == "fig5") {
        r.description = "OTS aggregation, M in {4,6,8,12}, offered 10-100 Gbps";
        r.jobs = sweep(SliceKind::OtsAgg, {{"M", {4, 6, 8, 12}}}, offered, false);
        r.figure.panels = {
            panel("fig5a_throughput_drop.svg", "OTS aggregation: throughput and dropping rate", "ots_agg",
                  SeriesParam::M, {4, 6, 8, 12}, LoadAxis::OfferedGbps, offered, kThroughputGbps, kDropGbps),
            panel("fig5b_delay.svg", "OTS aggregation: queuing and total delay", "ots_agg", SeriesParam::M,
                  {4, 6, 8, 12}, LoadAxis::OfferedGbps, offered, kQueuing, kTotal)};
    } else if (id == "fig6") {
        r.description = "Combined network, W in {4,6,8,10}, normalized 0.1-1.0";
        r.combined_W = {4, 6, 8, 10};
        r.jobs.run = recipe_run(opts);
        r.jobs.run.validate();
        // W-independent slices run once per (load, seed) and are shared by every W.
        for (const auto& s : combined_slices(4)) {
            if (s.kind == SliceKind::OtsIntra) {
                continue;
            }
            for (double load : normalized) {
                for (auto seed : opts.seeds) {
                    r.jobs.jobs.push_back(Job{s, load * slice_nominal_gbps(s, r.jobs.constants), seed, s.id});
                }
            }
        }
        for (std::uint32_t W : r.combined_W) {
            for (const auto& s : combined_slices(W)) {
                if (s.kind != SliceKind::OtsIntra) {
                    continue;
                }
                for (double load : normalized) {
                    for (auto seed : opts.seeds) {
                        r.jobs.jobs.push_back(Job{s, load * slice_nominal_gbps(s, r.jobs.constants), seed, s.id});
                    }
                }
            }
        }
        FigurePanel a = panel("fig6a_total_throughput.svg", "Combined network: total throughput", "total",
                              SeriesParam::W, {4, 6, 8, 10}, LoadAxis::Normalized, normalized, kThroughputTbps, {});
        FigurePanel b = panel("fig6b_ocs_agg_queuing.svg", "Combined network: OCS and aggregation queuing delay", "",
                              SeriesParam::M, {}, LoadAxis::Normalized, normalized, kQueuing, {});
        b.scenario_series = {"ocs_intra_1", "ocs_intra_2", "ocs_mcn", "ots_agg"};
        FigurePanel c = panel("fig6c_ots_queuing.svg", "Combined network: OTS intra-MAN queuing delay", "ots_intra",
                              SeriesParam::W, {4, 6, 8, 10}, LoadAxis::Normalized, normalized, kQueuing, {});
        c.scenario = "ots_intra_1";
        r.figure.panels = {a, b, c};
    } else {
        std::string valid;
        for (const auto& f : kFigureIds) {
            valid += (valid.empty() ? "" : ", ") + f;
        }
        throw ConfigError("figure", "unknown figure '" + id + "'; valid ids: " + valid);
    }
    return r;
}

SweepTable run_recipe(const Recipe& recipe, unsigned threads) {
    const auto reports = run_jobs(recipe.jobs, threads);
    SweepTable table;
    for (const auto& r : reports) {
        table.add(r);
    }
    if (!recipe.combined_W.empty()) {
        const Constants& c = recipe.jobs.constants;
        // Jobs are (slice, W, load, seed) unique, so index them for the totals.
        using Key = std::tuple<std::string, std::optional<std::uint32_t>, long long, std::uint64_t>;
        std::map<Key, const MetricsReport*> idx;
        std::vector<std::pair<double, std::uint64_t>> points;
        for (std::size_t i = 0; i < reports.size(); ++i) {
            const Job& j = recipe.jobs.jobs[i];
            const double load = j.offered_gbps / slice_nominal_gbps(j.slice, c);
            idx[{j.slice.id, j.slice.W, std::llround(load * 1e9), j.seed}] = &reports[i];
            if (j.slice.kind == SliceKind::OcsMcn) {
                points.emplace_back(load, j.seed);
            }
        }
        for (std::uint32_t W : recipe.combined_W) {
            for (const auto& [load, seed] : points) {
                std::vector<MetricsReport> members;
                for (const auto& s : combined_slices(W)) {
                    const auto it = idx.find({s.id, s.W, std::llround(load * 1e9), seed});
                    if (it == idx.end()) {
                        throw SimulationError("combined scenario is missing slice " + s.id);
                    }
                    members.push_back(*it->second);
                }
                auto combined = combine(std::move(members), combined_nominal_gbps(c, W), "total", W);
                combined.total.normalized_load = std::round(load * 1e9) / 1e9;
                table.add(combined.total);
            }
        }
    }
    table.append_means();
    table.sort();
    return table;
}

}  // namespace moonsim::cli
