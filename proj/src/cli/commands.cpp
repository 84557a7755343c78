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

#include "moonsim/cli/commands.hpp"

#include "moonsim/errors.hpp"
#include "moonsim/planner.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <ostream>
#include <sstream>

namespace moonsim::cli {
namespace fs = std::filesystem;
namespace {

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw std::runtime_error("cannot write " + path.string());
    }
    f << text;
    if (!f.flush()) {
        throw std::runtime_error("write failed: " + path.string());
    }
}

json read_json_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw ConfigError("config", "cannot read " + path);
    }
    std::stringstream ss;
    ss << f.rdbuf();
    json doc = json::parse(ss.str(), nullptr, false);
    if (doc.is_discarded()) {
        throw ConfigError("config", path + " is not valid JSON");
    }
    return doc;
}

std::optional<std::uint32_t> common_ots_W(const std::vector<SliceSpec>& slices) {
    std::optional<std::uint32_t> W;
    for (const auto& s : slices) {
        if (s.kind != SliceKind::OtsIntra) {
            continue;
        }
        if (W && W != s.W) {
            return std::nullopt;
        }
        W = s.W;
    }
    return W;
}

SliceKind slice_kind(const std::string& text) {
    const auto k = parse_slice_kind(text);
    if (!k) {
        throw ConfigError("slice", "unknown slice '" + text + "' (expected ots_intra, ocs_intra, ocs_mcn or ots_agg)");
    }
    return *k;
}

std::string seed_text(const std::vector<std::uint64_t>& seeds) {
    std::string s;
    for (auto v : seeds) {
        s += (s.empty() ? "" : ",") + std::to_string(v);
    }
    return s;
}

// Subcommand state, filled by CLI11 before the callback runs.
struct SimulateArgs {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::vector<std::string> sets;
};

struct SweepArgs {
    std::string slice;
    std::vector<std::string> grid;
    std::string loads;
    bool normalized = false;
    std::string seeds = "1";
    double horizon_us = 2520.0;
    double warmup_us = 0.0;
    std::uint64_t packet_bits = kDefaultPacketBits;
    std::string out = "out";
};

struct DimensionArgs {
    std::string slice;
    std::optional<std::uint32_t> M;
    std::optional<std::uint32_t> B;
    std::optional<double> queuing_us;
    std::optional<double> total_delay_us;
    std::optional<double> drop_gbps;
    std::optional<double> drop_fraction;
    double load = 0.8;
    std::optional<double> load_gbps;
    std::uint32_t W_min = 1;
    std::uint32_t W_max = 16;
    std::string seeds = "1..3";
    double window_us = 25200.0;
    double warmup_us = 3024.0;
    std::string out;
};

struct ReproduceArgs {
    std::string figure;
    std::string out;
    std::optional<std::string> seeds;
    std::optional<double> window_us;
    std::optional<double> warmup_us;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
    json doc = a.config.empty() ? to_json(default_scenario()) : read_json_file(a.config);
    for (const auto& s : a.sets) {
        apply_override(doc, s);
    }
    ScenarioConfig cfg = parse_scenario(doc);
    if (a.seed) {
        cfg.seeds = {*a.seed};
    }
    if (!a.out.empty()) {
        cfg.output_dir = a.out;
    }
    validate(cfg);
    const auto result = simulate(cfg, thread_count());
    write_simulation(cfg, result, cfg.output_dir);
    for (const auto& c : result.combined) {
        out << "load=" << format_number(c.total.normalized_load) << " seed=" << c.total.seed
            << " total_throughput_gbps=" << format_number(c.total.throughput_gbps)
            << " utilization=" << format_number(c.utilization) << "\n";
    }
    out << "wrote " << (fs::path(cfg.output_dir) / "metrics.csv").string() << "\n";
    return kExitOk;
}

int cmd_sweep(const SweepArgs& a, std::ostream& out) {
    SweepRequest q;
    q.slice = slice_kind(a.slice);
    for (const auto& g : a.grid) {
        auto [k, v] = parse_grid_entry(g);
        q.grid[k] = std::move(v);
    }
    q.loads = parse_load_grid(a.loads);
    q.normalized = a.normalized;
    q.seeds = parse_seed_list(a.seeds);
    q.horizon_us = a.horizon_us;
    q.warmup_us = a.warmup_us;
    q.packet_bits = a.packet_bits;
    const JobSet set = build_sweep(q);
    const auto reports = run_jobs(set, thread_count());
    SweepTable table;
    for (const auto& r : reports) {
        table.add(r);
    }
    table.append_means();
    table.sort();
    const fs::path path = fs::path(a.out) / "sweep.csv";
    fs::create_directories(a.out);
    write_csv(table, path);
    out << "ran " << reports.size() << " jobs; wrote " << path.string() << "\n";
    return kExitOk;
}

int cmd_dimension(const DimensionArgs& a, std::ostream& out) {
    const SliceKind kind = slice_kind(a.slice);
    if (kind == SliceKind::OcsIntra) {
        if (!a.M) {
            throw ConfigError("M", "ocs_intra needs --M");
        }
        out << "N=" << required_ocs_wavelengths(*a.M) << " (L=" << required_lightpaths(*a.M) << " lightpaths)\n";
        return kExitOk;
    }
    if (kind == SliceKind::OcsMcn) {
        if (!a.B) {
            throw ConfigError("B", "ocs_mcn needs --B");
        }
        out << "K=" << required_ocs_wavelengths(*a.B) << " (L=" << required_lightpaths(*a.B) << " lightpaths)\n";
        return kExitOk;
    }
    if (kind != SliceKind::OtsIntra) {
        throw ConfigError("slice", "dimensioning supports ots_intra, ocs_intra and ocs_mcn");
    }
    if (!a.M) {
        throw ConfigError("M", "ots_intra needs --M");
    }
    PlanRequest req;
    req.M = *a.M;
    req.target.max_avg_queuing_us = a.queuing_us;
    req.target.max_avg_total_delay_us = a.total_delay_us;
    req.target.max_drop_gbps = a.drop_gbps;
    req.target.max_drop_fraction = a.drop_fraction;
    if (a.load_gbps) {
        req.target.load_mode = QosTarget::LoadMode::FixedGbps;
        req.target.at_load = *a.load_gbps;
    } else {
        req.target.at_load = a.load;
    }
    req.W_min = a.W_min;
    req.W_max = a.W_max;
    req.seeds = parse_seed_list(a.seeds);
    req.run.warmup = SimTime::from_us(a.warmup_us);
    req.run.horizon = SimTime::from_us(a.warmup_us + a.window_us);
    req.base = ots_ring_config(Constants{}, req.M, 1);
    req.threads = thread_count();
    const PlanResult plan = min_ots_wavelengths(req);
    for (const auto& e : plan.evidence) {
        out << "W=" << e.W << " queuing_us=" << format_number(e.mean.avg_queuing_us)
            << " drop_gbps=" << format_number(e.mean.dropping_gbps) << (e.meets ? " meets" : "") << "\n";
    }
    out << plan.summary << "\n";
    if (!a.out.empty()) {
        write_text(fs::path(a.out) / "evidence.csv", evidence_csv(plan));
    }
    return kExitOk;
}

int cmd_reproduce(const ReproduceArgs& a, std::ostream& out) {
    RecipeOptions opts;
    if (a.seeds) {
        opts.seeds = parse_seed_list(*a.seeds);
    }
    if (a.window_us) {
        opts.window_us = *a.window_us;
    }
    if (a.warmup_us) {
        opts.warmup_us = *a.warmup_us;
    }
    const Recipe recipe = make_recipe(a.figure, opts);
    const fs::path dir = a.out.empty() ? fs::path("out") / a.figure : fs::path(a.out);
    const SweepTable table = run_recipe(recipe, thread_count());
    fs::create_directories(dir);
    write_csv(table, dir / (a.figure + ".csv"));
    const auto svgs = plot_sweep(table, recipe.figure, dir);
    json m;
    m["tool"] = kToolName;
    m["version"] = kToolVersion;
    m["figure"] = recipe.id;
    m["description"] = recipe.description;
    m["seeds"] = opts.seeds;
    m["warmup_us"] = opts.warmup_us;
    m["window_us"] = opts.window_us;
    m["horizon_us"] = opts.warmup_us + opts.window_us;
    json files = json::array();
    files.push_back(a.figure + ".csv");
    for (const auto& p : svgs) {
        files.push_back(p.filename().string());
    }
    m["files"] = files;
    write_text(dir / "manifest.json", m.dump(2) + "\n");
    out << recipe.id << ": " << recipe.jobs.jobs.size() << " runs, seeds " << seed_text(opts.seeds) << "\n";
    for (const auto& p : svgs) {
        out << "wrote " << p.string() << "\n";
    }
    return kExitOk;
}

}  // namespace

SimulateResult simulate(const ScenarioConfig& cfg, unsigned threads) {
    validate(cfg);
    JobSet set;
    set.constants = cfg.constants;
    set.packet_bits = cfg.packet_bits;
    set.run.horizon = SimTime::from_us(cfg.horizon_us);
    set.run.warmup = SimTime::from_us(cfg.warmup_us);
    set.run.validate();
    for (double load : cfg.loads) {
        for (auto seed : cfg.seeds) {
            for (const auto& s : cfg.slices) {
                const double offered =
                    cfg.load_mode == LoadMode::Normalized ? load * slice_nominal_gbps(s, cfg.constants) : load;
                set.jobs.push_back(Job{s, offered, seed, s.id});
            }
        }
    }
    const auto reports = run_jobs(set, threads);
    SimulateResult result;
    double nominal = 0.0;
    for (const auto& s : cfg.slices) {
        nominal += slice_nominal_gbps(s, cfg.constants);
    }
    const auto W = common_ots_W(cfg.slices);
    const std::size_t n = cfg.slices.size();
    for (std::size_t i = 0; i < reports.size(); i += n) {
        std::vector<MetricsReport> group(reports.begin() + static_cast<std::ptrdiff_t>(i),
                                         reports.begin() + static_cast<std::ptrdiff_t>(i + n));
        for (const auto& r : group) {
            result.table.add(r);
        }
        result.combined.push_back(combine(std::move(group), nominal, "total", W));
        result.table.add(result.combined.back().total);
    }
    result.table.append_means();
    result.table.sort();
    return result;
}

json manifest(const ScenarioConfig& cfg) {
    json m;
    m["tool"] = kToolName;
    m["version"] = kToolVersion;
    m["seeds"] = cfg.seeds;
    m["horizon_us"] = cfg.horizon_us;
    m["config"] = to_json(cfg);
    return m;
}

void write_simulation(const ScenarioConfig& cfg, const SimulateResult& result, const fs::path& dir) {
    fs::create_directories(dir);
    write_csv(result.table, dir / "metrics.csv");
    json combined = json::array();
    for (const auto& c : result.combined) {
        json j;
        j["seed"] = c.total.seed;
        j["normalized_load"] = c.total.normalized_load;
        j["nominal_gbps"] = c.nominal_gbps;
        j["total_throughput_gbps"] = c.total.throughput_gbps;
        j["utilization"] = c.utilization;
        json slices = json::array();
        for (const auto& s : c.slices) {
            slices.push_back({{"scenario_id", s.row.scenario_id},
                              {"slice", s.row.slice},
                              {"throughput_gbps", s.row.throughput_gbps},
                              {"dropping_gbps", s.row.dropping_gbps},
                              {"avg_queuing_us", s.row.avg_queuing_us}});
        }
        j["slices"] = slices;
        combined.push_back(j);
    }
    write_text(dir / "combined.json", combined.dump(2) + "\n");
    write_text(dir / "manifest.json", manifest(cfg).dump(2) + "\n");
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Discrete-event simulator of a hybrid OCS/OTS optical metro network", kToolName};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    SimulateArgs sim;
    auto* s = app.add_subcommand("simulate", "Run every slice of a scenario");
    s->add_option("--config", sim.config, "Scenario JSON (default: built-in combined network)");
    s->add_option("--seed", sim.seed, "Replace the seed list by one seed");
    s->add_option("--out", sim.out, "Output directory (overrides output_dir)");
    s->add_option("--set", sim.sets, "Override a config leaf: dotted.path=value (repeatable)");

    SweepArgs sw;
    auto* w = app.add_subcommand("sweep", "Parameter and load sweep of one slice type");
    w->add_option("--slice", sw.slice, "ots_intra | ocs_intra | ocs_mcn | ots_agg")->required();
    w->add_option("--grid", sw.grid, "K=V1,V2 with K in M, W, B, M_remote (repeatable)");
    w->add_option("--loads", sw.loads, "A:B:STEP or v1,v2,...")->required();
    w->add_flag("--normalized", sw.normalized, "Loads are fractions of nominal capacity");
    w->add_option("--seeds", sw.seeds, "1..10 or 1,2,3")->capture_default_str();
    w->add_option("--horizon-us", sw.horizon_us, "Run horizon")->capture_default_str();
    w->add_option("--warmup-us", sw.warmup_us, "Warmup excluded from the measurement")->capture_default_str();
    w->add_option("--packet-bits", sw.packet_bits, "Client packet size")->capture_default_str();
    w->add_option("--out", sw.out, "Output directory")->capture_default_str();

    DimensionArgs dim;
    auto* d = app.add_subcommand("dimension", "Wavelength dimensioning");
    d->add_option("--slice", dim.slice, "ots_intra | ocs_intra | ocs_mcn")->required();
    d->add_option("--M", dim.M, "MAN node count");
    d->add_option("--B", dim.B, "MCN node count");
    d->add_option("--queuing-us", dim.queuing_us, "Average queuing delay limit");
    d->add_option("--total-delay-us", dim.total_delay_us, "Average total delay limit");
    d->add_option("--drop-gbps", dim.drop_gbps, "Dropping rate limit");
    d->add_option("--drop-fraction", dim.drop_fraction, "Dropped/offered limit");
    auto* load = d->add_option("--load", dim.load, "Normalized load per candidate W")->capture_default_str();
    d->add_option("--load-gbps", dim.load_gbps, "Fixed offered load instead")->excludes(load);
    d->add_option("--W-min", dim.W_min, "Smallest candidate")->capture_default_str();
    d->add_option("--W-max", dim.W_max, "Largest candidate")->capture_default_str();
    d->add_option("--seeds", dim.seeds, "Seeds per candidate")->capture_default_str();
    d->add_option("--window-us", dim.window_us, "Measurement window")->capture_default_str();
    d->add_option("--warmup-us", dim.warmup_us, "Warmup")->capture_default_str();
    d->add_option("--out", dim.out, "Directory for evidence.csv");

    ReproduceArgs rep;
    auto* r = app.add_subcommand("reproduce", "Run a figure recipe and plot it");
    r->add_option("--figure", rep.figure, "fig2 | fig3 | fig4 | fig5 | fig6")->required();
    r->add_option("--out", rep.out, "Output directory (default out/<figure>)");
    r->add_option("--seeds", rep.seeds, "Seed list (default 1..10)");
    r->add_option("--window-us", rep.window_us, "Measurement window (default 25200)");
    r->add_option("--warmup-us", rep.warmup_us, "Warmup (default 3024)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }
    try {
        if (*s) {
            return cmd_simulate(sim, out);
        }
        if (*w) {
            return cmd_sweep(sw, out);
        }
        if (*d) {
            return cmd_dimension(dim, out);
        }
        return cmd_reproduce(rep, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

}  // namespace moonsim::cli
