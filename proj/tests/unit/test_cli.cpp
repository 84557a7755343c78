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

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace moonsim;
using namespace moonsim::cli;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

struct Cli {
    int code = 0;
    std::string out;
    std::string err;
};

Cli invoke(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    Cli r;
    r.code = run_cli(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("moonsim_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string field_of(const json& doc) {
    try {
        parse_scenario(doc);
    } catch (const ConfigError& e) {
        return e.field();
    }
    return "";
}

}  // namespace

TEST_CASE("default scenario layout") {
    const auto cfg = default_scenario();
    REQUIRE(cfg.slices.size() == 6);
    int ots = 0, ocs = 0, mcn = 0, agg = 0;
    for (const auto& s : cfg.slices) {
        switch (s.kind) {
            case SliceKind::OtsIntra: ++ots; CHECK(s.M == 12U); CHECK(s.W == 4U); break;
            case SliceKind::OcsIntra: ++ocs; CHECK(s.M == 12U); break;
            case SliceKind::OcsMcn: ++mcn; CHECK(s.B == 8U); break;
            case SliceKind::OtsAgg: ++agg; CHECK(s.M == 12U); break;
        }
    }
    CHECK(ots == 2);
    CHECK(ocs == 2);
    CHECK(mcn == 1);
    CHECK(agg == 1);
    CHECK(combined_nominal_gbps(cfg.constants, 4) == 2 * 100.0 + 2 * 13200.0 + 5600.0 + 100.0);
    CHECK(combined_nominal_gbps(cfg.constants, 10) == 2 * 250.0 + 2 * 13200.0 + 5600.0 + 100.0);
}

TEST_CASE("config round trip") {
    const auto cfg = default_scenario();
    CHECK(parse_scenario(to_json(cfg)) == cfg);
    auto custom = cfg;
    custom.seeds = {3, 9};
    custom.load_mode = LoadMode::Gbps;
    custom.loads = {10.0, 55.5};
    custom.constants.ots_control_interval_slots = 0;
    custom.slices.resize(2);
    CHECK(parse_scenario(to_json(custom)) == custom);
    CHECK(parse_scenario(manifest(custom)["config"]) == custom);
}

TEST_CASE("unknown keys and out-of-range fields name the field") {
    auto doc = to_json(default_scenario());
    doc["bogus"] = 1;
    CHECK(field_of(doc) == "bogus");
    doc = to_json(default_scenario());
    doc["constants"]["slot_duration_us"] = -1.0;
    CHECK(field_of(doc) == "constants.slot_duration_us");
    doc = to_json(default_scenario());
    doc["slices"][0]["M"] = 1;
    CHECK(field_of(doc) == "slices.0.M");
    doc = to_json(default_scenario());
    doc["slices"][4]["B"] = 1;
    CHECK(field_of(doc) == "slices.4.B");
    doc = to_json(default_scenario());
    doc["slices"][0]["W"] = 0;
    CHECK(field_of(doc) == "slices.0.W");
    doc = to_json(default_scenario());
    doc["slices"][0]["type"] = "ots_bogus";
    CHECK(field_of(doc) == "slices.0.type");
    doc = to_json(default_scenario());
    doc.erase("loads");
    CHECK(field_of(doc) == "loads");
}

TEST_CASE("dotted overrides") {
    auto doc = to_json(default_scenario());
    apply_override(doc, "slices.0.W=8");
    apply_override(doc, "constants.ots_buffer_bytes=32768");
    apply_override(doc, "output_dir=elsewhere");
    const auto cfg = parse_scenario(doc);
    CHECK(cfg.slices[0].W == 8U);
    CHECK(cfg.constants.ots_buffer_bytes == 32768);
    CHECK(cfg.output_dir == "elsewhere");
    CHECK_THROWS_AS(apply_override(doc, "no_equals_sign"), ConfigError);
    CHECK_THROWS_AS(apply_override(doc, "slices.99.W=1"), ConfigError);
}

TEST_CASE("combined report sums slices") {
    std::vector<MetricsReport> slices(3);
    slices[0].row.throughput_gbps = 10.0;
    slices[0].row.avg_queuing_us = 1.0;
    slices[1].row.throughput_gbps = 30.0;
    slices[1].row.avg_queuing_us = 3.0;
    slices[2].row.throughput_gbps = 0.0;
    slices[2].row.avg_queuing_us = 100.0;
    const auto c = combine(slices, 50.0, "total", 4);
    CHECK(c.total.throughput_gbps == 40.0);
    CHECK(c.utilization == doctest::Approx(0.8));
    CHECK(c.total.avg_queuing_us == doctest::Approx(2.5));
    CHECK(c.total.slice == "total");
    CHECK(c.total.W == 4U);
}

TEST_CASE("grid parsing") {
    CHECK(parse_load_grid("10:100:10").size() == 10);
    const auto norm = parse_load_grid("0.1:1.0:0.1");
    REQUIRE(norm.size() == 10);
    CHECK(norm.back() == 1.0);
    CHECK(norm[2] == 0.3);
    CHECK(parse_load_grid("60,80,100") == std::vector<double>{60, 80, 100});
    CHECK_THROWS_AS(parse_load_grid(""), ConfigError);
    CHECK_THROWS_AS(parse_load_grid("1:0:1"), ConfigError);
    CHECK_THROWS_AS(parse_load_grid("a,b"), ConfigError);
    CHECK(parse_seed_list("1..10").size() == 10);
    CHECK(parse_seed_list("4,2") == std::vector<std::uint64_t>{4, 2});
    CHECK(parse_grid_entry("M=4,6,8,12").second == std::vector<std::uint32_t>{4, 6, 8, 12});
    CHECK_THROWS_AS(parse_grid_entry("M="), ConfigError);
}

TEST_CASE("sweep cross product shares streams across the grid") {
    SweepRequest q;
    q.slice = SliceKind::OtsIntra;
    q.grid = {{"M", {4, 6, 8, 12}}, {"W", {4}}};
    q.loads = parse_load_grid("10:100:10");
    q.seeds = {1, 2};
    const auto set = build_sweep(q);
    CHECK(set.jobs.size() == 4 * 10 * 2);
    for (const auto& j : set.jobs) {
        CHECK(j.slice.id == "ots_intra");
    }
    q.loads.clear();
    CHECK_THROWS_AS(build_sweep(q), ConfigError);
    q.loads = {1.0};
    q.grid = {{"Q", {1}}};
    CHECK_THROWS_AS(build_sweep(q), ConfigError);
    q.grid = {{"M", {1}}, {"W", {4}}};
    CHECK_THROWS_AS(build_sweep(q), ConfigError);

    SweepRequest ocs;
    ocs.slice = SliceKind::OcsIntra;
    ocs.grid = {{"M", {4, 6, 8, 10, 12}}};
    ocs.loads = parse_load_grid("0.1:1:0.1");
    ocs.normalized = true;
    const auto o = build_sweep(ocs);
    CHECK(o.jobs.size() == 50);
    CHECK(o.jobs.back().offered_gbps == doctest::Approx(13200.0));
}

TEST_CASE("simulate: six slice reports plus one combined, byte-identical reruns") {
    const auto dir = scratch("simulate");
    const auto a = invoke({"simulate", "--seed", "1", "--out", (dir / "a").string()});
    const auto b = invoke({"simulate", "--seed", "1", "--out", (dir / "b").string(), "--set", "output_dir=ignored"});
    REQUIRE(a.code == 0);
    REQUIRE(b.code == 0);
    const auto table = read_csv(dir / "a" / "metrics.csv");
    const auto per_seed = std::count_if(table.rows().begin(), table.rows().end(),
                                        [](const ReportRow& r) { return r.seed == "1"; });
    CHECK(per_seed == 7);
    CHECK(std::count_if(table.rows().begin(), table.rows().end(),
                        [](const ReportRow& r) { return r.slice == "total" && r.seed == "1"; }) == 1);
    CHECK(slurp(dir / "a" / "metrics.csv") == slurp(dir / "b" / "metrics.csv"));
    CHECK(slurp(dir / "a" / "combined.json") == slurp(dir / "b" / "combined.json"));
    const auto m = json::parse(slurp(dir / "a" / "manifest.json"));
    CHECK(m["tool"] == "moonsim");
    CHECK(m["seeds"] == json::array({1}));
    auto expected = default_scenario();
    expected.output_dir = (dir / "a").string();
    CHECK(parse_scenario(m["config"]) == expected);
    fs::remove_all(dir);
}

TEST_CASE("simulate: a config file with M=1 is rejected with the field name") {
    const auto dir = scratch("bad_config");
    auto doc = to_json(default_scenario());
    doc["slices"][0]["M"] = 1;
    std::ofstream(dir / "bad.json") << doc.dump();
    const auto r = invoke({"simulate", "--config", (dir / "bad.json").string(), "--out", (dir / "o").string()});
    CHECK(r.code == kExitConfig);
    CHECK(r.err.find("slices.0.M") != std::string::npos);
    CHECK(invoke({"simulate", "--config", (dir / "missing.json").string()}).code == kExitConfig);
    fs::remove_all(dir);
}

TEST_CASE("exit codes") {
    CHECK(invoke({}).code == kExitConfig);
    CHECK(invoke({"--help"}).code == kExitOk);
    CHECK(invoke({"bogus"}).code == kExitConfig);
    CHECK(invoke({"sweep", "--slice", "ots_intra", "--loads", ""}).code == kExitConfig);
    CHECK(invoke({"sweep", "--slice", "nope", "--loads", "1"}).code == kExitConfig);
    const auto r = invoke({"reproduce", "--figure", "fig9"});
    CHECK(r.code == kExitConfig);
    CHECK(r.err.find("fig2, fig3, fig4, fig5, fig6") != std::string::npos);
}

TEST_CASE("dimension answers OCS counts in closed form") {
    const auto n = invoke({"dimension", "--slice", "ocs_intra", "--M", "12"});
    CHECK(n.code == 0);
    CHECK(n.out.find("N=66") != std::string::npos);
    const auto k = invoke({"dimension", "--slice", "ocs_mcn", "--B", "8"});
    CHECK(k.out.find("K=28") != std::string::npos);
    CHECK(invoke({"dimension", "--slice", "ots_intra", "--M", "12"}).code == kExitConfig);
}

TEST_CASE("dimension searches OTS wavelengths and writes evidence") {
    const auto dir = scratch("dimension");
    const auto r = invoke({"dimension", "--slice", "ots_intra", "--M", "4", "--drop-gbps", "0.5", "--load", "0.6",
                        "--W-min", "1", "--W-max", "3", "--seeds", "1", "--window-us", "1008", "--warmup-us", "504",
                        "--out", dir.string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("W=") != std::string::npos);
    CHECK(fs::exists(dir / "evidence.csv"));
    fs::remove_all(dir);
}

TEST_CASE("sweep writes a table with mean rows") {
    const auto dir = scratch("sweep");
    const auto r = invoke({"sweep", "--slice", "ots_intra", "--grid", "M=4", "--grid", "W=4,6", "--loads", "20,40",
                        "--seeds", "1..2", "--horizon-us", "1008", "--warmup-us", "504", "--out", dir.string()});
    REQUIRE(r.code == 0);
    const auto t = read_csv(dir / "sweep.csv");
    CHECK(t.size() == 2 * 2 * 2 + 4);
    fs::remove_all(dir);
}

TEST_CASE("reproduce is deterministic and writes the figure's charts") {
    const auto dir = scratch("reproduce");
    const std::vector<std::string> common{"--seeds", "1", "--window-us", "252", "--warmup-us", "3024"};
    auto args = std::vector<std::string>{"reproduce", "--figure", "fig2", "--out", (dir / "a").string()};
    args.insert(args.end(), common.begin(), common.end());
    REQUIRE(invoke(args).code == 0);
    args[4] = (dir / "b").string();
    REQUIRE(invoke(args).code == 0);
    for (const char* f : {"fig2.csv", "fig2a_throughput_drop.svg", "fig2b_delay.svg", "manifest.json"}) {
        CAPTURE(f);
        REQUIRE(fs::exists(dir / "a" / f));
        CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
    }
    args = {"reproduce", "--figure", "fig6", "--out", (dir / "c").string()};
    args.insert(args.end(), common.begin(), common.end());
    REQUIRE(invoke(args).code == 0);
    int svgs = 0;
    for (const auto& e : fs::directory_iterator(dir / "c")) {
        svgs += e.path().extension() == ".svg" ? 1 : 0;
    }
    CHECK(svgs == 3);
    const auto t = read_csv(dir / "c" / "fig6.csv");
    CHECK(std::count_if(t.rows().begin(), t.rows().end(),
                        [](const ReportRow& r) { return r.slice == "total" && r.seed == "1"; }) == 40);
    fs::remove_all(dir);
}
