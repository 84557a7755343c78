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

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace moonsim;
using namespace moonsim::cli;
namespace fs = std::filesystem;

namespace {

const fs::path kDocs = MOONSIM_DOCS_DIR;

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    REQUIRE(f);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("the example config parses") {
    const auto cfg = parse_scenario(json::parse(slurp(kDocs / "example_config.json")));
    CHECK(cfg.slices.size() == 2);
    CHECK(cfg.seeds == std::vector<std::uint64_t>{1, 2});
}

TEST_CASE("every schema property is a config key the parser knows") {
    const auto schema = json::parse(slurp(kDocs / "config.schema.json"));
    const auto doc = to_json(default_scenario());
    for (const auto& [k, _] : schema["properties"].items()) {
        CAPTURE(k);
        CHECK(doc.contains(k));
    }
    for (const auto& [k, _] : schema["properties"]["constants"]["properties"].items()) {
        CAPTURE(k);
        CHECK(doc["constants"].contains(k));
    }
    for (const auto& [k, _] : doc["constants"].items()) {
        CAPTURE(k);
        CHECK(schema["properties"]["constants"]["properties"].contains(k));
    }
}

TEST_CASE("golden metrics from the example config") {
    const auto dir = fs::temp_directory_path() / "moonsim_docs_golden";
    fs::remove_all(dir);
    std::ostringstream out;
    std::ostringstream err;
    REQUIRE(run_cli({"simulate", "--config", (kDocs / "example_config.json").string(), "--out", dir.string()}, out,
                    err) == kExitOk);
    CHECK(slurp(dir / "metrics.csv") == slurp(kDocs / "golden" / "example_metrics.csv"));
    fs::remove_all(dir);
}

TEST_CASE("golden figure sample") {
    const auto dir = fs::temp_directory_path() / "moonsim_docs_fig2";
    fs::remove_all(dir);
    std::ostringstream out;
    std::ostringstream err;
    REQUIRE(run_cli({"reproduce", "--figure", "fig2", "--seeds", "1", "--window-us", "252", "--warmup-us", "252",
                     "--out", dir.string()},
                    out, err) == kExitOk);
    CHECK(slurp(dir / "fig2.csv") == slurp(kDocs / "golden" / "fig2_sample.csv"));
    CHECK(slurp(dir / "fig2a_throughput_drop.svg") == slurp(kDocs / "golden" / "fig2a_sample.svg"));
    fs::remove_all(dir);
}
