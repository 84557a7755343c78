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

/**
 * @file plot.hpp
 * @brief Deterministic SVG 1.1 line charts with an optional right axis.
 */

#pragma once

#include "moonsim/metrics.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace moonsim {

struct Series {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

struct ChartSpec {
    std::string title;
    std::string x_label;
    std::string left_label;
    std::string right_label;
    std::vector<Series> left;
    /// Drawn dashed against the right axis; empty for single-axis charts.
    std::vector<Series> right;
};

/// Renders a chart. Output depends only on the spec.
std::string render_svg(const ChartSpec& chart);

enum class Metric : std::uint8_t { Throughput, Dropping, Queuing, TotalDelay };

struct AxisMetric {
    Metric metric = Metric::Throughput;
    /// Value shown = row value × scale (e.g. 0.001 for Gbps → Tbps).
    double scale = 1.0;
    std::string label;
};

enum class SeriesParam : std::uint8_t { M, W };
enum class LoadAxis : std::uint8_t { OfferedGbps, Normalized };

struct FigurePanel {
    std::string file_name;
    std::string title;
    /// Row-level slice filter; empty keeps every slice.
    std::string slice;
    /// Row-level scenario id filter; empty keeps every scenario.
    std::string scenario;
    SeriesParam param = SeriesParam::M;
    std::vector<std::uint32_t> param_values;
    /// When set, one series per scenario id instead of per parameter value.
    std::vector<std::string> scenario_series;
    LoadAxis x = LoadAxis::OfferedGbps;
    std::string x_label;
    /// Loads every series must cover.
    std::vector<double> loads;
    AxisMetric left;
    std::optional<AxisMetric> right;
};

struct FigureSpec {
    std::vector<FigurePanel> panels;
};

/// Builds each panel from the table's mean rows and writes one SVG per
/// panel into `dir`. Throws std::invalid_argument listing every missing
/// (parameter, load) pair. Returns the written paths.
std::vector<std::filesystem::path> plot_sweep(const SweepTable& table, const FigureSpec& spec,
                                              const std::filesystem::path& dir);

/// Builds the chart of one panel without writing it.
ChartSpec build_chart(const SweepTable& table, const FigurePanel& panel);

}  // namespace moonsim
