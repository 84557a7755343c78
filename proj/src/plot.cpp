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

#include "moonsim/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <stdexcept>

namespace moonsim {
namespace {

constexpr double kWidth = 720;
constexpr double kHeight = 460;
constexpr double kLeft = 80;
constexpr double kRight = 80;
constexpr double kTop = 50;
constexpr double kBottom = 70;

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Range {
    double lo = 0.0;
    double hi = 1.0;
};

/// 0-based range rounded up to a 1/2/5 step with five ticks.
Range nice_range(const std::vector<Series>& series, bool x) {
    double hi = 0.0;
    double lo = 0.0;
    for (const auto& s : series) {
        for (const auto& [px, py] : s.points) {
            hi = std::max(hi, x ? px : py);
            lo = std::min(lo, x ? px : py);
        }
    }
    if (hi <= lo) {
        hi = lo + 1.0;
    }
    const double raw = (hi - lo) / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (m * mag >= raw) {
            step = m * mag;
            break;
        }
    }
    return {std::floor(lo / step) * step, std::ceil(hi / step) * step};
}

double metric_value(const ReportRow& r, Metric m) {
    switch (m) {
        case Metric::Throughput: return r.throughput_gbps;
        case Metric::Dropping: return r.dropping_gbps;
        case Metric::Queuing: return r.avg_queuing_us;
        case Metric::TotalDelay: return r.avg_total_delay_us;
    }
    return 0.0;
}

const char* param_name(SeriesParam p) { return p == SeriesParam::M ? "M" : "W"; }

}  // namespace

std::string render_svg(const ChartSpec& chart) {
    std::vector<Series> all = chart.left;
    all.insert(all.end(), chart.right.begin(), chart.right.end());
    const Range xr = nice_range(all, true);
    const Range yl = nice_range(chart.left, false);
    const Range yr = nice_range(chart.right, false);
    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    const auto sx = [&](double v) { return kLeft + (v - xr.lo) / (xr.hi - xr.lo) * pw; };
    const auto sy = [&](double v, const Range& r) { return kTop + ph - (v - r.lo) / (r.hi - r.lo) * ph; };

    std::string o;
    o += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    o += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + fmt(kWidth) + "\" height=\"" +
         fmt(kHeight) + "\" viewBox=\"0 0 " + fmt(kWidth) + " " + fmt(kHeight) + "\">\n";
    o += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o += "<text x=\"" + fmt(kWidth / 2) + "\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"16\">" + escape(chart.title) + "</text>\n";
    o += "<rect x=\"" + fmt(kLeft) + "\" y=\"" + fmt(kTop) + "\" width=\"" + fmt(pw) + "\" height=\"" + fmt(ph) +
         "\" fill=\"none\" stroke=\"black\"/>\n";

    for (int i = 0; i <= 5; ++i) {
        const double fx = xr.lo + (xr.hi - xr.lo) * i / 5.0;
        const double fl = yl.lo + (yl.hi - yl.lo) * i / 5.0;
        o += "<line x1=\"" + fmt(sx(fx)) + "\" y1=\"" + fmt(kTop + ph) + "\" x2=\"" + fmt(sx(fx)) + "\" y2=\"" +
             fmt(kTop + ph + 5) + "\" stroke=\"black\"/>\n";
        o += "<text x=\"" + fmt(sx(fx)) + "\" y=\"" + fmt(kTop + ph + 20) +
             "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" + tick_label(fx) + "</text>\n";
        o += "<line x1=\"" + fmt(kLeft) + "\" y1=\"" + fmt(sy(fl, yl)) + "\" x2=\"" + fmt(kLeft + pw) + "\" y2=\"" +
             fmt(sy(fl, yl)) + "\" stroke=\"#dddddd\"/>\n";
        o += "<text x=\"" + fmt(kLeft - 8) + "\" y=\"" + fmt(sy(fl, yl) + 4) +
             "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + tick_label(fl) + "</text>\n";
        if (!chart.right.empty()) {
            const double fr = yr.lo + (yr.hi - yr.lo) * i / 5.0;
            o += "<text x=\"" + fmt(kLeft + pw + 8) + "\" y=\"" + fmt(sy(fr, yr) + 4) +
                 "\" text-anchor=\"start\" font-family=\"sans-serif\" font-size=\"11\">" + tick_label(fr) +
                 "</text>\n";
        }
    }
    o += "<text x=\"" + fmt(kLeft + pw / 2) + "\" y=\"" + fmt(kHeight - 20) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" + escape(chart.x_label) +
         "</text>\n";
    o += "<text transform=\"translate(22," + fmt(kTop + ph / 2) +
         ") rotate(-90)\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" +
         escape(chart.left_label) + "</text>\n";
    if (!chart.right.empty()) {
        o += "<text transform=\"translate(" + fmt(kWidth - 22) + "," + fmt(kTop + ph / 2) +
             ") rotate(90)\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" +
             escape(chart.right_label) + "</text>\n";
    }

    std::size_t colour = 0;
    double legend_y = kTop + 14;
    const auto draw = [&](const std::vector<Series>& group, const Range& r, bool dashed) {
        for (const auto& s : group) {
            const char* c = kPalette[colour++ % std::size(kPalette)];
            std::string pts;
            for (const auto& [px, py] : s.points) {
                if (!pts.empty()) {
                    pts += ' ';
                }
                pts += fmt(sx(px)) + "," + fmt(sy(py, r));
            }
            o += std::string("<polyline fill=\"none\" stroke=\"") + c + "\" stroke-width=\"2\"" +
                 (dashed ? " stroke-dasharray=\"6,4\"" : "") + " points=\"" + pts + "\"/>\n";
            for (const auto& [px, py] : s.points) {
                o += std::string("<circle cx=\"") + fmt(sx(px)) + "\" cy=\"" + fmt(sy(py, r)) + "\" r=\"3\" fill=\"" +
                     c + "\"/>\n";
            }
            o += std::string("<line x1=\"") + fmt(kLeft + 10) + "\" y1=\"" + fmt(legend_y - 4) + "\" x2=\"" +
                 fmt(kLeft + 34) + "\" y2=\"" + fmt(legend_y - 4) + "\" stroke=\"" + c + "\" stroke-width=\"2\"" +
                 (dashed ? " stroke-dasharray=\"6,4\"" : "") + "/>\n";
            o += "<text x=\"" + fmt(kLeft + 40) + "\" y=\"" + fmt(legend_y) +
                 "\" font-family=\"sans-serif\" font-size=\"11\">" + escape(s.label) + "</text>\n";
            legend_y += 15;
        }
    };
    draw(chart.left, yl, false);
    draw(chart.right, yr, true);
    o += "</svg>\n";
    return o;
}

ChartSpec build_chart(const SweepTable& table, const FigurePanel& panel) {
    const bool by_scenario = !panel.scenario_series.empty();
    std::vector<std::string> keys;
    if (by_scenario) {
        keys = panel.scenario_series;
    } else {
        for (std::uint32_t p : panel.param_values) {
            keys.push_back(std::string(param_name(panel.param)) + "=" + std::to_string(p));
        }
    }
    const auto key_of = [&](const ReportRow& r) -> std::optional<std::string> {
        if (by_scenario) {
            return r.scenario_id;
        }
        const auto p = panel.param == SeriesParam::M ? r.M : r.W;
        if (!p) {
            return std::nullopt;
        }
        return std::string(param_name(panel.param)) + "=" + std::to_string(*p);
    };
    const auto x_of = [&](const ReportRow& r) {
        return panel.x == LoadAxis::OfferedGbps ? r.offered_gbps : r.normalized_load;
    };
    const auto find = [&](const std::string& key, double load) -> const ReportRow* {
        for (const auto& r : table.rows()) {
            if (r.seed != kMeanSeed || (!panel.slice.empty() && r.slice != panel.slice) ||
                (!panel.scenario.empty() && r.scenario_id != panel.scenario)) {
                continue;
            }
            const auto k = key_of(r);
            if (k && *k == key && std::abs(x_of(r) - load) <= 1e-9 * std::max(1.0, std::abs(load))) {
                return &r;
            }
        }
        return nullptr;
    };

    std::string missing;
    ChartSpec chart;
    chart.title = panel.title;
    chart.x_label = panel.x_label;
    chart.left_label = panel.left.label;
    if (panel.right) {
        chart.right_label = panel.right->label;
    }
    for (const auto& key : keys) {
        Series l{key, {}};
        Series rt{key + " (" + chart.right_label + ")", {}};
        for (double load : panel.loads) {
            const ReportRow* row = find(key, load);
            if (!row) {
                missing += (missing.empty() ? "" : ", ") + std::string("(") + key + ", load=" + format_number(load) +
                           ")";
                continue;
            }
            l.points.emplace_back(load, metric_value(*row, panel.left.metric) * panel.left.scale);
            if (panel.right) {
                rt.points.emplace_back(load, metric_value(*row, panel.right->metric) * panel.right->scale);
            }
        }
        chart.left.push_back(std::move(l));
        if (panel.right) {
            chart.right.push_back(std::move(rt));
        }
    }
    if (!missing.empty()) {
        throw std::invalid_argument(panel.file_name + ": missing series points " + missing);
    }
    return chart;
}

std::vector<std::filesystem::path> plot_sweep(const SweepTable& table, const FigureSpec& spec,
                                              const std::filesystem::path& dir) {
    std::vector<ChartSpec> charts;
    charts.reserve(spec.panels.size());
    for (const auto& panel : spec.panels) {
        charts.push_back(build_chart(table, panel));
    }
    std::vector<std::filesystem::path> written;
    if (charts.empty()) {
        return written;
    }
    std::filesystem::create_directories(dir);
    for (std::size_t i = 0; i < charts.size(); ++i) {
        const auto path = dir / spec.panels[i].file_name;
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot open " + path.string() + " for writing");
        }
        out << render_svg(charts[i]);
        if (!out) {
            throw std::runtime_error("write failed for " + path.string());
        }
        written.push_back(path);
    }
    return written;
}

}  // namespace moonsim
