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

#include "moonsim/metrics.hpp"

#include "moonsim/errors.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace moonsim {

void RawCounters::on_delivery(const MultiFrame& mf, SimTime start, SimTime at) noexcept {
    ++ledger.delivered_frames;
    if (!in_window(at)) {
        return;
    }
    ++window_delivered;
    window_delivered_blocks += mf.blocks_used;
    const SimTime q = start - mf.generation_time;
    const SimTime total = at - mf.generation_time;
    queuing_ps_sum += q.ps();
    total_ps_sum += total.ps();
    min_total = std::min(min_total, total);
    max_total = std::max(max_total, total);
    max_queuing = std::max(max_queuing, q);
}

MetricsReport finalize(const RawCounters& raw) {
    const Ledger& l = raw.ledger;
    if (!l.balanced()) {
        throw SimulationError("conservation ledger violated for " + raw.identity.scenario_id + ": generated " +
                              std::to_string(l.generated_frames) + " != delivered " +
                              std::to_string(l.delivered_frames) + " + dropped " + std::to_string(l.dropped_frames) +
                              " + buffered " + std::to_string(l.buffered_frames) + " + in flight " +
                              std::to_string(l.in_flight_frames));
    }
    const SimTime window = raw.horizon - raw.warmup;
    if (window <= SimTime::zero()) {
        throw SimulationError("measurement window is empty (horizon <= warmup)");
    }
    MetricsReport r;
    r.row = raw.identity;
    r.ledger = l;
    const double window_ps = static_cast<double>(window.ps());
    // bits per ps = Tbps; ×1000 for Gbps.
    const auto gbps = [&](std::uint64_t bits) { return static_cast<double>(bits) / window_ps * 1000.0; };
    r.row.throughput_gbps = gbps(Ledger::bits(raw.window_delivered));
    r.row.dropping_gbps = gbps(Ledger::bits(raw.window_dropped));
    r.goodput_gbps = gbps(raw.window_delivered_blocks * FramingConstants::block_bits);
    if (raw.window_delivered > 0) {
        const double n = static_cast<double>(raw.window_delivered);
        r.row.avg_queuing_us = static_cast<double>(raw.queuing_ps_sum) / n * 1e-6;
        r.row.avg_total_delay_us = static_cast<double>(raw.total_ps_sum) / n * 1e-6;
        r.avg_propagation_us = static_cast<double>(raw.total_ps_sum - raw.queuing_ps_sum) / n * 1e-6;
        r.min_total_delay_us = raw.min_total.us();
        r.max_total_delay_us = raw.max_total.us();
        r.max_queuing_us = raw.max_queuing.us();
    }
    r.row.delivered_frames = static_cast<double>(l.delivered_frames);
    r.row.dropped_frames = static_cast<double>(l.dropped_frames);
    r.row.residual_frames = static_cast<double>(l.residual_frames());
    r.buffer_capacity_bytes = raw.buffer_capacity_bytes;
    r.peak_buffer_bytes = raw.peak_buffer_bytes;
    return r;
}

namespace {

auto group_key(const ReportRow& r) {
    return std::make_tuple(r.scenario_id, r.slice, r.M, r.B, r.W, r.N, r.K, r.offered_gbps, r.normalized_load);
}

/// Numeric seeds ascending, then anything else, "mean" last.
std::tuple<int, std::uint64_t, std::string> seed_order(const std::string& s) {
    if (s == kMeanSeed) {
        return {2, 0, s};
    }
    std::uint64_t v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc{} && p == s.data() + s.size()) {
        return {0, v, s};
    }
    return {1, 0, s};
}

std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    out += '"';
    return out;
}

std::string opt(const std::optional<std::uint32_t>& v) { return v ? std::to_string(*v) : std::string{}; }

std::vector<std::string> split_record(const std::string& line, std::size_t line_no) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (quoted) {
        throw std::invalid_argument("csv line " + std::to_string(line_no) + ": unterminated quote");
    }
    fields.push_back(std::move(cur));
    return fields;
}

double parse_double(const std::string& s, std::size_t line_no) {
    double v = 0.0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) {
        throw std::invalid_argument("csv line " + std::to_string(line_no) + ": bad number '" + s + "'");
    }
    return v;
}

std::optional<std::uint32_t> parse_opt(const std::string& s, std::size_t line_no) {
    if (s.empty()) {
        return std::nullopt;
    }
    std::uint32_t v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) {
        throw std::invalid_argument("csv line " + std::to_string(line_no) + ": bad integer '" + s + "'");
    }
    return v;
}

}  // namespace

std::string format_number(double v) {
    char buf[64];
    const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) {
        throw std::runtime_error("number formatting failed");
    }
    return std::string(buf, p);
}

void SweepTable::append_means() {
    std::map<decltype(group_key(std::declval<const ReportRow&>())), std::vector<const ReportRow*>> groups;
    for (const auto& r : rows_) {
        if (r.seed != kMeanSeed) {
            groups[group_key(r)].push_back(&r);
        }
    }
    std::vector<ReportRow> means;
    for (const auto& [key, members] : groups) {
        ReportRow m = *members.front();
        m.seed = kMeanSeed;
        const double n = static_cast<double>(members.size());
        const auto avg = [&](double ReportRow::*f) {
            double s = 0.0;
            for (const auto* r : members) {
                s += r->*f;
            }
            return s / n;
        };
        for (auto f : {&ReportRow::throughput_gbps, &ReportRow::dropping_gbps, &ReportRow::avg_queuing_us,
                       &ReportRow::avg_total_delay_us, &ReportRow::delivered_frames, &ReportRow::dropped_frames,
                       &ReportRow::residual_frames}) {
            m.*f = avg(f);
        }
        means.push_back(std::move(m));
    }
    rows_.insert(rows_.end(), means.begin(), means.end());
}

void SweepTable::sort() {
    std::stable_sort(rows_.begin(), rows_.end(), [](const ReportRow& a, const ReportRow& b) {
        const auto ka = std::make_tuple(a.slice, a.M, a.B, a.W, a.N, a.K, a.normalized_load, a.offered_gbps,
                                        a.scenario_id, seed_order(a.seed));
        const auto kb = std::make_tuple(b.slice, b.M, b.B, b.W, b.N, b.K, b.normalized_load, b.offered_gbps,
                                        b.scenario_id, seed_order(b.seed));
        return ka < kb;
    });
}

std::string to_csv(const SweepTable& table) {
    std::string out = kCsvHeader;
    out += '\n';
    for (const auto& r : table.rows()) {
        const std::string fields[] = {quote(r.scenario_id),
                                      quote(r.slice),
                                      opt(r.M),
                                      opt(r.B),
                                      opt(r.W),
                                      opt(r.N),
                                      opt(r.K),
                                      quote(r.seed),
                                      format_number(r.offered_gbps),
                                      format_number(r.normalized_load),
                                      format_number(r.throughput_gbps),
                                      format_number(r.dropping_gbps),
                                      format_number(r.avg_queuing_us),
                                      format_number(r.avg_total_delay_us),
                                      format_number(r.delivered_frames),
                                      format_number(r.dropped_frames),
                                      format_number(r.residual_frames)};
        bool first = true;
        for (const auto& f : fields) {
            if (!first) {
                out += ',';
            }
            out += f;
            first = false;
        }
        out += '\n';
    }
    return out;
}

SweepTable parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) {
        throw std::invalid_argument("csv: missing or unexpected header");
    }
    SweepTable table;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        // A quoted field may span lines; an odd quote count means it is still open.
        const std::size_t record_line = line_no;
        std::string next;
        while (std::count(line.begin(), line.end(), '"') % 2 == 1 && std::getline(in, next)) {
            ++line_no;
            line += '\n';
            line += next;
        }
        const auto f = split_record(line, record_line);
        if (f.size() != 17) {
            throw std::invalid_argument("csv line " + std::to_string(record_line) + ": expected 17 fields, got " +
                                        std::to_string(f.size()));
        }
        ReportRow r;
        r.scenario_id = f[0];
        r.slice = f[1];
        r.M = parse_opt(f[2], record_line);
        r.B = parse_opt(f[3], record_line);
        r.W = parse_opt(f[4], record_line);
        r.N = parse_opt(f[5], record_line);
        r.K = parse_opt(f[6], record_line);
        r.seed = f[7];
        double* nums[] = {&r.offered_gbps,       &r.normalized_load,  &r.throughput_gbps, &r.dropping_gbps,
                          &r.avg_queuing_us,     &r.avg_total_delay_us, &r.delivered_frames, &r.dropped_frames,
                          &r.residual_frames};
        for (std::size_t i = 0; i < 9; ++i) {
            *nums[i] = parse_double(f[8 + i], record_line);
        }
        table.add(std::move(r));
    }
    return table;
}

void write_csv(const SweepTable& table, const std::filesystem::path& path) {
    if (table.empty()) {
        throw std::invalid_argument("write_csv: empty table for " + path.string());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    out << to_csv(table);
    out.close();
    if (!out) {
        throw std::runtime_error("write failed for " + path.string());
    }
}

SweepTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_csv(ss.str());
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(path.string() + ": " + e.what());
    }
}

}  // namespace moonsim
