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

// Acceptance suite: one PASS/FAIL line per criterion, preceded by its
// individual checks. Exits non-zero if any criterion fails.
//
// Every simulated value is a mean over seeds 1..10 with a 3024 us warmup and
// a 25200 us measurement window. Tolerances:
//   unsaturated points          ±10% relative
//   at or past the knee         ±15% relative (normalized load >= 1, or a
//                               reference drop of at least 1% of offered)
//   drop references <= 0.5 Gbps ±0.5 Gbps absolute

#include "moonsim/cli/recipes.hpp"
#include "moonsim/cli/scenario.hpp"
#include "moonsim/errors.hpp"
#include "moonsim/ots_aggregation.hpp"
#include "moonsim/ots_ring.hpp"
#include "moonsim/planner.hpp"
#include "moonsim/random.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

using namespace moonsim;
using namespace moonsim::cli;

namespace {

constexpr double kUnsaturated = 0.10;
constexpr double kKnee = 0.15;
constexpr double kDropAbs = 0.5;
constexpr double kWarmupUs = 3024.0;
constexpr double kWindowUs = 25200.0;
const std::vector<std::uint64_t> kSeeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

class Criterion {
public:
    Criterion(int number, std::string title) : number_(number), title_(std::move(title)) {}

    void check(bool ok, const std::string& what) {
        ok_ = ok_ && ok;
        std::printf("    %s  %s\n", ok ? "pass" : "FAIL", what.c_str());
    }

    void near(const std::string& what, double got, double ref, double rel) {
        const bool ok = std::abs(got - ref) <= rel * std::abs(ref);
        char buf[256];
        std::snprintf(buf, sizeof buf, "%s = %.4g (ref %.4g, ±%.0f%%)", what.c_str(), got, ref, rel * 100.0);
        check(ok, buf);
    }

    void near_abs(const std::string& what, double got, double ref, double abs_tol) {
        const bool ok = std::abs(got - ref) <= abs_tol;
        char buf[256];
        std::snprintf(buf, sizeof buf, "%s = %.4g (ref %.4g, ±%.3g abs)", what.c_str(), got, ref, abs_tol);
        check(ok, buf);
    }

    /// Drop references at or below 0.5 Gbps compare absolutely.
    void drop(const std::string& what, double got_gbps, double ref_gbps, double rel) {
        if (ref_gbps <= kDropAbs) {
            near_abs(what, got_gbps, ref_gbps, kDropAbs);
        } else {
            near(what, got_gbps, ref_gbps, rel);
        }
    }

    bool finish(double elapsed_s) const {
        std::printf("%s criterion %d: %s (%.1f s)\n", ok_ ? "PASS" : "FAIL", number_, title_.c_str(), elapsed_s);
        std::fflush(stdout);
        return ok_;
    }

private:
    int number_;
    std::string title_;
    bool ok_ = true;
};

/// Property tallies over every run of the suite.
struct Properties {
    std::uint64_t runs = 0;
    std::uint64_t unbalanced = 0;
    std::uint64_t over_capacity = 0;
    double max_ots_intra_delay_us = 0.0;
    std::vector<std::pair<Job, MetricsReport>> rerun_samples;
    std::map<SliceKind, bool> sampled;

    void observe(const Job& job, const MetricsReport& r) {
        ++runs;
        unbalanced += r.ledger.balanced() ? 0 : 1;
        over_capacity += r.peak_buffer_bytes > r.buffer_capacity_bytes ? 1 : 0;
        if (job.slice.kind == SliceKind::OtsIntra) {
            max_ots_intra_delay_us = std::max(max_ots_intra_delay_us, r.max_total_delay_us);
        }
        if (!sampled[job.slice.kind]) {
            sampled[job.slice.kind] = true;
            rerun_samples.emplace_back(job, r);
        }
    }
};

Properties g_props;

JobSet job_set() {
    JobSet set;
    set.run.warmup = SimTime::from_us(kWarmupUs);
    set.run.horizon = SimTime::from_us(kWarmupUs + kWindowUs);
    return set;
}

/// Collects points, runs them in one batch and hands back seed means.
class Batch {
public:
    explicit Batch(JobSet set = job_set()) : set_(std::move(set)) {}

    /// Returns the point index.
    std::size_t add(const SliceSpec& s, double offered_gbps) {
        for (auto seed : kSeeds) {
            set_.jobs.push_back(Job{s, offered_gbps, seed, s.id});
        }
        return points_++;
    }

    void run() {
        reports_ = run_jobs(set_, thread_count());
        for (std::size_t i = 0; i < reports_.size(); ++i) {
            g_props.observe(set_.jobs[i], reports_[i]);
        }
    }

    [[nodiscard]] ReportRow mean(std::size_t point) const {
        ReportRow m;
        const double n = static_cast<double>(kSeeds.size());
        for (std::size_t k = 0; k < kSeeds.size(); ++k) {
            const auto& r = reports_[point * kSeeds.size() + k].row;
            m.offered_gbps += r.offered_gbps / n;
            m.throughput_gbps += r.throughput_gbps / n;
            m.dropping_gbps += r.dropping_gbps / n;
            m.avg_queuing_us += r.avg_queuing_us / n;
            m.avg_total_delay_us += r.avg_total_delay_us / n;
        }
        return m;
    }

    [[nodiscard]] const MetricsReport& run_of(std::size_t point, std::size_t seed_index) const {
        return reports_[point * kSeeds.size() + seed_index];
    }

private:
    JobSet set_;
    std::size_t points_ = 0;
    std::vector<MetricsReport> reports_;
};

SliceSpec ots(std::uint32_t M, std::uint32_t W) { return SliceSpec{"ots_intra", SliceKind::OtsIntra, M, W, {}, {}}; }
SliceSpec ocs(std::uint32_t M) { return SliceSpec{"ocs_intra", SliceKind::OcsIntra, M, {}, {}, {}}; }
SliceSpec agg(std::uint32_t M) { return SliceSpec{"ots_agg", SliceKind::OtsAgg, M, {}, {}, M}; }

std::string at(const char* quantity, const std::string& where) { return std::string(quantity) + " " + where; }

bool criterion_1() {
    const auto t0 = Clock::now();
    Criterion c(1, "closed-form wavelength and lightpath counts");
    c.check(required_ocs_wavelengths(12) == 66, "N(12) = " + std::to_string(required_ocs_wavelengths(12)) + " (66)");
    c.check(required_lightpaths(12) == 132, "L(12) = " + std::to_string(required_lightpaths(12)) + " (132)");
    c.check(required_ocs_wavelengths(8) == 28, "K(8) = " + std::to_string(required_ocs_wavelengths(8)) + " (28)");
    const double nominal = slice_nominal_gbps(ocs(12), Constants{});
    c.check(nominal == 13200.0, "OCS nominal capacity M=12 = " + format_number(nominal) + " Gbps (13200)");
    return c.finish(seconds_since(t0));
}

bool criterion_2() {
    const auto t0 = Clock::now();
    Criterion c(2, "OTS intra-MAN M=4 W=4 at 60/80/100 Gbps");
    struct Ref {
        double load, thr, drop, q, tol;
    };
    const std::vector<Ref> refs{{60, 59.38, 0.0, 16.45, kUnsaturated},
                                {80, 78.87, 1.79, 18.76, kKnee},
                                {100, 85.82, 14.82, 19.79, kKnee}};
    Batch b;
    for (const auto& r : refs) {
        b.add(ots(4, 4), r.load);
    }
    b.run();
    for (std::size_t i = 0; i < refs.size(); ++i) {
        const auto m = b.mean(i);
        const std::string where = "@" + format_number(refs[i].load) + " Gbps";
        c.near(at("throughput_gbps", where), m.throughput_gbps, refs[i].thr, refs[i].tol);
        c.drop(at("dropping_gbps", where), m.dropping_gbps, refs[i].drop, refs[i].tol);
        c.near(at("avg_queuing_us", where), m.avg_queuing_us, refs[i].q, refs[i].tol);
    }
    const double elapsed = seconds_since(t0);
    char buf[96];
    std::snprintf(buf, sizeof buf, "runtime %.1f s (< 30 s)", elapsed);
    c.check(elapsed < 30.0, buf);
    return c.finish(elapsed);
}

bool criterion_3() {
    const auto t0 = Clock::now();
    Criterion c(3, "OTS wavelength scaling M=12");
    const std::vector<std::uint32_t> Ws{4, 6, 8, 10};
    const std::vector<double> thr_ref{79.23, 118.84, 157.68, 193.28};
    const std::vector<double> q_ref{15.79, 13.0, 12.12, 11.91};
    Batch b;
    std::vector<std::size_t> at08;
    std::vector<std::size_t> at100;
    for (auto W : Ws) {
        at08.push_back(b.add(ots(12, W), 0.8 * 25.0 * W));
        at100.push_back(b.add(ots(12, W), 100.0));
    }
    b.run();
    for (std::size_t i = 0; i < Ws.size(); ++i) {
        const std::string W = "W=" + std::to_string(Ws[i]);
        c.near(at("throughput_gbps", W + " @0.8"), b.mean(at08[i]).throughput_gbps, thr_ref[i], kUnsaturated);
        // 100 Gbps is the full nominal load of W=4.
        c.near(at("avg_queuing_us", W + " @100 Gbps"), b.mean(at100[i]).avg_queuing_us, q_ref[i],
               Ws[i] == 4 ? kKnee : kUnsaturated);
    }
    const double q4 = b.mean(at100.front()).avg_queuing_us;
    const double q10 = b.mean(at100.back()).avg_queuing_us;
    c.near_abs("queuing reduction W=4 -> W=10 (%)", 100.0 * (q4 - q10) / q4, 25.0, 5.0);
    return c.finish(seconds_since(t0));
}

bool criterion_4() {
    const auto t0 = Clock::now();
    Criterion c(4, "OCS intra-MAN");
    Batch b;
    const double nominal12 = slice_nominal_gbps(ocs(12), Constants{});
    const auto p08 = b.add(ocs(12), 0.8 * nominal12);
    const auto p10 = b.add(ocs(12), 1.0 * nominal12);
    const std::vector<std::uint32_t> Ms{4, 6, 8, 10, 12};
    const std::vector<double> series_ref{958, 2395, 4472, 7188, 10540};
    std::vector<std::size_t> series;
    for (auto M : Ms) {
        series.push_back(b.add(ocs(M), 0.8 * slice_nominal_gbps(ocs(M), Constants{})));
    }
    b.run();
    const auto m08 = b.mean(p08);
    const auto m10 = b.mean(p10);
    c.near("throughput_gbps M=12 @0.8", m08.throughput_gbps, 10540, kUnsaturated);
    c.near("throughput_gbps M=12 @1.0", m10.throughput_gbps, 12640, kKnee);
    c.drop("dropping_gbps M=12 @0.8", m08.dropping_gbps, 20, kUnsaturated);
    c.drop("dropping_gbps M=12 @1.0", m10.dropping_gbps, 540, kKnee);
    c.near("avg_queuing_us M=12 @0.8", m08.avg_queuing_us, 0.27, kUnsaturated);
    c.near("avg_queuing_us M=12 @1.0", m10.avg_queuing_us, 0.63, kKnee);
    c.near_abs("utilization at nominal (%)", 100.0 * m10.throughput_gbps / nominal12, 95.7, 1.5);
    for (std::size_t i = 0; i < Ms.size(); ++i) {
        c.near(at("throughput_gbps", "M=" + std::to_string(Ms[i]) + " @0.8"), b.mean(series[i]).throughput_gbps,
               series_ref[i], kUnsaturated);
    }
    return c.finish(seconds_since(t0));
}

bool criterion_5() {
    const auto t0 = Clock::now();
    Criterion c(5, "OTS aggregation");
    const std::vector<std::uint32_t> Ms{4, 6, 8, 12};
    Batch b;
    std::map<std::pair<std::uint32_t, int>, std::size_t> points;
    for (auto M : Ms) {
        for (int load = 10; load <= 100; load += 10) {
            points[{M, load}] = b.add(agg(M), load);
        }
    }
    b.run();
    c.drop("dropping_gbps M=4 @80 Gbps", b.mean(points.at({4, 80})).dropping_gbps, 1.08, kKnee);
    c.drop("dropping_gbps M=4 @100 Gbps", b.mean(points.at({4, 100})).dropping_gbps, 3.35, kKnee);
    c.near("avg_queuing_us M=4 @80 Gbps", b.mean(points.at({4, 80})).avg_queuing_us, 0.7, kKnee);
    c.near("avg_queuing_us M=4 @100 Gbps", b.mean(points.at({4, 100})).avg_queuing_us, 0.87, kKnee);
    const std::vector<double> drop_ref{1.08, 0.44, 0.3, 0.19};
    for (std::size_t i = 1; i < Ms.size(); ++i) {
        c.drop(at("dropping_gbps", "M=" + std::to_string(Ms[i]) + " @80 Gbps"),
               b.mean(points.at({Ms[i], 80})).dropping_gbps, drop_ref[i], kKnee);
    }
    double lo = 1e300;
    double hi = 0.0;
    for (const auto& [key, p] : points) {
        for (std::size_t k = 0; k < kSeeds.size(); ++k) {
            const double d = b.run_of(p, k).row.avg_total_delay_us;
            lo = std::min(lo, d);
            hi = std::max(hi, d);
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "avg total delay over %zu runs in [%.2f, %.2f] us (within [2520, 3000))",
                  points.size() * kSeeds.size(), lo, hi);
    c.check(lo >= 2520.0 && hi < 3000.0, buf);
    return c.finish(seconds_since(t0));
}

bool criterion_6() {
    const auto t0 = Clock::now();
    Criterion c(6, "combined network");
    RecipeOptions opts;
    opts.seeds = kSeeds;
    opts.warmup_us = kWarmupUs;
    opts.window_us = kWindowUs;
    const Recipe recipe = make_recipe("fig6", opts);
    const SweepTable table = run_recipe(recipe, thread_count());

    // (W, load) -> sum over seeds; load in thousandths.
    std::map<std::pair<std::uint32_t, long>, std::pair<double, int>> total;
    double worst_q = 0.0;
    std::string worst_where;
    for (const auto& r : table.rows()) {
        if (r.seed == kMeanSeed) {
            continue;
        }
        const long load = std::lround(r.normalized_load * 1000.0);
        if (r.slice == "total") {
            auto& t = total[{r.W.value_or(0), load}];
            t.first += r.throughput_gbps;
            t.second += 1;
        } else if (r.slice != "ots_intra") {
            if (r.avg_queuing_us > worst_q) {
                worst_q = r.avg_queuing_us;
                worst_where = r.scenario_id + " seed " + r.seed + " @" + format_number(load / 1000.0);
            }
        }
    }
    const auto mean_total = [&](std::uint32_t W, long load) {
        const auto it = total.find({W, load});
        return it == total.end() || it->second.second == 0 ? 0.0 : it->second.first / it->second.second;
    };
    const std::vector<double> ref_tbps{25.8, 25.88, 25.96, 26.03};
    for (std::size_t i = 0; i < recipe.combined_W.size(); ++i) {
        const auto W = recipe.combined_W[i];
        c.near(at("total throughput_tbps", "W=" + std::to_string(W) + " @0.8"), mean_total(W, 800) / 1000.0,
               ref_tbps[i], kUnsaturated);
    }
    char buf[192];
    std::snprintf(buf, sizeof buf, "max OCS/aggregation avg_queuing_us over every run = %.3f (%s) (< 0.7)", worst_q,
                  worst_where.c_str());
    c.check(worst_q < 0.7, buf);
    for (auto W : recipe.combined_W) {
        const double u = 100.0 * mean_total(W, 1000) / combined_nominal_gbps(Constants{}, W);
        std::snprintf(buf, sizeof buf, "utilization W=%u @1.0 = %.2f%% (within [94, 98])", W, u);
        c.check(u >= 94.0 && u <= 98.0, buf);
    }
    return c.finish(seconds_since(t0));
}

bool cell_occupancy_holds() {
    OtsRingConfig cfg;
    cfg.M = 12;
    cfg.W = 4;
    OtsRing ring(cfg);
    RawCounters raw;
    raw.horizon = SimTime::from_us(1e6);
    RandomStream rng(11, StreamId{});
    for (std::int64_t k = 1; k <= 5000; ++k) {
        const SimTime gen = kSlotDuration * k - SimTime::from_ps(1);
        for (int n = 0; n < 8; ++n) {
            MultiFrame mf;
            mf.source = static_cast<NodeId>(rng.next_u64() % cfg.M);
            mf.destination = static_cast<NodeId>((mf.source + 1 + rng.next_u64() % (cfg.M - 1)) % cfg.M);
            mf.generation_time = gen;
            ring.enqueue(mf, gen);
        }
        std::vector<std::size_t> before(cfg.M);
        for (NodeId i = 0; i < cfg.M; ++i) {
            before[i] = ring.buffer(i).waiting();
        }
        const auto occupied_before = ring.grid().occupied();
        ring.slot_tick(k, raw);
        std::size_t written = 0;
        for (NodeId i = 0; i < cfg.M; ++i) {
            const auto w = before[i] - ring.buffer(i).waiting();
            if (w > cfg.W) {
                return false;
            }
            written += w;
        }
        if (ring.grid().occupied() > std::uint64_t{cfg.W} * cfg.slots_per_ring ||
            ring.grid().occupied() > occupied_before + written) {
            return false;
        }
    }
    // Grooming never places more frames in a slot than it has cells.
    AggregationConfig acfg;
    const SimTime tx = acfg.cell_duration();
    std::vector<NodeBuffer> buffers(4, NodeBuffer(acfg.buffer_bytes));
    std::vector<NodeBuffer*> nodes;
    for (auto& nb : buffers) {
        nodes.push_back(&nb);
    }
    for (std::int64_t s = 0; s < 5000; ++s) {
        const SimTime now = kSlotDuration * (s + 1);
        AggregationSlot slot(acfg.slot_capacity_frames());
        for (auto& cell : slot.cells) {
            cell.occupied = rng.next_u64() % 3 == 0;
        }
        const auto free_before = slot.cells.size() - slot.used();
        for (auto& nb : buffers) {
            MultiFrame mf;
            mf.slice = TrafficSlice::Aggregation;
            nb.try_enqueue(mf, now);
        }
        std::uint32_t written = 0;
        for (auto w : groom_tick(slot, nodes, now, tx)) {
            written += w;
        }
        if (slot.used() > slot.cells.size() || written > free_before) {
            return false;
        }
    }
    return true;
}

/// Seed-wise violations of throughput non-decreasing and queuing
/// non-increasing in W, M=12, at each load.
std::size_t monotonicity_violations(const JobSet& set, const std::vector<double>& loads) {
    const std::vector<std::uint32_t> Ws{4, 6, 8, 10};
    Batch b(set);
    std::vector<std::vector<std::size_t>> points;
    for (double load : loads) {
        points.emplace_back();
        for (auto W : Ws) {
            points.back().push_back(b.add(ots(12, W), load));
        }
    }
    b.run();
    std::size_t violations = 0;
    for (const auto& p : points) {
        for (std::size_t k = 0; k < kSeeds.size(); ++k) {
            for (std::size_t i = 1; i < p.size(); ++i) {
                const auto& lo = b.run_of(p[i - 1], k).row;
                const auto& hi = b.run_of(p[i], k).row;
                violations += hi.throughput_gbps < lo.throughput_gbps ? 1 : 0;
                violations += hi.avg_queuing_us > lo.avg_queuing_us ? 1 : 0;
            }
        }
    }
    return violations;
}

bool criterion_7() {
    const auto t0 = Clock::now();
    Criterion c(7, "properties");
    c.check(g_props.unbalanced == 0,
            "conservation ledger balanced on " + std::to_string(g_props.runs - g_props.unbalanced) + "/" +
                std::to_string(g_props.runs) + " runs");
    c.check(g_props.over_capacity == 0, "buffer peak within capacity on " +
                                            std::to_string(g_props.runs - g_props.over_capacity) + "/" +
                                            std::to_string(g_props.runs) + " runs");
    JobSet again = job_set();
    for (const auto& [job, _] : g_props.rerun_samples) {
        again.jobs.push_back(job);
    }
    const auto rerun = run_jobs(again, thread_count());
    bool identical = !rerun.empty();
    for (std::size_t i = 0; i < rerun.size(); ++i) {
        const auto& first = g_props.rerun_samples[i].second;
        identical = identical && rerun[i].row == first.row && rerun[i].ledger.delivered_frames == first.ledger.delivered_frames &&
                    rerun[i].ledger.dropped_frames == first.ledger.dropped_frames &&
                    rerun[i].peak_buffer_bytes == first.peak_buffer_bytes;
    }
    c.check(identical, "bit-identical reruns for " + std::to_string(rerun.size()) + " slice types");

    // Whole-horizon measurement (no warmup cut), as throughput is defined
    // over the horizon.
    JobSet whole = job_set();
    whole.run.warmup = SimTime::zero();
    const auto violations = monotonicity_violations(whole, {80.0, 100.0, 150.0});
    c.check(violations == 0, "CRN monotonicity in W over the whole horizon (M=12 @80/100/150 Gbps, 10 seeds): " +
                                 std::to_string(violations) + " violations");
    // Informational: the warmup-window estimator has an edge term.
    const auto windowed = monotonicity_violations(job_set(), {80.0, 100.0, 150.0});
    std::printf("    info  same check on the warmup window: %zu violations (not scored)\n", windowed);
    c.check(cell_occupancy_holds(), "at most one multi-frame per (wavelength, cell) per slot");
    char buf[128];
    std::snprintf(buf, sizeof buf, "max OTS intra-MAN total delay sample = %.2f us (< 1000)",
                  g_props.max_ots_intra_delay_us);
    c.check(g_props.max_ots_intra_delay_us > 0.0 && g_props.max_ots_intra_delay_us < 1000.0, buf);
    return c.finish(seconds_since(t0));
}

}  // namespace

int main() {
    const auto t0 = Clock::now();
    std::printf("moonsim acceptance: seeds 1..10, warmup %.0f us, window %.0f us, %u worker(s)\n", kWarmupUs,
                kWindowUs, thread_count());
    int failed = 0;
    try {
        failed += criterion_1() ? 0 : 1;
        failed += criterion_2() ? 0 : 1;
        failed += criterion_3() ? 0 : 1;
        failed += criterion_4() ? 0 : 1;
        failed += criterion_5() ? 0 : 1;
        failed += criterion_6() ? 0 : 1;
        // Covers criteria 2 to 5 (criterion 6 runs through the recipe).
        failed += criterion_7() ? 0 : 1;
    } catch (const std::exception& e) {
        std::printf("FAIL acceptance aborted: %s\n", e.what());
        return 2;
    }
    std::printf("%d of 7 criteria failed (%.1f s)\n", failed, seconds_since(t0));
    return failed == 0 ? 0 : 1;
}
