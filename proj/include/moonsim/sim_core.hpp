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
 * @file sim_core.hpp
 * @brief Sequential discrete-event engine shared by every slice model.
 *
 * The engine is a (timestamp, sequence) ordered queue plus a monotone clock.
 * Payloads are plain values chosen by each slice model; dispatch is a callable
 * handed to run_until(), so the hot loop carries no type erasure.
 */

#pragma once

#include "moonsim/errors.hpp"
#include "moonsim/time.hpp"

#include <cstdint>
#include <functional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

namespace moonsim {

/// Default slot length of every time-slotted wavelength in the network.
inline constexpr SimTime kSlotDuration = SimTime::from_ps(2'100'000);

/// Paper-scale horizon: 1200 slots of 2.1 us.
inline constexpr SimTime kDefaultHorizon = kSlotDuration * 1200;

[[noreturn]] void fail_schedule_in_past(SimTime at, SimTime now);

class SimClock {
public:
    explicit SimClock(SimTime slot_duration = kSlotDuration) : slot_duration_(slot_duration) {}

    [[nodiscard]] SimTime now() const noexcept { return now_; }
    [[nodiscard]] SimTime slot_duration() const noexcept { return slot_duration_; }
    [[nodiscard]] std::int64_t slot_index() const noexcept { return now_.periods_of(slot_duration_); }

    void advance_to(SimTime t) {
        if (t < now_) {
            throw SimulationError("clock moved backwards: " + std::to_string(t.ps()) + " ps < " +
                                  std::to_string(now_.ps()) + " ps");
        }
        now_ = t;
    }

private:
    SimTime slot_duration_;
    SimTime now_ = SimTime::zero();
};

template <class Payload>
class EventQueue {
public:
    struct Entry {
        SimTime at;
        std::uint64_t sequence;
        Payload payload;
    };

    void push(SimTime at, Payload payload) { heap_.push(Entry{at, next_sequence_++, std::move(payload)}); }

    [[nodiscard]] bool empty() const noexcept { return heap_.empty(); }
    [[nodiscard]] std::size_t size() const noexcept { return heap_.size(); }
    [[nodiscard]] const Entry& top() const { return heap_.top(); }

    Entry pop() {
        Entry e = heap_.top();
        heap_.pop();
        return e;
    }

private:
    struct Later {
        bool operator()(const Entry& a, const Entry& b) const noexcept {
            if (a.at != b.at) {
                return a.at > b.at;
            }
            return a.sequence > b.sequence;
        }
    };

    std::priority_queue<Entry, std::vector<Entry>, Later> heap_;
    std::uint64_t next_sequence_ = 0;
};

template <class Payload>
class Simulator {
public:
    explicit Simulator(SimTime slot_duration = kSlotDuration) : clock_(slot_duration) {}

    void schedule(SimTime at, Payload payload) {
        if (at < clock_.now()) {
            fail_schedule_in_past(at, clock_.now());
        }
        queue_.push(at, std::move(payload));
    }

    /// Processes every event with timestamp <= horizon in (timestamp,
    /// sequence) order, then parks the clock at the horizon. Events past the
    /// horizon stay queued. Returns the number of events dispatched.
    template <class Dispatch>
    std::uint64_t run_until(SimTime horizon, Dispatch&& dispatch) {
        std::uint64_t processed = 0;
        while (!queue_.empty() && queue_.top().at <= horizon) {
            auto entry = queue_.pop();
            clock_.advance_to(entry.at);
            dispatch(*this, entry.payload);
            ++processed;
        }
        if (horizon > clock_.now()) {
            clock_.advance_to(horizon);
        }
        return processed;
    }

    [[nodiscard]] SimTime now() const noexcept { return clock_.now(); }
    [[nodiscard]] const SimClock& clock() const noexcept { return clock_; }
    [[nodiscard]] std::size_t pending() const noexcept { return queue_.size(); }

private:
    SimClock clock_;
    EventQueue<Payload> queue_;
};

}  // namespace moonsim
