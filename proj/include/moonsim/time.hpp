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

#pragma once

#include <cmath>
#include <compare>
#include <cstdint>

namespace moonsim {

/// Simulated time as an integer picosecond count.
///
/// Picoseconds keep every constant of the model exact: a 2.1 us slot is
/// 2'100'000 ps and one multi-frame at 100 Gbps (491.52 ns) is 491'520 ps.
/// The same type is used for instants and durations; conversions to
/// microseconds happen only at the reporting boundary.
class SimTime {
public:
    constexpr SimTime() noexcept = default;

    static constexpr SimTime from_ps(std::int64_t ps) noexcept { return SimTime{ps}; }
    static constexpr SimTime from_ns(std::int64_t ns) noexcept { return SimTime{ns * 1000}; }

    /// Rounds to the nearest picosecond.
    static SimTime from_us(double us) noexcept {
        return SimTime{static_cast<std::int64_t>(std::llround(us * 1e6))};
    }

    /// Time needed to serialize `bits` at `gbps`, rounded to the nearest ps.
    static SimTime transmission(std::uint64_t bits, double gbps) noexcept {
        return SimTime{static_cast<std::int64_t>(std::llround(static_cast<double>(bits) * 1000.0 / gbps))};
    }

    static constexpr SimTime zero() noexcept { return SimTime{0}; }

    [[nodiscard]] constexpr std::int64_t ps() const noexcept { return ps_; }
    [[nodiscard]] constexpr double us() const noexcept { return static_cast<double>(ps_) * 1e-6; }
    [[nodiscard]] constexpr double seconds() const noexcept { return static_cast<double>(ps_) * 1e-12; }

    constexpr SimTime operator+(SimTime rhs) const noexcept { return SimTime{ps_ + rhs.ps_}; }
    constexpr SimTime operator-(SimTime rhs) const noexcept { return SimTime{ps_ - rhs.ps_}; }
    constexpr SimTime operator*(std::int64_t k) const noexcept { return SimTime{ps_ * k}; }
    constexpr SimTime& operator+=(SimTime rhs) noexcept {
        ps_ += rhs.ps_;
        return *this;
    }
    constexpr SimTime& operator-=(SimTime rhs) noexcept {
        ps_ -= rhs.ps_;
        return *this;
    }

    /// Number of whole `period`s contained in this duration.
    [[nodiscard]] constexpr std::int64_t periods_of(SimTime period) const noexcept { return ps_ / period.ps_; }

    constexpr auto operator<=>(const SimTime&) const noexcept = default;

private:
    explicit constexpr SimTime(std::int64_t ps) noexcept : ps_(ps) {}

    std::int64_t ps_ = 0;
};

}  // namespace moonsim
