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

#include "moonsim/time.hpp"

#include <cstdint>
#include <string_view>

namespace moonsim {

/// Identifies one independent random sequence. Traffic streams are keyed by
/// (slice instance, source, destination) only, so changing wavelength counts
/// or buffer sizes never perturbs the arrival process.
struct StreamId {
    std::uint32_t slice_tag = 0;
    std::uint32_t source = 0;
    std::uint32_t destination = 0;

    friend bool operator==(const StreamId&, const StreamId&) = default;
};

/// Stable 32-bit FNV-1a of a slice instance name.
std::uint32_t stable_tag(std::string_view name) noexcept;

/// splitmix64 sequence whose starting state is a hash of (seed, stream).
/// Integer-only state update, so the raw sequence is identical everywhere.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, StreamId id) noexcept;

    std::uint64_t next_u64() noexcept;

    /// Uniform on the open interval (0, 1).
    double next_open01() noexcept;

    [[nodiscard]] std::uint64_t draws() const noexcept { return draws_; }

private:
    std::uint64_t state_;
    std::uint64_t draws_ = 0;
};

/// Exponential variate with the given mean, rounded to the picosecond and
/// clamped to at least 1 ps. Throws ConfigError when mean <= 0.
SimTime sample_exponential(RandomStream& stream, SimTime mean);

/// Same, for a mean expressed in (possibly fractional) picoseconds.
SimTime sample_exponential_ps(RandomStream& stream, double mean_ps);

}  // namespace moonsim
