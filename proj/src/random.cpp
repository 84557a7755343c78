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

#include "moonsim/random.hpp"

#include "moonsim/errors.hpp"

#include <cmath>

namespace moonsim {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

std::uint32_t stable_tag(std::string_view name) noexcept {
    std::uint32_t h = 2166136261U;
    for (char c : name) {
        h ^= static_cast<std::uint8_t>(c);
        h *= 16777619U;
    }
    return h;
}

RandomStream::RandomStream(std::uint64_t seed, StreamId id) noexcept {
    std::uint64_t s = mix64(seed + kGolden);
    s = mix64(s ^ (static_cast<std::uint64_t>(id.slice_tag) << 32 | 0x5A17ULL));
    s = mix64(s ^ (static_cast<std::uint64_t>(id.source) << 32 | id.destination));
    state_ = s;
}

std::uint64_t RandomStream::next_u64() noexcept {
    ++draws_;
    state_ += kGolden;
    return mix64(state_);
}

double RandomStream::next_open01() noexcept {
    // 53 random bits centred in their bucket: never 0, never 1.
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

SimTime sample_exponential_ps(RandomStream& stream, double mean_ps) {
    if (!(mean_ps > 0.0)) {
        throw ConfigError("mean", "exponential mean must be positive");
    }
    const double x = -mean_ps * std::log(stream.next_open01());
    const auto ps = static_cast<std::int64_t>(std::llround(x));
    return SimTime::from_ps(ps < 1 ? 1 : ps);
}

SimTime sample_exponential(RandomStream& stream, SimTime mean) {
    return sample_exponential_ps(stream, static_cast<double>(mean.ps()));
}

}  // namespace moonsim
