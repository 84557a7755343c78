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

#include "moonsim/errors.hpp"
#include "moonsim/node_buffer.hpp"
#include "moonsim/random.hpp"

#include <doctest.h>

using namespace moonsim;

namespace {

std::uint32_t admitted(std::uint64_t capacity, std::uint32_t offered) {
    NodeBuffer b(capacity);
    std::uint32_t n = 0;
    for (std::uint32_t i = 0; i < offered; ++i) {
        n += b.try_enqueue(MultiFrame{}, SimTime::zero()) ? 1 : 0;
    }
    return n;
}

}  // namespace

TEST_CASE("drop-tail admission by whole frames") {
    CHECK(NodeBuffer(65536).capacity_frames() == 10);
    CHECK(NodeBuffer(25600).capacity_frames() == 4);
    CHECK(NodeBuffer(16384).capacity_frames() == 2);
    CHECK(admitted(65536, 9) == 9);
    CHECK(admitted(65536, 11) == 10);
    CHECK(admitted(25600, 5) == 4);
    CHECK(admitted(16384, 3) == 2);
    CHECK(NodeBuffer(65536).try_enqueue(MultiFrame{}, SimTime::zero()));
    CHECK_THROWS_AS(NodeBuffer(6143), ConfigError);
}

TEST_CASE("a frame holds its bytes until its transmission ends") {
    NodeBuffer b(16384);
    REQUIRE(b.try_enqueue(MultiFrame{}, SimTime::zero()));
    REQUIRE(b.try_enqueue(MultiFrame{}, SimTime::zero()));
    b.begin_transmission(SimTime::from_us(1.0));
    CHECK(b.waiting() == 1);
    CHECK(b.transmitting(SimTime::from_us(0.5)) == 1);
    CHECK(b.occupied_bytes(SimTime::from_us(0.5)) == 2 * 6144);
    CHECK_FALSE(b.try_enqueue(MultiFrame{}, SimTime::from_us(0.5)));
    CHECK(b.occupied_bytes(SimTime::from_us(1.0)) == 6144);
    CHECK(b.try_enqueue(MultiFrame{}, SimTime::from_us(1.0)));
    CHECK(b.last_end() == SimTime::from_us(1.0));
    CHECK(b.peak_bytes() == 2 * 6144);
}

TEST_CASE("property: occupancy never exceeds capacity") {
    for (std::uint64_t cap : {16384ULL, 25600ULL, 65536ULL}) {
        NodeBuffer b(cap);
        RandomStream rng(cap, StreamId{});
        SimTime now = SimTime::zero();
        for (int i = 0; i < 20000; ++i) {
            now += SimTime::from_ps(static_cast<std::int64_t>(rng.next_u64() % 1'000'000));
            if (rng.next_u64() % 3 != 0) {
                b.try_enqueue(MultiFrame{}, now);
            } else if (!b.empty()) {
                b.begin_transmission(std::max(now, b.last_end()) + SimTime::from_ps(491'520));
            }
            REQUIRE(b.occupied_bytes(now) <= cap);
        }
        CHECK(b.peak_bytes() <= cap);
        CHECK(b.peak_bytes() == b.capacity_frames() * 6144ULL);
    }
}
