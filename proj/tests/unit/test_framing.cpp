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
#include "moonsim/framing.hpp"
#include "moonsim/random.hpp"

#include <doctest.h>

#include <stdexcept>

using namespace moonsim;

namespace {

bool block_bit(const Block& b, std::uint32_t within) {
    if (within == 0) {
        return b.overhead_bit;
    }
    const std::uint32_t p = within - 1;
    return ((b.payload[p / 64] >> (63 - p % 64)) & 1U) != 0;
}

std::vector<std::uint8_t> random_bytes(std::size_t n, std::uint64_t seed) {
    RandomStream rng(seed, StreamId{});
    std::vector<std::uint8_t> v(n);
    for (auto& x : v) {
        x = static_cast<std::uint8_t>(rng.next_u64());
    }
    return v;
}

}  // namespace

TEST_CASE("multi-frame geometry") {
    CHECK(multiframe_wire_bits() == 32U * 192U * 8U);
    CHECK(MultiFrame::wire_bytes() == 6144);
    CHECK(FramingConstants::blocks_per_multiframe == 32 * 1480 / 256);
    CHECK(SimTime::transmission(multiframe_wire_bits(), 100.0).us() == doctest::Approx(0.49152));
    CHECK(SimTime::transmission(multiframe_wire_bits(), 25.0).us() == doctest::Approx(1.96608));
}

TEST_CASE("segmentation examples") {
    const auto full = segment_packet(47545, SimTime::zero());
    CHECK(full.size() == 185);
    for (const auto& b : full) {
        CHECK(b.padding_bits() == 0);
    }
    const auto one = segment_packet(257, SimTime::zero());
    REQUIRE(one.size() == 1);
    CHECK(one[0].padding_bits() == 0);
    const auto two = segment_packet(300, SimTime::zero());
    REQUIRE(two.size() == 2);
    CHECK(two[0].padding_bits() == 0);
    CHECK(two[1].padding_bits() == 514 - 300);
    CHECK(blocks_for_bits(12000) == 47);
    CHECK_THROWS_AS(segment_packet(0, SimTime::zero()), ConfigError);
}

TEST_CASE("segmentation keeps every bit in order and pads with zeros") {
    for (std::uint64_t bits : {1ULL, 7ULL, 256ULL, 257ULL, 258ULL, 1000ULL, 12000ULL}) {
        const auto data = random_bytes((bits + 7) / 8, bits);
        const auto blocks = segment_packet(data, bits, SimTime::zero());
        CHECK(blocks.size() == (bits + 256) / 257);
        for (std::uint64_t i = 0; i < blocks.size() * 257ULL; ++i) {
            const bool expect = i < bits && ((data[i / 8] >> (7 - i % 8)) & 1U) != 0;
            REQUIRE(block_bit(blocks[i / 257], static_cast<std::uint32_t>(i % 257)) == expect);
        }
    }
}

TEST_CASE("multi-frame building examples") {
    const auto blocks = segment_packet(186ULL * 257, SimTime::from_us(3.0));
    const auto exact = build_multiframes(std::span(blocks).first(185), 2, TrafficSlice::Ots);
    REQUIRE(exact.size() == 1);
    CHECK(exact[0].frame.blocks_used == 185);
    const auto over = build_multiframes(blocks, 2, TrafficSlice::Ots);
    REQUIRE(over.size() == 2);
    CHECK(over[1].frame.blocks_used == 1);
    CHECK(over[1].frame.wire_bits() == 49152);
    const auto single = build_multiframes(std::span(blocks).first(1), 5, TrafficSlice::Ocs, 1);
    REQUIRE(single.size() == 1);
    CHECK(single[0].frame.wire_bits() == 49152);
    CHECK(single[0].frame.destination == 5);
    CHECK(single[0].frame.source == 1);
    CHECK(single[0].frame.generation_time == SimTime::from_us(3.0));
    CHECK_THROWS_AS(build_multiframes({}, 0, TrafficSlice::Ots), ConfigError);
}

TEST_CASE("property: 185k blocks give k full multi-frames") {
    for (std::uint32_t k = 1; k <= 8; ++k) {
        const auto blocks = segment_packet(std::uint64_t{185} * k * 257, SimTime::zero());
        const auto mfs = build_multiframes(blocks, 0, TrafficSlice::Ots);
        REQUIRE(mfs.size() == k);
        for (const auto& mf : mfs) {
            CHECK(mf.frame.blocks_used == 185);
            for (const auto& b : mf.blocks) {
                CHECK(b.padding_bits() == 0);
            }
        }
    }
}

TEST_CASE("property: serialize and deserialize round trip") {
    for (std::uint64_t bits : {257ULL, 12000ULL, 47545ULL, 30000ULL}) {
        const auto data = random_bytes((bits + 7) / 8, bits * 3);
        const auto blocks = segment_packet(data, bits, SimTime::from_ps(123456));
        for (const auto slice : {TrafficSlice::Ots, TrafficSlice::Ocs, TrafficSlice::Aggregation}) {
            for (const auto& mf : build_multiframes(blocks, 9, slice, 4)) {
                const auto bytes = serialize(mf);
                REQUIRE(bytes.size() == kSerializedMultiFrameBytes);
                const auto back = deserialize(bytes);
                CHECK(back.frame.source == 4);
                CHECK(back.frame.destination == 9);
                CHECK(back.frame.slice == slice);
                CHECK(back.frame.blocks_used == mf.frame.blocks_used);
                CHECK(back.frame.generation_time == mf.frame.generation_time);
                REQUIRE(back.blocks.size() == mf.blocks.size());
                for (std::size_t i = 0; i < back.blocks.size(); ++i) {
                    CHECK(back.blocks[i].same_bits(mf.blocks[i]));
                }
            }
        }
    }
}

TEST_CASE("malformed serialized frames are rejected") {
    const auto blocks = segment_packet(1000, SimTime::zero());
    auto bytes = serialize(build_multiframes(blocks, 1, TrafficSlice::Ots)[0]);
    CHECK_THROWS_AS(deserialize(std::span(bytes).first(100)), std::invalid_argument);
    auto bad_magic = bytes;
    bad_magic[0] ^= 0xFF;
    CHECK_THROWS_AS(deserialize(bad_magic), std::invalid_argument);
}

TEST_CASE("assembler packs packets across multi-frame boundaries") {
    MultiFrameAssembler a;
    std::uint32_t frames = 0;
    for (int i = 0; i < 4; ++i) {
        frames += a.add_packet_blocks(47);
    }
    CHECK(frames == 1);
    CHECK(a.pending_blocks() == 4 * 47 - 185);
    // Conservation over many packets: blocks in = 185 × frames + pending.
    for (int i = 0; i < 1000; ++i) {
        frames += a.add_packet_blocks(47);
    }
    CHECK(std::uint64_t{frames} * 185 + a.pending_blocks() == 1004ULL * 47);
}
