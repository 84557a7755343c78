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
 * @file framing.hpp
 * @brief OSU encapsulation: 257-bit blocks, 192-byte OSU frames, 32-frame
 *        multi-frames keyed by destination and traffic slice.
 *
 * A client packet is cut into 257-bit blocks. The first bit of each block
 * goes to OSU overhead, the remaining 256 bits to payload. 32 OSU frames of
 * 185 payload bytes hold exactly 185 block payloads, so a multi-frame is the
 * smallest unit that carries an integer number of blocks.
 *
 * Serialized multi-frame (little-endian integers):
 *
 *   envelope, 24 bytes
 *     [0..3]   magic "MOMF"
 *     [4]      format version (1)
 *     [5]      traffic slice (0 OTS, 1 OCS, 2 aggregation)
 *     [6..7]   blocks_used
 *     [8..11]  destination node
 *     [12..15] source node
 *     [16..23] generation time, picoseconds
 *   32 OSU frames, 192 bytes each
 *     [0]      frame index within the multi-frame
 *     [1]      bit 7: first frame, bits 0-1: traffic slice
 *     [2..3]   blocks_used
 *     [4..6]   24 bits of the block-overhead bit string, MSB first
 *              (frame f carries bits 24f .. 24f+23; bit k belongs to block k)
 *     [7..191] 185 bytes of the concatenated 256-bit block payloads
 *
 * The envelope exists only for tests and tooling; it is not a wire standard.
 */

#pragma once

#include "moonsim/time.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace moonsim {

using NodeId = std::uint32_t;

enum class TrafficSlice : std::uint8_t { Ots = 0, Ocs = 1, Aggregation = 2 };

struct FramingConstants {
    static constexpr std::uint32_t block_bits = 257;
    static constexpr std::uint32_t block_payload_bits = 256;
    static constexpr std::uint32_t block_overhead_bits = 1;
    static constexpr std::uint32_t osu_total_bytes = 192;
    static constexpr std::uint32_t osu_payload_bytes = 185;
    static constexpr std::uint32_t osu_overhead_bytes = 7;
    static constexpr std::uint32_t frames_per_multiframe = 32;
    static constexpr std::uint32_t blocks_per_multiframe =
        frames_per_multiframe * osu_payload_bytes * 8 / block_payload_bits;
    static constexpr std::uint32_t multiframe_wire_bytes = frames_per_multiframe * osu_total_bytes;
    static constexpr std::uint64_t multiframe_wire_bits = std::uint64_t{multiframe_wire_bytes} * 8;
};

static_assert(FramingConstants::block_bits ==
              FramingConstants::block_payload_bits + FramingConstants::block_overhead_bits);
static_assert(FramingConstants::osu_total_bytes ==
              FramingConstants::osu_payload_bytes + FramingConstants::osu_overhead_bytes);
static_assert(FramingConstants::frames_per_multiframe * FramingConstants::osu_payload_bytes * 8 %
                  FramingConstants::block_payload_bits ==
              0);
static_assert(FramingConstants::blocks_per_multiframe == 185);
static_assert(FramingConstants::multiframe_wire_bits == 49152);

struct Block {
    bool overhead_bit = false;
    /// 256 payload bits, MSB-first within each word.
    std::array<std::uint64_t, 4> payload{};
    /// Client bits carried (1..257); the rest is zero padding.
    std::uint16_t valid_bits = FramingConstants::block_bits;
    SimTime arrival_time;

    [[nodiscard]] std::uint32_t padding_bits() const noexcept { return FramingConstants::block_bits - valid_bits; }
    [[nodiscard]] bool same_bits(const Block& other) const noexcept {
        return overhead_bit == other.overhead_bit && payload == other.payload;
    }
};

/// Transport unit of the simulators: metadata only, no payload bits.
struct MultiFrame {
    NodeId source = 0;
    NodeId destination = 0;
    TrafficSlice slice = TrafficSlice::Ots;
    std::uint16_t blocks_used = FramingConstants::blocks_per_multiframe;
    SimTime generation_time;

    static constexpr std::uint64_t wire_bits() noexcept { return FramingConstants::multiframe_wire_bits; }
    static constexpr std::uint32_t wire_bytes() noexcept { return FramingConstants::multiframe_wire_bytes; }
    [[nodiscard]] std::uint64_t client_bits() const noexcept {
        return std::uint64_t{blocks_used} * FramingConstants::block_bits;
    }
};

/// A multi-frame together with the blocks it carries.
struct MultiFrameContent {
    MultiFrame frame;
    std::vector<Block> blocks;
};

constexpr std::uint64_t multiframe_wire_bits() noexcept { return FramingConstants::multiframe_wire_bits; }

constexpr std::uint32_t blocks_for_bits(std::uint64_t packet_bits) noexcept {
    return static_cast<std::uint32_t>((packet_bits + FramingConstants::block_bits - 1) / FramingConstants::block_bits);
}

/// Cuts a zero-content packet of `packet_bits` into blocks. Throws
/// ConfigError for an empty packet.
std::vector<Block> segment_packet(std::uint64_t packet_bits, SimTime arrival_time);

/// Cuts `packet_bits` bits of `data` (MSB-first) into blocks; the tail block
/// is zero padded.
std::vector<Block> segment_packet(std::span<const std::uint8_t> data, std::uint64_t packet_bits, SimTime arrival_time);

/// Groups blocks of one (destination, slice) key into multi-frames of up to
/// 185 blocks. The last multi-frame may be partial. Each generation time is
/// the arrival time of its last block. Throws ConfigError on empty input.
std::vector<MultiFrameContent> build_multiframes(std::span<const Block> blocks, NodeId destination,
                                                 TrafficSlice slice, NodeId source = 0);

inline constexpr std::size_t kMultiFrameEnvelopeBytes = 24;
inline constexpr std::size_t kSerializedMultiFrameBytes =
    kMultiFrameEnvelopeBytes + FramingConstants::multiframe_wire_bytes;

std::vector<std::uint8_t> serialize(const MultiFrameContent& mf);

/// Inverse of serialize(). Throws std::invalid_argument on malformed input.
MultiFrameContent deserialize(std::span<const std::uint8_t> bytes);

/// Streaming block accumulator for one (source, destination, slice) key.
/// Blocks are packed into multi-frames in arrival order; a multi-frame is
/// emitted only when full, so a packet may straddle two multi-frames.
class MultiFrameAssembler {
public:
    /// Adds the blocks of one packet and returns how many multi-frames it
    /// completed. Completed frames take the packet's arrival time.
    std::uint32_t add_packet_blocks(std::uint32_t blocks) noexcept {
        pending_ += blocks;
        const std::uint32_t done = pending_ / FramingConstants::blocks_per_multiframe;
        pending_ -= done * FramingConstants::blocks_per_multiframe;
        return done;
    }

    [[nodiscard]] std::uint32_t pending_blocks() const noexcept { return pending_; }

private:
    std::uint32_t pending_ = 0;
};

}  // namespace moonsim
