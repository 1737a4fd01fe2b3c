#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qumark {

// One classical bit per element, each 0 or 1.
using BitVector = std::vector<std::uint8_t>;

/// Parses a string of '0'/'1' characters; spaces and underscores are skipped
/// so that "0110 0101" is accepted. Throws std::invalid_argument otherwise.
BitVector parse_bits(std::string_view text);

std::string format_bits(std::span<const std::uint8_t> bits);

/// Big-endian expansion: bit 7 of bytes[0] becomes element 0.
BitVector unpack_bytes(std::span<const std::uint8_t> bytes);

/// Inverse of unpack_bytes. A trailing partial byte is zero-padded.
std::vector<std::uint8_t> pack_bits(std::span<const std::uint8_t> bits);

std::size_t hamming_distance(std::span<const std::uint8_t> a,
                             std::span<const std::uint8_t> b);

}  // namespace qumark
