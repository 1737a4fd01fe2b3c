#include "qumark/bits.hpp"

#include <stdexcept>

namespace qumark {

BitVector parse_bits(std::string_view text) {
  BitVector bits;
  bits.reserve(text.size());
  for (char c : text) {
    if (c == '0' || c == '1') {
      bits.push_back(static_cast<std::uint8_t>(c - '0'));
    } else if (c != ' ' && c != '_') {
      throw std::invalid_argument("parse_bits: unexpected character '" +
                                  std::string(1, c) + "'");
    }
  }
  return bits;
}

std::string format_bits(std::span<const std::uint8_t> bits) {
  std::string out;
  out.reserve(bits.size());
  for (auto b : bits) out.push_back(b ? '1' : '0');
  return out;
}

BitVector unpack_bytes(std::span<const std::uint8_t> bytes) {
  BitVector bits;
  bits.reserve(bytes.size() * 8);
  for (auto byte : bytes) {
    for (int shift = 7; shift >= 0; --shift) {
      bits.push_back(static_cast<std::uint8_t>((byte >> shift) & 1u));
    }
  }
  return bits;
}

std::vector<std::uint8_t> pack_bits(std::span<const std::uint8_t> bits) {
  std::vector<std::uint8_t> bytes((bits.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) bytes[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
  }
  return bytes;
}

std::size_t hamming_distance(std::span<const std::uint8_t> a,
                             std::span<const std::uint8_t> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("hamming_distance: length mismatch");
  }
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] != b[i]);
  return d;
}

}  // namespace qumark
