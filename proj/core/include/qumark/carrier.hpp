#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qumark/bits.hpp"

namespace qumark::carrier {

enum class FormatTag { Raw, PgmLsb };

std::string to_string(FormatTag tag);

struct CarrierPayload {
  BitVector bits;
  /// Same length as bits; 1 where flipping the bit is imperceptible.
  BitVector eligibility_mask;
  FormatTag format = FormatTag::Raw;
};

/// Geometry of an 8-bit binary PGM, plus the original header and any bytes
/// after the raster so that re-emission is byte-exact.
struct ImageMeta {
  std::size_t width = 0;
  std::size_t height = 0;
  unsigned max_value = 255;
  std::string header;
  std::vector<std::uint8_t> trailer;
};

struct PgmIngest {
  CarrierPayload payload;
  ImageMeta meta;
};

/// Every bit of every byte, all eligible.
CarrierPayload ingest_raw(std::span<const std::uint8_t> bytes);

/// Binary "P5" PGM with maxval 255. Only the least significant bit of each
/// pixel is eligible.
PgmIngest ingest_pgm(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> emit(const CarrierPayload& payload,
                               const std::optional<ImageMeta>& meta = std::nullopt);

/// Builds a PGM file from pixel values with a canonical header.
std::vector<std::uint8_t> make_pgm(std::size_t width, std::size_t height,
                                   std::span<const std::uint8_t> pixels);

}  // namespace qumark::carrier
