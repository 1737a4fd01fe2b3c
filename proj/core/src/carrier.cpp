#include "qumark/carrier.hpp"

#include <cctype>
#include <string>

#include "qumark/error.hpp"

namespace qumark::carrier {
namespace {

// Reads the next whitespace-delimited unsigned header field, skipping
// '#' comments that run to end of line.
std::size_t read_header_field(std::span<const std::uint8_t> bytes,
                              std::size_t& pos, const char* name) {
  for (;;) {
    while (pos < bytes.size() && std::isspace(bytes[pos])) ++pos;
    if (pos < bytes.size() && bytes[pos] == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n' && bytes[pos] != '\r') ++pos;
      continue;
    }
    break;
  }
  if (pos >= bytes.size() || !std::isdigit(bytes[pos])) {
    throw Error(ErrorCode::MalformedHeader, std::string("missing ") + name);
  }
  std::size_t value = 0;
  while (pos < bytes.size() && std::isdigit(bytes[pos])) {
    value = value * 10 + static_cast<std::size_t>(bytes[pos] - '0');
    if (value > (std::size_t{1} << 32)) {
      throw Error(ErrorCode::MalformedHeader, std::string(name) + " too large");
    }
    ++pos;
  }
  return value;
}

}  // namespace

std::string to_string(FormatTag tag) {
  return tag == FormatTag::Raw ? "raw" : "pgm_lsb";
}

CarrierPayload ingest_raw(std::span<const std::uint8_t> bytes) {
  if (bytes.empty()) throw Error(ErrorCode::EmptyInput, "raw payload is empty");
  CarrierPayload payload;
  payload.bits = unpack_bytes(bytes);
  payload.eligibility_mask.assign(payload.bits.size(), 1);
  payload.format = FormatTag::Raw;
  return payload;
}

PgmIngest ingest_pgm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
    throw Error(ErrorCode::MalformedHeader, "not a binary PGM (magic P5)");
  }
  std::size_t pos = 2;
  std::size_t width = read_header_field(bytes, pos, "width");
  std::size_t height = read_header_field(bytes, pos, "height");
  std::size_t maxval = read_header_field(bytes, pos, "maxval");
  if (width == 0 || height == 0) {
    throw Error(ErrorCode::MalformedHeader, "image has zero size");
  }
  if (maxval != 255) {
    throw Error(ErrorCode::UnsupportedMaxval,
                "only 8-bit images (maxval 255) are supported, got " +
                    std::to_string(maxval));
  }
  if (pos >= bytes.size() || !std::isspace(bytes[pos])) {
    throw Error(ErrorCode::MalformedHeader,
                "expected a single whitespace byte before pixel data");
  }
  ++pos;

  std::size_t pixels = width * height;
  if (bytes.size() - pos < pixels) {
    throw Error(ErrorCode::TruncatedPixelData,
                "expected " + std::to_string(pixels) + " pixel bytes, found " +
                    std::to_string(bytes.size() - pos));
  }

  PgmIngest out;
  out.meta.width = width;
  out.meta.height = height;
  out.meta.max_value = 255;
  out.meta.header.assign(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(pos));
  out.meta.trailer.assign(bytes.begin() + static_cast<std::ptrdiff_t>(pos + pixels),
                          bytes.end());
  out.payload.bits = unpack_bytes(bytes.subspan(pos, pixels));
  out.payload.eligibility_mask.assign(out.payload.bits.size(), 0);
  for (std::size_t p = 0; p < pixels; ++p) out.payload.eligibility_mask[8 * p + 7] = 1;
  out.payload.format = FormatTag::PgmLsb;
  return out;
}

std::vector<std::uint8_t> emit(const CarrierPayload& payload,
                               const std::optional<ImageMeta>& meta) {
  std::vector<std::uint8_t> body = pack_bits(payload.bits);
  if (payload.format == FormatTag::Raw) return body;

  if (!meta) throw Error(ErrorCode::MissingMeta, "PGM emission needs image metadata");
  if (payload.bits.size() != 8 * meta->width * meta->height) {
    throw Error(ErrorCode::LengthMismatch,
                "payload has " + std::to_string(payload.bits.size()) +
                    " bits but the image needs " +
                    std::to_string(8 * meta->width * meta->height));
  }
  std::vector<std::uint8_t> out(meta->header.begin(), meta->header.end());
  out.insert(out.end(), body.begin(), body.end());
  out.insert(out.end(), meta->trailer.begin(), meta->trailer.end());
  return out;
}

std::vector<std::uint8_t> make_pgm(std::size_t width, std::size_t height,
                                   std::span<const std::uint8_t> pixels) {
  if (pixels.size() != width * height) {
    throw Error(ErrorCode::LengthMismatch, "pixel count does not match geometry");
  }
  std::string header = "P5\n" + std::to_string(width) + " " +
                       std::to_string(height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), pixels.begin(), pixels.end());
  return out;
}

}  // namespace qumark::carrier
