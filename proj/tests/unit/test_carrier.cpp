#include <string>

#include "doctest.h"
#include "scenarios.hpp"
#include "qumark/carrier.hpp"
#include "qumark/error.hpp"

using namespace qumark;
using namespace qumark::carrier;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected qumark::Error");
  return ErrorCode::MalformedFile;
}

std::vector<std::uint8_t> bytes_of(const std::string& s) { return {s.begin(), s.end()}; }

}  // namespace

TEST_CASE("raw ingest") {
  std::vector<std::uint8_t> a5{0xA5};
  auto p = ingest_raw(a5);
  CHECK(format_bits(p.bits) == "10100101");
  CHECK(p.eligibility_mask == BitVector(8, 1));
  CHECK(p.format == FormatTag::Raw);
  CHECK(emit(p) == a5);
  CHECK(code_of([] { ingest_raw(std::vector<std::uint8_t>{}); }) == ErrorCode::EmptyInput);
  CHECK(to_string(FormatTag::Raw) == "raw");
  CHECK(to_string(FormatTag::PgmLsb) == "pgm_lsb");
}

TEST_CASE("raw round trip") {
  auto px = testing::random_pixels(333, 1);
  CHECK(emit(ingest_raw(px)) == px);
}

TEST_CASE("PGM ingest marks only least significant bits") {
  std::vector<std::uint8_t> px{0x10, 0xFF};
  auto in = ingest_pgm(make_pgm(2, 1, px));
  CHECK(in.payload.bits.size() == 16);
  BitVector expected(16, 0);
  expected[7] = expected[15] = 1;
  CHECK(in.payload.eligibility_mask == expected);
  CHECK(in.meta.width == 2);
  CHECK(in.meta.height == 1);
  CHECK(in.meta.header == "P5\n2 1\n255\n");
  CHECK(in.payload.format == FormatTag::PgmLsb);
}

TEST_CASE("PGM round trip is byte exact, comments and trailer included") {
  std::string header = "P5\n# scanned\n3 2 # geometry\n255\n";
  auto file = bytes_of(header + "abcdef" + "tail");
  auto in = ingest_pgm(file);
  CHECK(in.meta.width == 3);
  CHECK(in.meta.height == 2);
  CHECK(emit(in.payload, in.meta) == file);

  auto page = make_pgm(128, 128, testing::document_page(128, 128, 2));
  auto p2 = ingest_pgm(page);
  CHECK(emit(p2.payload, p2.meta) == page);
}

TEST_CASE("PGM errors") {
  CHECK(code_of([] { ingest_pgm(bytes_of("P2\n1 1\n255\n0")); }) == ErrorCode::MalformedHeader);
  CHECK(code_of([] { ingest_pgm(bytes_of("P5\n1\n")); }) == ErrorCode::MalformedHeader);
  CHECK(code_of([] { ingest_pgm(bytes_of("P5\n1 1\n65535\n\x01\x02")); }) ==
        ErrorCode::UnsupportedMaxval);
  CHECK(code_of([] { ingest_pgm(bytes_of("P5\n2 2\n255\nabc")); }) == ErrorCode::TruncatedPixelData);
  auto in = ingest_pgm(make_pgm(2, 1, std::vector<std::uint8_t>{1, 2}));
  CHECK(code_of([&] { emit(in.payload); }) == ErrorCode::MissingMeta);
  auto shorter = in.payload;
  shorter.bits.pop_back();
  CHECK(code_of([&] { emit(shorter, in.meta); }) == ErrorCode::LengthMismatch);
}

TEST_CASE("flipping an eligible bit changes one pixel by one level") {
  auto px = testing::random_pixels(64, 3);
  auto in = ingest_pgm(make_pgm(8, 8, px));
  for (std::size_t i = 0; i < in.payload.bits.size(); ++i) {
    if (!in.payload.eligibility_mask[i]) continue;
    auto p = in.payload;
    p.bits[i] ^= 1;
    auto out = ingest_pgm(emit(p, in.meta));
    auto raster = pack_bits(out.payload.bits);
    int changed = 0;
    for (std::size_t k = 0; k < px.size(); ++k) {
      int d = std::abs(int(raster[k]) - int(px[k]));
      REQUIRE(d <= 1);
      changed += d;
    }
    REQUIRE(changed == 1);
  }
}

TEST_CASE("any eligible-only edit keeps every pixel within one level") {
  auto px = testing::random_pixels(16, 4);
  auto in = ingest_pgm(make_pgm(4, 4, px));
  // Exhaustive over all 2^16 LSB patterns.
  for (std::uint32_t pattern = 0; pattern < (1u << 16); ++pattern) {
    auto p = in.payload;
    for (std::size_t k = 0; k < 16; ++k) p.bits[8 * k + 7] = (pattern >> k) & 1;
    auto raster = pack_bits(p.bits);
    for (std::size_t k = 0; k < 16; ++k) REQUIRE(std::abs(int(raster[k]) - int(px[k])) <= 1);
  }
}
