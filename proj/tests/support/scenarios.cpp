#include "scenarios.hpp"

#include "qumark/carrier.hpp"
#include "qumark/keys.hpp"
#include "qumark/random.hpp"

namespace qumark::testing {

std::vector<std::uint8_t> document_page(std::size_t width, std::size_t height,
                                        std::uint64_t seed) {
  std::vector<std::uint8_t> px(width * height, 255);
  RandomSource rng(seed);
  // Text lines of glyph boxes with gaps, inside a margin.
  const std::size_t margin = width / 16 + 1;
  for (std::size_t y = margin; y + 8 < height - margin; y += 12) {
    std::size_t x = margin;
    while (x + 6 < width - margin) {
      std::size_t w = 2 + rng.next_u64() % 5;
      std::size_t h = 5 + rng.next_u64() % 4;
      for (std::size_t dy = 0; dy < h; ++dy) {
        for (std::size_t dx = 0; dx < w && x + dx < width - margin; ++dx) {
          px[(y + dy) * width + x + dx] = 0;
        }
      }
      x += w + 1 + rng.next_u64() % 3;
    }
  }
  return px;
}

std::vector<std::uint8_t> random_pixels(std::size_t count, std::uint64_t seed) {
  RandomSource rng(seed);
  std::vector<std::uint8_t> px(count);
  for (auto& p : px) p = static_cast<std::uint8_t>(rng.next_u64() >> 56);
  return px;
}

BitVector random_bits(std::size_t count, std::uint64_t seed) {
  RandomSource rng(seed);
  BitVector bits(count);
  for (auto& b : bits) b = static_cast<std::uint8_t>(rng.next_u64() >> 63);
  return bits;
}

Scenario make_scenario(BitVector plain, const BitVector& mask,
                       std::size_t mark_count, double mark_theta,
                       std::uint64_t key_seed, double writing_theta) {
  keys::DerivationParams params;
  params.message_length = plain.size();
  params.mark_count = mark_count;
  if (!mask.empty()) params.eligibility_mask = mask;
  auto secret = keys::generate_secret(keys::SecretKey::from_seed(key_seed), params,
                                      Basis(mark_theta));
  return Scenario{std::move(plain), std::move(secret), Basis(writing_theta)};
}

Scenario document_scenario(std::size_t mark_count, double mark_theta,
                           std::uint64_t seed) {
  auto pgm = carrier::make_pgm(128, 128, document_page(128, 128, seed));
  auto ingested = carrier::ingest_pgm(pgm);
  return make_scenario(std::move(ingested.payload.bits),
                       ingested.payload.eligibility_mask, mark_count, mark_theta,
                       seed);
}

ObservedMessage genuine_observation(const Scenario& s, std::uint64_t trial_seed) {
  RandomSource embed_rng(derive_seed(trial_seed, 0));
  RandomSource observe_rng(derive_seed(trial_seed, 1));
  QuantumMessage marked = embed(build_message(s.plain, s.writing), s.secret, embed_rng);
  return observe(marked, s.writing, observe_rng);
}

std::size_t errors_at(const ObservedMessage& a, const ObservedMessage& b,
                      std::span<const std::size_t> indices) {
  std::size_t n = 0;
  for (std::size_t i : indices) n += (a.bits[i] != b.bits[i]);
  return n;
}

}  // namespace qumark::testing
