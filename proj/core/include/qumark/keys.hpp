#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qumark/bits.hpp"
#include "qumark/qstate.hpp"
#include "qumark/random.hpp"
#include "qumark/watermark.hpp"

namespace qumark::keys {

inline constexpr std::size_t kMinKeyBytes = 16;
inline constexpr std::size_t kDefaultKeyBytes = 32;

/// Compact secret K from which the watermark positions are derived.
class SecretKey {
 public:
  /// Throws Error(InvalidKey) for keys shorter than kMinKeyBytes.
  explicit SecretKey(std::vector<std::uint8_t> bytes);

  /// Fresh key from the operating system's entropy source.
  static SecretKey generate(std::size_t length = kDefaultKeyBytes);
  /// Reproducible key expanded from a 64-bit seed.
  static SecretKey from_seed(std::uint64_t seed,
                             std::size_t length = kDefaultKeyBytes);

  std::span<const std::uint8_t> bytes() const noexcept { return bytes_; }

  friend bool operator==(const SecretKey&, const SecretKey&) = default;

 private:
  std::vector<std::uint8_t> bytes_;
};

struct DerivationParams {
  std::size_t message_length = 0;
  std::size_t mark_count = 0;
  /// 1 marks a position that may carry the watermark. Empty means all.
  std::optional<BitVector> eligibility_mask;
};

/// Version tag mixed into the derivation. Changing the derivation in any
/// way must bump this and the secret-file version.
inline constexpr std::uint32_t kDerivationVersion = 1;

/// The key-to-positions map: a keyed pseudorandom partial Fisher-Yates
/// shuffle of the eligible positions, returned sorted.
///
/// The shuffle is driven by HMAC-SHA-256 blocks keyed with K over a
/// domain-separation label, the parameters, and a block counter. Each
/// 32-byte block supplies four little-endian 64-bit words; bounded integers
/// are taken by rejection sampling.
std::vector<std::size_t> derive_indices(const SecretKey& key,
                                        const DerivationParams& params);

WatermarkSecret generate_secret(const SecretKey& key,
                                const DerivationParams& params,
                                const Basis& mark_basis);

}  // namespace qumark::keys
