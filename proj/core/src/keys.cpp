#include "qumark/keys.hpp"

#include <sodium.h>

#include <algorithm>
#include <array>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>

#include "qumark/error.hpp"

namespace qumark::keys {
namespace {

constexpr std::string_view kDomainLabel = "qumark/derive-indices";

void ensure_sodium() {
  static const int status = sodium_init();
  if (status < 0) throw std::runtime_error("libsodium failed to initialise");
}

void append_u64le(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

// Counter-mode HMAC-SHA-256 stream of 64-bit words.
class KeyedStream {
 public:
  KeyedStream(std::span<const std::uint8_t> key, std::vector<std::uint8_t> context)
      : key_(key), context_(std::move(context)) {}

  std::uint64_t next_u64() {
    if (word_ == kWordsPerBlock) refill();
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
      v |= static_cast<std::uint64_t>(block_[8 * word_ + i]) << (8 * i);
    }
    ++word_;
    return v;
  }

  // Uniform integer in [0, bound) by rejection of the biased top range.
  std::uint64_t uniform_below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound + 1) % bound;
    for (;;) {
      std::uint64_t v = next_u64();
      if (v <= limit) return v % bound;
    }
  }

 private:
  static constexpr std::size_t kWordsPerBlock = 4;

  void refill() {
    std::vector<std::uint8_t> message = context_;
    append_u64le(message, counter_++);
    crypto_auth_hmacsha256_state state;
    crypto_auth_hmacsha256_init(&state, key_.data(), key_.size());
    crypto_auth_hmacsha256_update(&state, message.data(), message.size());
    crypto_auth_hmacsha256_final(&state, block_.data());
    word_ = 0;
  }

  std::span<const std::uint8_t> key_;
  std::vector<std::uint8_t> context_;
  std::array<std::uint8_t, crypto_auth_hmacsha256_BYTES> block_{};
  std::size_t word_ = kWordsPerBlock;
  std::uint64_t counter_ = 0;
};

}  // namespace

SecretKey::SecretKey(std::vector<std::uint8_t> bytes) : bytes_(std::move(bytes)) {
  if (bytes_.size() < kMinKeyBytes) {
    throw Error(ErrorCode::InvalidKey,
                "key must be at least " + std::to_string(kMinKeyBytes) +
                    " bytes, got " + std::to_string(bytes_.size()));
  }
}

SecretKey SecretKey::generate(std::size_t length) {
  ensure_sodium();
  std::vector<std::uint8_t> bytes(length);
  randombytes_buf(bytes.data(), bytes.size());
  return SecretKey(std::move(bytes));
}

SecretKey SecretKey::from_seed(std::uint64_t seed, std::size_t length) {
  RandomSource rng(seed);
  std::vector<std::uint8_t> bytes;
  bytes.reserve(length + 8);
  while (bytes.size() < length) append_u64le(bytes, rng.next_u64());
  bytes.resize(length);
  return SecretKey(std::move(bytes));
}

std::vector<std::size_t> derive_indices(const SecretKey& key,
                                        const DerivationParams& params) {
  ensure_sodium();
  if (params.message_length == 0 || params.mark_count == 0) {
    throw std::invalid_argument(
        "derive_indices: message length and mark count must be positive");
  }
  std::vector<std::size_t> eligible;
  if (params.eligibility_mask) {
    const BitVector& mask = *params.eligibility_mask;
    if (mask.size() != params.message_length) {
      throw Error(ErrorCode::LengthMismatch,
                  "eligibility mask length " + std::to_string(mask.size()) +
                      " differs from message length " +
                      std::to_string(params.message_length));
    }
    for (std::size_t i = 0; i < mask.size(); ++i) {
      if (mask[i]) eligible.push_back(i);
    }
  } else {
    eligible.resize(params.message_length);
    std::iota(eligible.begin(), eligible.end(), std::size_t{0});
  }
  if (params.mark_count > eligible.size()) {
    throw Error(ErrorCode::TooFewEligiblePositions,
                "asked for " + std::to_string(params.mark_count) +
                    " positions but only " + std::to_string(eligible.size()) +
                    " are eligible");
  }

  std::vector<std::uint8_t> context(kDomainLabel.begin(), kDomainLabel.end());
  context.push_back(0);
  append_u64le(context, kDerivationVersion);
  append_u64le(context, params.message_length);
  append_u64le(context, params.mark_count);
  append_u64le(context, eligible.size());
  KeyedStream stream(key.bytes(), std::move(context));

  for (std::size_t i = 0; i < params.mark_count; ++i) {
    std::size_t j = i + static_cast<std::size_t>(stream.uniform_below(eligible.size() - i));
    std::swap(eligible[i], eligible[j]);
  }
  eligible.resize(params.mark_count);
  std::sort(eligible.begin(), eligible.end());
  return eligible;
}

WatermarkSecret generate_secret(const SecretKey& key,
                                const DerivationParams& params,
                                const Basis& mark_basis) {
  std::vector<std::uint8_t> key_bytes(key.bytes().begin(), key.bytes().end());
  return WatermarkSecret(derive_indices(key, params), mark_basis,
                         std::move(key_bytes));
}

}  // namespace qumark::keys
