#pragma once

#include <cstdint>
#include <random>

namespace qumark {

/// Seedable stream of uniform reals in [0, 1).
///
/// Stands in for the physical randomness of quantum observation. The
/// engine is the standard 64-bit Mersenne Twister and the real conversion
/// is done by hand (top 53 bits scaled by 2^-53), so a seed yields the same
/// stream on every conforming platform. Not thread safe; give each thread
/// its own instance.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : engine_(seed) {}

  double next_uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  std::uint64_t next_u64() { return engine_(); }

  // Lets RandomSource drive <random> distributions in tests and tools.
  using result_type = std::uint64_t;
  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// Derives an independent seed for trial `index` of a sweep seeded by
/// `base` (splitmix64 finalizer). Sweeps merge results by trial index, so
/// fanning trials out across threads does not change any output.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept;

}  // namespace qumark
