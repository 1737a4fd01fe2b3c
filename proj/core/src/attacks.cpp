#include "qumark/attacks.hpp"

#include <string>

#include "qumark/error.hpp"

namespace qumark::attacks {

AveragingResult averaging_attack(std::span<const ObservedMessage> copies) {
  if (copies.size() < 2) {
    throw Error(ErrorCode::TooFewCopies, "averaging needs at least two copies");
  }
  const std::size_t length = copies.front().size();
  for (const auto& copy : copies) {
    if (copy.size() != length) {
      throw Error(ErrorCode::LengthMismatch, "copies differ in length");
    }
    if (copy.observation_basis.dissimilar_to(copies.front().observation_basis)) {
      throw Error(ErrorCode::BasisMismatch,
                  "copies were observed in different bases");
    }
  }

  AveragingResult result;
  result.recovered_bits.resize(length);
  result.disagreement_counts.resize(length);
  const std::size_t m = copies.size();
  for (std::size_t i = 0; i < length; ++i) {
    std::size_t ones = 0;
    for (const auto& copy : copies) ones += copy.bits[i];
    std::size_t zeros = m - ones;
    result.recovered_bits[i] = ones > zeros ? 1 : 0;
    result.disagreement_counts[i] =
        static_cast<std::uint32_t>(ones < zeros ? ones : zeros);
    if (ones != 0 && zeros != 0) result.suspected_indices.push_back(i);
  }
  return result;
}

ObservedMessage noise_attack(const ObservedMessage& message, double flip_rate,
                             RandomSource& rng) {
  if (!(flip_rate >= 0.0 && flip_rate <= 1.0)) {
    throw Error(ErrorCode::InvalidProbability, "flip rate must lie in [0, 1]");
  }
  ObservedMessage out = message;
  for (auto& bit : out.bits) {
    if (rng.next_uniform() < flip_rate) bit ^= 1u;
  }
  return out;
}

ObservedMessage shift_attack(const ObservedMessage& message, std::size_t offset,
                             std::uint8_t pad_bit) {
  if (pad_bit > 1) throw std::invalid_argument("pad bit must be 0 or 1");
  if (offset == 0 || offset >= message.size()) {
    throw Error(ErrorCode::OffsetTooLarge,
                "offset must lie in [1, " + std::to_string(message.size()) +
                    "), got " + std::to_string(offset));
  }
  ObservedMessage out{BitVector(message.size(), pad_bit),
                      message.observation_basis};
  std::copy(message.bits.begin(), message.bits.end() - static_cast<std::ptrdiff_t>(offset),
            out.bits.begin() + static_cast<std::ptrdiff_t>(offset));
  return out;
}

AttackOutcome run_attack_report(const ObservedMessage& reference,
                                const ObservedMessage& suspect,
                                const AttackFn& attack,
                                const WatermarkSecret& secret,
                                const stats::DecisionRule& rule) {
  AttackOutcome outcome{attack(suspect), {}, {}};
  outcome.verification_before = verify(suspect, reference, secret, rule);
  outcome.verification_after = verify(outcome.attacked, reference, secret, rule);
  return outcome;
}

}  // namespace qumark::attacks
