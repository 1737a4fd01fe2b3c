#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "qumark/random.hpp"
#include "qumark/stats.hpp"
#include "qumark/watermark.hpp"

namespace qumark::attacks {

struct AveragingResult {
  BitVector recovered_bits;
  std::vector<std::size_t> suspected_indices;
  std::vector<std::uint32_t> disagreement_counts;
};

struct AttackOutcome {
  ObservedMessage attacked;
  VerificationReport verification_before;
  VerificationReport verification_after;
};

/// Collusion over released copies. A position is suspected when any two
/// copies disagree there; disagreement_counts has one entry per position,
/// the number of copies in the minority. The recovered value is the
/// per-position majority, with ties going to 0.
AveragingResult averaging_attack(std::span<const ObservedMessage> copies);

/// Flips every bit independently with probability `flip_rate`, one draw per
/// bit in index order.
ObservedMessage noise_attack(const ObservedMessage& message, double flip_rate,
                             RandomSource& rng);

/// Moves every bit up by `offset`, fills the first `offset` positions with
/// `pad_bit` and drops the overflow so the length is unchanged.
ObservedMessage shift_attack(const ObservedMessage& message, std::size_t offset,
                             std::uint8_t pad_bit);

using AttackFn = std::function<ObservedMessage(const ObservedMessage&)>;

/// Verifies `suspect` before and after `attack` against the same reference,
/// secret and rule.
AttackOutcome run_attack_report(const ObservedMessage& reference,
                                const ObservedMessage& suspect,
                                const AttackFn& attack,
                                const WatermarkSecret& secret,
                                const stats::DecisionRule& rule);

}  // namespace qumark::attacks
