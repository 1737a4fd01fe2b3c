#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qumark/bits.hpp"
#include "qumark/qstate.hpp"
#include "qumark/random.hpp"
#include "qumark/stats.hpp"

namespace qumark {

/// Qubits written in `writing_basis`; watermarked positions are eigenstates
/// of the mark basis instead.
class QuantumMessage {
 public:
  /// Throws Error(EmptyMessage) when `states` is empty.
  QuantumMessage(std::vector<RebitState> states, Basis writing_basis);

  std::span<const RebitState> states() const noexcept { return states_; }
  const Basis& writing_basis() const noexcept { return writing_basis_; }
  std::size_t size() const noexcept { return states_.size(); }

  friend bool operator==(const QuantumMessage&, const QuantumMessage&) = default;

 private:
  std::vector<RebitState> states_;
  Basis writing_basis_;
};

/// The watermark secret: positions I, mark basis k, and optionally the key
/// the positions were derived from.
class WatermarkSecret {
 public:
  /// `indices` must be nonempty and strictly increasing.
  WatermarkSecret(std::vector<std::size_t> indices, Basis mark_basis,
                  std::optional<std::vector<std::uint8_t>> key = std::nullopt);

  std::span<const std::size_t> indices() const noexcept { return indices_; }
  const Basis& mark_basis() const noexcept { return mark_basis_; }
  const std::optional<std::vector<std::uint8_t>>& key() const noexcept {
    return key_;
  }
  std::size_t size() const noexcept { return indices_.size(); }

  friend bool operator==(const WatermarkSecret&,
                         const WatermarkSecret&) = default;

 private:
  std::vector<std::size_t> indices_;
  Basis mark_basis_;
  std::optional<std::vector<std::uint8_t>> key_;
};

/// A classical bitstring obtained by measuring every qubit of a message in
/// one basis.
struct ObservedMessage {
  BitVector bits;
  Basis observation_basis{0.0};

  std::size_t size() const noexcept { return bits.size(); }
  friend bool operator==(const ObservedMessage&,
                         const ObservedMessage&) = default;
};

struct VerificationReport {
  std::uint64_t error_count = 0;
  std::uint64_t sample_size = 0;
  double observed_frequency = 0.0;
  double expected_pe = 0.0;
  stats::Decision decision = stats::Decision::Reject;
  stats::DecisionOutcome decision_detail;
  stats::DecisionRule rule = stats::DecisionRule::wilson_interval(0.99);
};

struct EmbedOptions {
  /// Reject secrets smaller than the statistically recommended |I| instead
  /// of warning.
  bool strict = false;
  /// Confidence and power used for the strict size bound.
  double confidence = 0.99;
  double power = 0.99;
};

/// Below this |I| a non-strict embed emits a warning.
inline constexpr std::size_t kWarnSampleSize = 64;
/// Below this p_e the mark is practically indistinguishable from no mark.
inline constexpr double kWarnErrorProbability = 0.05;

QuantumMessage build_message(std::span<const std::uint8_t> bits,
                             const Basis& basis);

/// Observes each qubit at I in the writing basis and re-encodes the
/// outcome in the mark basis. One rng draw per watermark index, in
/// increasing index order. The input is not modified.
QuantumMessage embed(const QuantumMessage& message,
                     const WatermarkSecret& secret, RandomSource& rng,
                     const EmbedOptions& options = {});

/// Non-fatal problems with a secret for this message (small |I|, tiny p_e).
std::vector<std::string> embed_warnings(const QuantumMessage& message,
                                        const WatermarkSecret& secret);

/// Measures every qubit in `basis`, one draw per qubit in index order.
ObservedMessage observe(const QuantumMessage& message, const Basis& basis,
                        RandomSource& rng);

VerificationReport verify(const ObservedMessage& suspect,
                          const ObservedMessage& reference,
                          const WatermarkSecret& secret,
                          const stats::DecisionRule& rule);

/// Classical counterpart: flips each indexed bit independently with
/// probability `pe`, one rng draw per index.
BitVector classical_flip_embed(std::span<const std::uint8_t> bits,
                               std::span<const std::size_t> indices, double pe,
                               RandomSource& rng);

}  // namespace qumark
