#include "qumark/watermark.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qumark/error.hpp"

namespace qumark {
namespace {

void require_indices_in_range(std::span<const std::size_t> indices,
                              std::size_t length) {
  if (!indices.empty() && indices.back() >= length) {
    throw Error(ErrorCode::IndexOutOfRange,
                "index " + std::to_string(indices.back()) +
                    " out of range for length " + std::to_string(length));
  }
}

void require_sorted_unique(std::span<const std::size_t> indices) {
  for (std::size_t i = 1; i < indices.size(); ++i) {
    if (indices[i] <= indices[i - 1]) {
      throw Error(ErrorCode::InvalidSecret,
                  "indices must be strictly increasing");
    }
  }
}

}  // namespace

QuantumMessage::QuantumMessage(std::vector<RebitState> states,
                               Basis writing_basis)
    : states_(std::move(states)), writing_basis_(writing_basis) {
  if (states_.empty()) {
    throw Error(ErrorCode::EmptyMessage, "a message needs at least one qubit");
  }
}

WatermarkSecret::WatermarkSecret(std::vector<std::size_t> indices,
                                 Basis mark_basis,
                                 std::optional<std::vector<std::uint8_t>> key)
    : indices_(std::move(indices)), mark_basis_(mark_basis), key_(std::move(key)) {
  if (indices_.empty()) {
    throw Error(ErrorCode::InvalidSecret, "the index set must not be empty");
  }
  require_sorted_unique(indices_);
}

QuantumMessage build_message(std::span<const std::uint8_t> bits,
                             const Basis& basis) {
  if (bits.empty()) {
    throw Error(ErrorCode::EmptyMessage, "cannot build a message from no bits");
  }
  std::vector<RebitState> states;
  states.reserve(bits.size());
  for (auto bit : bits) states.push_back(encode_bit(bit, basis));
  return QuantumMessage(std::move(states), basis);
}

std::vector<std::string> embed_warnings(const QuantumMessage& message,
                                        const WatermarkSecret& secret) {
  std::vector<std::string> warnings;
  if (secret.size() < kWarnSampleSize) {
    warnings.push_back("watermark uses only " + std::to_string(secret.size()) +
                       " positions (fewer than " +
                       std::to_string(kWarnSampleSize) +
                       "); verification will be unreliable");
  }
  double pe = expected_error_probability(secret.mark_basis(),
                                         message.writing_basis());
  if (pe < kWarnErrorProbability) {
    warnings.push_back("expected error probability " + std::to_string(pe) +
                       " is below " + std::to_string(kWarnErrorProbability) +
                       "; the mark is hard to tell from an unmarked copy");
  }
  return warnings;
}

QuantumMessage embed(const QuantumMessage& message,
                     const WatermarkSecret& secret, RandomSource& rng,
                     const EmbedOptions& options) {
  require_indices_in_range(secret.indices(), message.size());
  const Basis& writing = message.writing_basis();
  if (!secret.mark_basis().dissimilar_to(writing)) {
    throw Error(ErrorCode::BasisNotDissimilar,
                "mark basis must differ from the writing basis");
  }
  // The literal minimum size is always 1, which any nonempty secret meets;
  // strict mode enforces the power-based bound instead.
  if (options.strict) {
    double pe = expected_error_probability(secret.mark_basis(), writing);
    std::uint64_t needed = 0;
    try {
      needed = stats::recommended_sample_size(pe, 0.0, options.confidence,
                                              options.power);
    } catch (const Error& e) {
      throw Error(ErrorCode::SampleTooSmall,
                  std::string("no usable sample size: ") + e.what());
    }
    if (secret.size() < needed) {
      throw Error(ErrorCode::SampleTooSmall,
                  "watermark uses " + std::to_string(secret.size()) +
                      " positions but at least " + std::to_string(needed) +
                      " are needed");
    }
  }

  std::vector<RebitState> states(message.states().begin(),
                                 message.states().end());
  for (std::size_t i : secret.indices()) {
    std::uint8_t value = measure(states[i], writing, rng);
    states[i] = encode_bit(value, secret.mark_basis());
  }
  return QuantumMessage(std::move(states), writing);
}

ObservedMessage observe(const QuantumMessage& message, const Basis& basis,
                        RandomSource& rng) {
  ObservedMessage out{BitVector(message.size()), basis};
  auto states = message.states();
  for (std::size_t i = 0; i < states.size(); ++i) {
    out.bits[i] = measure(states[i], basis, rng);
  }
  return out;
}

VerificationReport verify(const ObservedMessage& suspect,
                          const ObservedMessage& reference,
                          const WatermarkSecret& secret,
                          const stats::DecisionRule& rule) {
  if (suspect.size() != reference.size()) {
    throw Error(ErrorCode::LengthMismatch,
                "suspect has " + std::to_string(suspect.size()) +
                    " bits, reference has " + std::to_string(reference.size()));
  }
  if (suspect.observation_basis.dissimilar_to(reference.observation_basis)) {
    throw Error(ErrorCode::BasisMismatch,
                "suspect and reference were observed in different bases");
  }
  require_indices_in_range(secret.indices(), reference.size());

  VerificationReport report;
  for (std::size_t i : secret.indices()) {
    report.error_count += (suspect.bits[i] != reference.bits[i]);
  }
  report.sample_size = secret.size();
  report.expected_pe = expected_error_probability(secret.mark_basis(),
                                                  reference.observation_basis);
  report.decision_detail = stats::decide(report.error_count, report.sample_size,
                                         report.expected_pe, rule);
  report.observed_frequency = report.decision_detail.statistic;
  report.decision = report.decision_detail.decision;
  report.rule = rule;
  return report;
}

BitVector classical_flip_embed(std::span<const std::uint8_t> bits,
                               std::span<const std::size_t> indices, double pe,
                               RandomSource& rng) {
  if (!(pe >= 0.0 && pe <= 1.0)) {
    throw Error(ErrorCode::InvalidProbability, "pe must lie in [0, 1]");
  }
  for (std::size_t i : indices) {
    if (i >= bits.size()) {
      throw Error(ErrorCode::IndexOutOfRange,
                  "index " + std::to_string(i) + " out of range for length " +
                      std::to_string(bits.size()));
    }
  }
  BitVector out(bits.begin(), bits.end());
  for (std::size_t i : indices) {
    if (rng.next_uniform() < pe) out[i] ^= 1u;
  }
  return out;
}

}  // namespace qumark
