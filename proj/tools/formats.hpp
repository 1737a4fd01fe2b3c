#pragma once

// Versioned JSON file formats exchanged between qumark subcommands.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qumark/qstate.hpp"
#include "qumark/watermark.hpp"

namespace qumark::formats {

inline constexpr int kFormatVersion = 1;

/// Fixed-point rendering with six decimals ("45.000000").
std::string format_angle(double degrees);
/// Accepts only the canonical form produced by format_angle.
double parse_angle(std::string_view text);

struct SecretFile {
  std::size_t message_length = 0;
  std::vector<std::size_t> indices;
  double mark_basis_theta = 45.0;
  double writing_basis_theta = 0.0;
  double expected_pe = 0.5;
  std::optional<std::vector<std::uint8_t>> key;

  WatermarkSecret to_secret() const;
  static SecretFile from_secret(const WatermarkSecret& secret,
                                std::size_t message_length,
                                const Basis& writing_basis);
};

struct QuantumMessageFile {
  double writing_basis_theta = 0.0;
  std::vector<double> states;

  QuantumMessage to_message() const;
  static QuantumMessageFile from_message(const QuantumMessage& message);
};

struct ObservationFile {
  double observation_basis_theta = 0.0;
  BitVector bits;

  ObservedMessage to_observation() const;
  static ObservationFile from_observation(const ObservedMessage& observed);
};

// Encoders produce pretty-printed JSON ending in a newline; decoders throw
// Error(MalformedFile) or Error(VersionMismatch).
std::string encode(const SecretFile& file);
std::string encode(const QuantumMessageFile& file);
std::string encode(const ObservationFile& file);

SecretFile decode_secret(std::string_view text);
QuantumMessageFile decode_message(std::string_view text);
ObservationFile decode_observation(std::string_view text);

std::string base64_encode(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> base64_decode(std::string_view text);

}  // namespace qumark::formats
