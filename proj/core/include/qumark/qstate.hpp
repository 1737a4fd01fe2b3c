#pragma once

#include <cstdint>

#include "qumark/random.hpp"

namespace qumark {

/// Angle tolerance for comparing bases and states, in degrees.
inline constexpr double kAngleTolerance = 1e-9;

/// Orthonormal measurement basis {|theta>, |theta + 90>}, theta in [0, 90).
class Basis {
 public:
  /// Reduces `theta_degrees` mod 90. Throws std::invalid_argument if the
  /// angle is not finite.
  explicit Basis(double theta_degrees);

  double theta() const noexcept { return theta_; }

  /// True when the two bases differ by more than kAngleTolerance (mod 90).
  bool dissimilar_to(const Basis& other) const noexcept;

  friend bool operator==(const Basis& a, const Basis& b) noexcept {
    return !a.dissimilar_to(b);
  }

 private:
  double theta_;
};

/// Pure real-amplitude qubit |phi>, phi in [0, 180). Its amplitude on a
/// basis vector |theta> is cos(phi - theta).
class RebitState {
 public:
  explicit RebitState(double phi_degrees);

  double phi() const noexcept { return phi_; }

  double amplitude(double theta_degrees) const noexcept;

  friend bool operator==(const RebitState& a, const RebitState& b) noexcept;

 private:
  double phi_;
};

/// cos^2 and sin^2 of an angle in degrees. Both are exactly even functions,
/// and at multiples of 15 degrees where the value is dyadic (0, 1/4, 1/2,
/// 3/4, 1) the result is exact.
double cos_squared_degrees(double degrees) noexcept;
double sin_squared_degrees(double degrees) noexcept;

/// Eigenstate |theta + bit * 90> of `basis`.
RebitState encode_bit(std::uint8_t bit, const Basis& basis);

/// Born rule: probability that measuring `state` in `basis` yields `bit`.
double outcome_probability(const RebitState& state, const Basis& basis,
                           std::uint8_t bit);

/// Draws exactly one value from `rng`; returns 0 iff the draw is below
/// outcome_probability(state, basis, 0).
std::uint8_t measure(const RebitState& state, const Basis& basis,
                     RandomSource& rng);

/// sin^2(writing - reading): chance that a bit written in one basis reads
/// flipped in the other.
double expected_error_probability(const Basis& writing, const Basis& reading);

}  // namespace qumark
