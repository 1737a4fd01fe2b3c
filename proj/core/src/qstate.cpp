#include "qumark/qstate.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qumark {
namespace {

double reduce(double degrees, double period) {
  double r = std::fmod(degrees, period);
  if (r < 0.0) r += period;
  // fmod of a tiny negative angle can round up to exactly `period`.
  if (r >= period - kAngleTolerance) r = 0.0;
  return r;
}

double require_finite(double degrees, const char* what) {
  if (!std::isfinite(degrees)) {
    throw std::invalid_argument(std::string(what) + ": angle must be finite");
  }
  return degrees;
}

void require_bit(std::uint8_t bit) {
  if (bit > 1) throw std::invalid_argument("bit must be 0 or 1");
}

}  // namespace

Basis::Basis(double theta_degrees)
    : theta_(reduce(require_finite(theta_degrees, "Basis"), 90.0)) {}

bool Basis::dissimilar_to(const Basis& other) const noexcept {
  double d = std::fabs(theta_ - other.theta_);
  return std::fmin(d, 90.0 - d) > kAngleTolerance;
}

RebitState::RebitState(double phi_degrees)
    : phi_(reduce(require_finite(phi_degrees, "RebitState"), 180.0)) {}

double RebitState::amplitude(double theta_degrees) const noexcept {
  return std::cos((phi_ - theta_degrees) * std::numbers::pi / 180.0);
}

bool operator==(const RebitState& a, const RebitState& b) noexcept {
  double d = std::fabs(a.phi_ - b.phi_);
  return std::fmin(d, 180.0 - d) <= kAngleTolerance;
}

namespace {

// Squared cosine (or sine) of an angle in degrees. Depends only on |degrees|
// mod 180 folded into [0, 90]; fabs, fmod and the fold are all exact, so
// the result is an exactly even function of its argument.
double squared_projection(double degrees, bool sine) noexcept {
  double r = std::fmod(std::fabs(degrees), 180.0);
  if (r > 90.0) r = 180.0 - r;
  double steps = std::round(r / 15.0);
  if (std::fabs(r - steps * 15.0) <= kAngleTolerance) {
    // cos^2 at 0, 15, ..., 90 degrees; the dyadic ones are exact.
    static constexpr double kCos2[] = {1.0, -1.0, 0.75, 0.5, 0.25, -1.0, 0.0};
    double c2 = kCos2[static_cast<int>(steps)];
    if (c2 >= 0.0) return sine ? 1.0 - c2 : c2;
  }
  double c = std::cos(2.0 * r * std::numbers::pi / 180.0);
  return sine ? 0.5 * (1.0 - c) : 0.5 * (1.0 + c);
}

}  // namespace

double cos_squared_degrees(double degrees) noexcept {
  return squared_projection(degrees, false);
}

double sin_squared_degrees(double degrees) noexcept {
  return squared_projection(degrees, true);
}

RebitState encode_bit(std::uint8_t bit, const Basis& basis) {
  require_bit(bit);
  return RebitState(basis.theta() + 90.0 * bit);
}

double outcome_probability(const RebitState& state, const Basis& basis,
                           std::uint8_t bit) {
  require_bit(bit);
  double delta = state.phi() - basis.theta();
  return bit == 0 ? cos_squared_degrees(delta) : sin_squared_degrees(delta);
}

std::uint8_t measure(const RebitState& state, const Basis& basis,
                     RandomSource& rng) {
  double draw = rng.next_uniform();
  return draw < outcome_probability(state, basis, 0) ? 0 : 1;
}

double expected_error_probability(const Basis& writing, const Basis& reading) {
  return sin_squared_degrees(writing.theta() - reading.theta());
}

}  // namespace qumark
