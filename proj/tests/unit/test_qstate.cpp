#include <cmath>
#include <limits>
#include <stdexcept>

#include "doctest.h"
#include "qumark/qstate.hpp"
#include "qumark/random.hpp"

using namespace qumark;

TEST_CASE("basis angles are reduced into [0, 90)") {
  CHECK(Basis(0.0).theta() == 0.0);
  CHECK(Basis(90.0).theta() == 0.0);
  CHECK(Basis(135.0).theta() == 45.0);
  CHECK(Basis(-10.0).theta() == doctest::Approx(80.0));
  CHECK(Basis(-1e-12).theta() == 0.0);
  CHECK_THROWS_AS(Basis(std::numeric_limits<double>::quiet_NaN()), std::invalid_argument);
  CHECK_THROWS_AS(Basis(std::numeric_limits<double>::infinity()), std::invalid_argument);
}

TEST_CASE("basis dissimilarity uses the angle tolerance") {
  CHECK(Basis(0.0).dissimilar_to(Basis(45.0)));
  CHECK_FALSE(Basis(0.0).dissimilar_to(Basis(90.0)));
  CHECK_FALSE(Basis(10.0).dissimilar_to(Basis(10.0 + 1e-10)));
  CHECK_FALSE(Basis(0.0).dissimilar_to(Basis(89.9999999999)));
  CHECK(Basis(0.0) == Basis(180.0));
}

TEST_CASE("rebit states are reduced into [0, 180)") {
  CHECK(RebitState(180.0).phi() == 0.0);
  CHECK(RebitState(225.0).phi() == 45.0);
  CHECK(RebitState(-45.0).phi() == 135.0);
  CHECK(RebitState(0.0) == RebitState(179.99999999999));
}

TEST_CASE("encode_bit produces basis eigenstates") {
  CHECK(encode_bit(0, Basis(0.0)).phi() == 0.0);
  CHECK(encode_bit(1, Basis(0.0)).phi() == 90.0);
  CHECK(encode_bit(0, Basis(45.0)).phi() == 45.0);
  CHECK(encode_bit(1, Basis(45.0)).phi() == 135.0);
  CHECK_THROWS_AS(encode_bit(2, Basis(0.0)), std::invalid_argument);
}

TEST_CASE("outcome_probability follows the Born rule") {
  CHECK(outcome_probability(RebitState(45.0), Basis(0.0), 0) == 0.5);
  CHECK(outcome_probability(RebitState(0.0), Basis(0.0), 0) == 1.0);
  CHECK(outcome_probability(RebitState(30.0), Basis(0.0), 1) == 0.25);
  CHECK(outcome_probability(RebitState(30.0), Basis(0.0), 0) == 0.75);
  // Amplitudes from the 45-degree example: sqrt(0.5) on both 0 and 90.
  RebitState s(45.0);
  CHECK(s.amplitude(0.0) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  CHECK(s.amplitude(90.0) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  // Off the exact grid the value still matches cos^2.
  double expect = std::pow(std::cos(17.3 * M_PI / 180.0), 2);
  CHECK(outcome_probability(RebitState(17.3), Basis(0.0), 0) == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("outcome probabilities are normalised for every state and basis") {
  RandomSource rng(11);
  for (int i = 0; i < 10000; ++i) {
    RebitState s(rng.next_uniform() * 180.0);
    Basis b(rng.next_uniform() * 90.0);
    double sum = outcome_probability(s, b, 0) + outcome_probability(s, b, 1);
    REQUIRE(std::fabs(sum - 1.0) <= 1e-12);
    double amp = s.amplitude(b.theta());
    double amp_perp = s.amplitude(b.theta() + 90.0);
    REQUIRE(std::fabs(amp * amp + amp_perp * amp_perp - 1.0) <= 1e-12);
  }
}

TEST_CASE("measuring an eigenstate in its own basis is deterministic") {
  RandomSource rng(3);
  for (double theta : {0.0, 12.5, 30.0, 45.0, 89.0}) {
    Basis b(theta);
    for (std::uint8_t v : {0, 1}) {
      for (int t = 0; t < 1000; ++t) REQUIRE(measure(encode_bit(v, b), b, rng) == v);
    }
  }
  CHECK(measure(RebitState(0.0), Basis(0.0), rng) == 0);
  CHECK(measure(RebitState(90.0), Basis(0.0), rng) == 1);
}

TEST_CASE("measure consumes exactly one draw") {
  RandomSource a(5), b(5);
  (void)measure(RebitState(0.0), Basis(0.0), a);
  (void)b.next_uniform();
  CHECK(a.next_uniform() == b.next_uniform());
}

TEST_CASE("measurement frequency at 45 degrees matches 0.5") {
  RandomSource rng(2024);
  const int n = 100000;
  int ones = 0;
  for (int i = 0; i < n; ++i) ones += measure(RebitState(45.0), Basis(0.0), rng);
  CHECK(std::fabs(ones / double(n) - 0.5) <= 0.005);
}

TEST_CASE("Born-rule frequency stays within 4 sigma across seeds") {
  const int n = 100000;
  const int seeds = 50;
  RandomSource angles(99);
  int within = 0;
  for (int s = 0; s < seeds; ++s) {
    RebitState state(angles.next_uniform() * 180.0);
    Basis basis(angles.next_uniform() * 90.0);
    double p = outcome_probability(state, basis, 1);
    RandomSource rng(derive_seed(77, s));
    int ones = 0;
    for (int i = 0; i < n; ++i) ones += measure(state, basis, rng);
    double tol = 4.0 * std::sqrt(p * (1.0 - p) / n);
    within += std::fabs(ones / double(n) - p) <= tol + 1e-12;
  }
  CHECK(within >= 0.99 * seeds);
}

TEST_CASE("expected_error_probability") {
  CHECK(expected_error_probability(Basis(45.0), Basis(0.0)) == 0.5);
  CHECK(expected_error_probability(Basis(30.0), Basis(0.0)) == 0.25);
  CHECK(expected_error_probability(Basis(60.0), Basis(0.0)) == 0.75);
  for (double j : {0.0, 17.0, 45.0, 89.5}) {
    CHECK(expected_error_probability(Basis(j), Basis(j)) == 0.0);
  }
}

TEST_CASE("expected_error_probability is symmetric and equals the flip probability") {
  RandomSource rng(8);
  for (int i = 0; i < 10000; ++i) {
    Basis a(rng.next_uniform() * 90.0);
    Basis b(rng.next_uniform() * 90.0);
    double ab = expected_error_probability(a, b);
    REQUIRE(ab == expected_error_probability(b, a));
    REQUIRE(ab == outcome_probability(encode_bit(0, a), b, 1));
  }
}

TEST_CASE("flip frequency over encode/measure matches p_e at 30 degrees") {
  RandomSource rng(31);
  Basis writing(30.0), reading(0.0);
  const int n = 100000;
  int flips = 0;
  for (int i = 0; i < n; ++i) {
    std::uint8_t v = static_cast<std::uint8_t>(i & 1);
    flips += measure(encode_bit(v, writing), reading, rng) != v;
  }
  CHECK(std::fabs(flips / double(n) - 0.25) <= 0.005);
}

TEST_CASE("random sources with equal seeds produce equal streams") {
  RandomSource a(123), b(123), c(124);
  bool differs = false;
  for (int i = 0; i < 1000; ++i) {
    double x = a.next_uniform();
    REQUIRE(x == b.next_uniform());
    REQUIRE(x >= 0.0);
    REQUIRE(x < 1.0);
    differs |= x != c.next_uniform();
  }
  CHECK(differs);
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) == derive_seed(1, 0));
}
