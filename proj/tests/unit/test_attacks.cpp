#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "scenarios.hpp"
#include "qumark/attacks.hpp"
#include "qumark/error.hpp"

using namespace qumark;
using namespace qumark::attacks;
using qumark::stats::Decision;
using qumark::stats::DecisionRule;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected qumark::Error");
  return ErrorCode::MalformedFile;
}

std::vector<ObservedMessage> copies_of(const testing::Scenario& s, std::size_t m,
                                       std::uint64_t seed) {
  std::vector<ObservedMessage> out;
  for (std::size_t c = 0; c < m; ++c) out.push_back(testing::genuine_observation(s, derive_seed(seed, c)));
  return out;
}

}  // namespace

TEST_CASE("averaging finds marked positions at rate 1 - 2^(1-m)") {
  auto s = testing::make_scenario(testing::random_bits(20000, 1), {}, 4000, 45.0, 1);
  for (std::size_t m : {2u, 5u, 10u, 20u}) {
    auto result = averaging_attack(copies_of(s, m, m));
    std::vector<bool> in_i(20000, false);
    for (auto i : s.secret.indices()) in_i[i] = true;
    std::size_t found = 0;
    for (auto i : result.suspected_indices) {
      REQUIRE(in_i[i]);
      ++found;
    }
    double expected = 1.0 - std::pow(2.0, 1.0 - double(m));
    double sigma = std::sqrt(expected * (1 - expected) / 4000.0);
    CAPTURE(m);
    CHECK(std::abs(found / 4000.0 - expected) <= 4 * sigma + 1e-12);
    REQUIRE(result.disagreement_counts.size() == 20000);
    for (auto i : result.suspected_indices) {
      REQUIRE(result.disagreement_counts[i] >= 1);
      REQUIRE(result.disagreement_counts[i] <= m / 2);
    }
  }
}

TEST_CASE("averaging identical copies finds nothing") {
  ObservedMessage a{testing::random_bits(100, 2), Basis(0.0)};
  std::vector<ObservedMessage> copies{a, a, a};
  auto r = averaging_attack(copies);
  CHECK(r.suspected_indices.empty());
  CHECK(r.recovered_bits == a.bits);
}

TEST_CASE("averaging majority vote with ties to zero") {
  std::vector<ObservedMessage> copies{{parse_bits("0011"), Basis(0.0)},
                                      {parse_bits("0101"), Basis(0.0)}};
  auto r = averaging_attack(copies);
  CHECK(format_bits(r.recovered_bits) == "0001");
  CHECK(r.suspected_indices == std::vector<std::size_t>{1, 2});
  CHECK(r.disagreement_counts == std::vector<std::uint32_t>{0, 1, 1, 0});

  copies.push_back({parse_bits("0111"), Basis(0.0)});
  r = averaging_attack(copies);
  CHECK(format_bits(r.recovered_bits) == "0111");
  CHECK(r.disagreement_counts == std::vector<std::uint32_t>{0, 1, 1, 0});
}

TEST_CASE("averaging preconditions") {
  ObservedMessage a{parse_bits("01"), Basis(0.0)};
  CHECK(code_of([&] { averaging_attack(std::vector<ObservedMessage>{a}); }) == ErrorCode::TooFewCopies);
  CHECK(code_of([&] {
          averaging_attack(std::vector<ObservedMessage>{a, {parse_bits("011"), Basis(0.0)}});
        }) == ErrorCode::LengthMismatch);
  CHECK(code_of([&] {
          averaging_attack(std::vector<ObservedMessage>{a, {parse_bits("01"), Basis(45.0)}});
        }) == ErrorCode::BasisMismatch);
}

TEST_CASE("noise flips at the requested rate") {
  ObservedMessage m{BitVector(100000, 0), Basis(0.0)};
  RandomSource rng(4);
  auto noisy = noise_attack(m, 0.1, rng);
  double f = hamming_distance(noisy.bits, m.bits) / 100000.0;
  CHECK(std::abs(f - 0.1) <= 4 * std::sqrt(0.09 / 100000));
  CHECK(noise_attack(m, 0.0, rng).bits == m.bits);
  CHECK(hamming_distance(noise_attack(m, 1.0, rng).bits, m.bits) == 100000);
  CHECK(code_of([&] { noise_attack(m, -0.1, rng); }) == ErrorCode::InvalidProbability);
  CHECK(code_of([&] { noise_attack(m, 1.1, rng); }) == ErrorCode::InvalidProbability);
}

TEST_CASE("noise composes with the watermark flip rate") {
  auto s = testing::make_scenario(testing::random_bits(20000, 5), {}, 10000, 30.0, 5);
  auto ref = s.reference();
  for (double q : {0.05, 0.2}) {
    RandomSource rng(derive_seed(6, static_cast<std::uint64_t>(q * 100)));
    auto noisy = noise_attack(testing::genuine_observation(s, 6), q, rng);
    double pe = s.expected_pe();
    double expected = pe * (1 - q) + (1 - pe) * q;
    double f = testing::errors_at(noisy, ref, s.secret.indices()) / 10000.0;
    CAPTURE(q);
    CHECK(std::abs(f - expected) <= 4 * std::sqrt(expected * (1 - expected) / 10000));
  }
}

TEST_CASE("shift attack") {
  ObservedMessage m{parse_bits("1011"), Basis(0.0)};
  CHECK(format_bits(shift_attack(m, 1, 0).bits) == "0101");
  CHECK(format_bits(shift_attack(m, 2, 1).bits) == "1110");
  CHECK(shift_attack(m, 1, 0).observation_basis == m.observation_basis);
  CHECK(code_of([&] { shift_attack(m, 0, 0); }) == ErrorCode::OffsetTooLarge);
  CHECK(code_of([&] { shift_attack(m, 4, 0); }) == ErrorCode::OffsetTooLarge);
  CHECK_THROWS_AS(shift_attack(m, 1, 2), std::invalid_argument);

  RandomSource rng(7);
  for (int t = 0; t < 100; ++t) {
    std::size_t len = 2 + rng.next_u64() % 200;
    std::size_t offset = 1 + rng.next_u64() % (len - 1);
    ObservedMessage x{testing::random_bits(len, rng.next_u64()), Basis(0.0)};
    auto y = shift_attack(x, offset, 0);
    REQUIRE(y.bits.size() == len);
    for (std::size_t i = offset; i < len; ++i) REQUIRE(y.bits[i] == x.bits[i - offset]);
    for (std::size_t i = 0; i < offset; ++i) REQUIRE(y.bits[i] == 0);
  }
}

TEST_CASE("run_attack_report verifies before and after") {
  auto s = testing::make_scenario(testing::random_bits(4096, 8), {}, 1024, 45.0, 8);
  auto ref = s.reference();
  auto suspect = testing::genuine_observation(s, 8);
  auto rule = DecisionRule::wilson_interval(0.99);

  auto identity = run_attack_report(ref, suspect, [](const ObservedMessage& m) { return m; },
                                    s.secret, rule);
  CHECK(identity.attacked.bits == suspect.bits);
  CHECK(identity.verification_before.error_count == identity.verification_after.error_count);

  // Restoring the reference removes every flip.
  auto restore = run_attack_report(ref, suspect, [&](const ObservedMessage&) { return ref; },
                                   s.secret, rule);
  CHECK(restore.verification_after.error_count == 0);
  CHECK(restore.verification_after.decision == Decision::Reject);
}

// On a random payload at p_e = 0.5 neither the shift nor averaging moves the
// mismatch frequency away from 0.5, so the copy still verifies. The attacks
// only dislodge the mark on structured carriers such as scanned pages.
TEST_CASE("random payloads keep verifying after shift and averaging") {
  auto s = testing::make_scenario(testing::random_bits(20000, 9), {}, 10000, 45.0, 9);
  auto ref = s.reference();
  auto rule = DecisionRule::wilson_interval(0.99);
  int shift_accepts = 0, average_accepts = 0;
  for (std::uint64_t t = 0; t < 50; ++t) {
    auto copies = copies_of(s, 3, 100 + t);
    auto shifted = shift_attack(copies[0], 1, 0);
    shift_accepts += verify(shifted, ref, s.secret, rule).decision == Decision::Accept;
    ObservedMessage averaged{averaging_attack(copies).recovered_bits, s.writing};
    average_accepts += verify(averaged, ref, s.secret, rule).decision == Decision::Accept;
  }
  CHECK(shift_accepts >= 45);
  CHECK(average_accepts >= 45);
}

TEST_CASE("document pages reject shifted and averaged copies") {
  auto s = testing::document_scenario(4096, 45.0, 10);
  auto ref = s.reference();
  auto rule = DecisionRule::wilson_interval(0.99);
  for (std::uint64_t t = 0; t < 10; ++t) {
    auto copies = copies_of(s, 2, 200 + t);
    CHECK(verify(shift_attack(copies[0], 1, 0), ref, s.secret, rule).decision == Decision::Reject);
    ObservedMessage averaged{averaging_attack(copies).recovered_bits, s.writing};
    CHECK(verify(averaged, ref, s.secret, rule).decision == Decision::Reject);
  }
}
