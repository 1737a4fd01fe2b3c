#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace qumark::stats {

enum class RuleKind { FixedTolerance, WilsonInterval, ExactBinomial };

/// How "very nearly p_e" is turned into an accept/reject verdict.
class DecisionRule {
 public:
  /// Accept iff |frequency - p_e| <= tolerance, tolerance in (0, 1).
  static DecisionRule fixed_tolerance(double tolerance);
  /// Accept iff p_e lies in the Wilson score interval at `confidence`.
  static DecisionRule wilson_interval(double confidence);
  /// Accept iff the two-sided exact binomial p-value of H0: p = p_e is at
  /// least 1 - confidence.
  static DecisionRule exact_binomial(double confidence);

  /// Parses "fixed:EPS", "wilson:CONF" or "binom:CONF".
  static DecisionRule parse(const std::string& text);

  RuleKind kind() const noexcept { return kind_; }
  /// Only meaningful for FixedTolerance.
  double tolerance() const noexcept { return parameter_; }
  /// Only meaningful for the interval and exact kinds.
  double confidence() const noexcept { return parameter_; }

  std::string to_string() const;

 private:
  DecisionRule(RuleKind kind, double parameter)
      : kind_(kind), parameter_(parameter) {}

  RuleKind kind_;
  double parameter_;
};

enum class Decision { Accept, Reject };

std::string to_string(Decision decision);

struct DecisionOutcome {
  Decision decision = Decision::Reject;
  double statistic = 0.0;   // observed frequency
  double bound_low = 0.0;   // interval, tolerance band, or exact acceptance band
  double bound_high = 0.0;
  std::optional<double> p_value;  // ExactBinomial only
};

struct SampleSizeSpec {
  std::uint64_t a = 0;  // error count
  std::uint64_t b = 0;  // non-error count
  std::uint64_t n = 0;  // a + b
};

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

/// Largest sample size handled by recommended_sample_size.
inline constexpr std::uint64_t kMaxRecommendedSampleSize = 100000;

double relative_frequency(std::uint64_t errors, std::uint64_t total);

DecisionOutcome decide(std::uint64_t errors, std::uint64_t total,
                       double expected_pe, const DecisionRule& rule);

/// Smallest n = a + b with a / (a + b) >= pe, ties broken by smallest a.
///
/// This is the literal minimum-size condition; it is satisfied by n = 1 for
/// every pe, so it is no practical guide. Use recommended_sample_size.
SampleSizeSpec min_sample_size_literal(double pe);

/// Smallest |I| at which the exact binomial test of H0: p = pe, run at
/// `confidence`, rejects a copy whose true flip rate is `null_rate` with
/// probability at least `power`. Evaluated exactly for |I| up to
/// kMaxRecommendedSampleSize.
std::uint64_t recommended_sample_size(double pe, double null_rate,
                                      double confidence, double power);

/// Rejection probability of the exact test at size n (the quantity
/// recommended_sample_size searches over).
double exact_test_power(std::uint64_t n, double pe, double null_rate,
                        double confidence);

// Lower-level pieces, exposed for tests and the CLI report.

/// Two-sided standard-normal critical value: Phi^-1(1 - (1 - confidence)/2).
double normal_critical_value(double confidence);

/// Inverse standard-normal CDF.
double normal_quantile(double p);

Interval wilson_interval(std::uint64_t errors, std::uint64_t total,
                         double confidence);

double log_factorial(std::uint64_t n);

double binomial_pmf(std::uint64_t k, std::uint64_t n, double p);

/// Two-sided exact binomial p-value (points no more likely than the
/// observed count are summed, with a 1e-7 relative slack on ties).
double binomial_two_sided_p_value(std::uint64_t k, std::uint64_t n, double p);

}  // namespace qumark::stats
