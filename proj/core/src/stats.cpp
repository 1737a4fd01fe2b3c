#include "qumark/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "qumark/error.hpp"

namespace qumark::stats {
namespace {

constexpr double kPValueRelErr = 1.0 + 1e-7;
// Binomial mass further than this many standard deviations (plus a fixed
// margin) from the mean is below 1e-30 and is treated as zero.
constexpr double kWindowSigmas = 12.0;
constexpr double kWindowMargin = 16.0;

void require_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorCode::InvalidProbability,
                std::string(what) + " must lie in [0, 1]");
  }
}

void require_open_probability(double p, const char* what) {
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(ErrorCode::InvalidProbability,
                std::string(what) + " must lie in (0, 1)");
  }
}

void require_counts(std::uint64_t errors, std::uint64_t total) {
  if (total == 0) throw Error(ErrorCode::ZeroTotal, "total must be positive");
  if (errors > total) {
    throw Error(ErrorCode::CountExceedsTotal,
                std::to_string(errors) + " errors out of " +
                    std::to_string(total));
  }
}

double binomial_log_pmf(std::uint64_t k, std::uint64_t n, double p) {
  if (k > n) return -std::numeric_limits<double>::infinity();
  if (p == 0.0) return k == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  if (p == 1.0) return k == n ? 0.0 : -std::numeric_limits<double>::infinity();
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k) +
         static_cast<double>(k) * std::log(p) +
         static_cast<double>(n - k) * std::log1p(-p);
}

// Binomial(n, p) probabilities over [lo, hi] with prefix sums. Mass outside
// the window is taken as zero.
class BinomialTable {
 public:
  BinomialTable(std::uint64_t n, double p, bool windowed) : n_(n), p_(p) {
    lo_ = 0;
    hi_ = n;
    if (windowed) {
      double mean = static_cast<double>(n) * p;
      double sd = std::sqrt(static_cast<double>(n) * p * (1.0 - p));
      double reach = kWindowSigmas * sd + kWindowMargin;
      double low = std::floor(mean - reach);
      double high = std::ceil(mean + reach);
      lo_ = low <= 0.0 ? 0 : static_cast<std::uint64_t>(low);
      hi_ = high >= static_cast<double>(n) ? n : static_cast<std::uint64_t>(high);
    }
    pmf_.resize(hi_ - lo_ + 1);
    prefix_.resize(pmf_.size() + 1, 0.0);
    for (std::size_t i = 0; i < pmf_.size(); ++i) {
      pmf_[i] = std::exp(binomial_log_pmf(lo_ + i, n_, p_));
      prefix_[i + 1] = prefix_[i] + pmf_[i];
    }
  }

  std::uint64_t lo() const { return lo_; }
  std::uint64_t hi() const { return hi_; }

  double pmf(std::uint64_t k) const {
    return (k < lo_ || k > hi_) ? 0.0 : pmf_[k - lo_];
  }

  // P(a <= X <= b), both ends inclusive, clipped to the window.
  double mass(std::uint64_t a, std::uint64_t b) const {
    if (a > b || b < lo_ || a > hi_) return 0.0;
    a = std::max(a, lo_);
    b = std::min(b, hi_);
    return prefix_[b - lo_ + 1] - prefix_[a - lo_];
  }

  // Two-sided p-value, minimum-likelihood method.
  double p_value(std::uint64_t x) const {
    double mean = static_cast<double>(n_) * p_;
    double d = pmf(x) * kPValueRelErr;
    double xd = static_cast<double>(x);
    if (xd == mean) return 1.0;
    double p;
    if (xd < mean) {
      // Upper tail: first k >= ceil(mean) with pmf(k) <= d; pmf is
      // nonincreasing there.
      std::uint64_t first = static_cast<std::uint64_t>(std::ceil(mean));
      std::uint64_t lo = first, hi = n_ + 1;
      while (lo < hi) {
        std::uint64_t mid = lo + (hi - lo) / 2;
        if (pmf(mid) <= d) hi = mid; else lo = mid + 1;
      }
      p = tail_sum_low(x) + (lo <= n_ ? tail_sum_high(lo) : 0.0);
    } else {
      // Lower tail: last k <= floor(mean) with pmf(k) <= d; pmf is
      // nondecreasing there.
      std::uint64_t last = static_cast<std::uint64_t>(std::floor(mean));
      // Count of k in [0, last] with pmf(k) <= d is a prefix length.
      std::uint64_t lo = 0, hi = last + 1;
      while (lo < hi) {
        std::uint64_t mid = lo + (hi - lo) / 2;
        if (pmf(mid) <= d) lo = mid + 1; else hi = mid;
      }
      p = (lo > 0 ? tail_sum_low(lo - 1) : 0.0) + tail_sum_high(x);
    }
    return std::min(1.0, p);
  }

 private:
  // P(X <= k) and P(X >= k) within the window.
  double tail_sum_low(std::uint64_t k) const {
    if (k < lo_) return 0.0;
    if (k >= hi_) return prefix_.back();
    return prefix_[k - lo_ + 1];
  }
  double tail_sum_high(std::uint64_t k) const {
    if (k > hi_) return 0.0;
    double s = 0.0;
    std::uint64_t start = std::max(k, lo_);
    // Summing from the far end keeps small upper tails precise.
    for (std::uint64_t j = hi_ + 1; j-- > start;) s += pmf_[j - lo_];
    return s;
  }

  std::uint64_t n_;
  double p_;
  std::uint64_t lo_ = 0;
  std::uint64_t hi_ = 0;
  std::vector<double> pmf_;
  std::vector<double> prefix_;
};

struct AcceptanceBand {
  bool empty = true;
  std::uint64_t first = 0;
  std::uint64_t last = 0;
};

// Counts x whose p-value against H0 is at least alpha. The p-value is
// monotone on each side of the mean, so the set is one contiguous run that
// always contains the counts nearest the mean.
AcceptanceBand acceptance_band(const BinomialTable& h0, std::uint64_t n,
                               double p0, double alpha) {
  double mean = static_cast<double>(n) * p0;
  std::uint64_t left_end = static_cast<std::uint64_t>(std::floor(mean));
  std::uint64_t right_start = static_cast<std::uint64_t>(std::ceil(mean));
  if (right_start > n) right_start = n;

  // Smallest x in [h0.lo(), left_end] with p_value >= alpha.
  std::uint64_t lo = h0.lo(), hi = left_end + 1;
  while (lo < hi) {
    std::uint64_t mid = lo + (hi - lo) / 2;
    if (h0.p_value(mid) >= alpha) hi = mid; else lo = mid + 1;
  }
  std::uint64_t first = lo;
  // Largest x in [right_start, h0.hi()] with p_value >= alpha.
  lo = right_start;
  hi = h0.hi() + 1;
  while (lo < hi) {
    std::uint64_t mid = lo + (hi - lo) / 2;
    if (h0.p_value(mid) >= alpha) lo = mid + 1; else hi = mid;
  }
  bool left_ok = first <= left_end;
  bool right_ok = lo > right_start;
  std::uint64_t last = right_ok ? lo - 1 : left_end;
  if (!left_ok) first = right_start;
  if (!left_ok && !right_ok) return {};
  return {false, first, last};
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

DecisionRule DecisionRule::fixed_tolerance(double tolerance) {
  require_open_probability(tolerance, "tolerance");
  return DecisionRule(RuleKind::FixedTolerance, tolerance);
}

DecisionRule DecisionRule::wilson_interval(double confidence) {
  require_open_probability(confidence, "confidence");
  return DecisionRule(RuleKind::WilsonInterval, confidence);
}

DecisionRule DecisionRule::exact_binomial(double confidence) {
  require_open_probability(confidence, "confidence");
  return DecisionRule(RuleKind::ExactBinomial, confidence);
}

DecisionRule DecisionRule::parse(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw std::invalid_argument("rule must look like KIND:VALUE, got '" +
                                text + "'");
  }
  std::string kind = text.substr(0, colon);
  std::string value = text.substr(colon + 1);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size()) {
    throw std::invalid_argument("rule value '" + value + "' is not a number");
  }
  if (kind == "fixed") return fixed_tolerance(v);
  if (kind == "wilson") return wilson_interval(v);
  if (kind == "binom") return exact_binomial(v);
  throw std::invalid_argument("unknown rule kind '" + kind +
                              "' (expected fixed, wilson or binom)");
}

std::string DecisionRule::to_string() const {
  switch (kind_) {
    case RuleKind::FixedTolerance: return "fixed:" + format_number(parameter_);
    case RuleKind::WilsonInterval: return "wilson:" + format_number(parameter_);
    case RuleKind::ExactBinomial: return "binom:" + format_number(parameter_);
  }
  return "unknown";
}

std::string to_string(Decision decision) {
  return decision == Decision::Accept ? "accept" : "reject";
}

double log_factorial(std::uint64_t n) {
  static const std::vector<double> table = [] {
    std::vector<double> t(kMaxRecommendedSampleSize + 1);
    t[0] = 0.0;
    for (std::size_t i = 1; i < t.size(); ++i) {
      t[i] = t[i - 1] + std::log(static_cast<double>(i));
    }
    return t;
  }();
  if (n < table.size()) return table[n];
  return std::lgamma(static_cast<double>(n) + 1.0);
}

double binomial_pmf(std::uint64_t k, std::uint64_t n, double p) {
  require_probability(p, "p");
  return std::exp(binomial_log_pmf(k, n, p));
}

double binomial_two_sided_p_value(std::uint64_t k, std::uint64_t n, double p) {
  require_probability(p, "p");
  require_counts(k, n);
  return BinomialTable(n, p, false).p_value(k);
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(ErrorCode::InvalidProbability,
                "normal_quantile argument must lie in (0, 1)");
  }
  // Acklam's rational approximation followed by one Halley step.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00, 2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  double x;
  if (p < p_low) {
    double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    double q = p - 0.5;
    double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
  double u = e * std::sqrt(2.0 * 3.14159265358979323846) * std::exp(x * x / 2.0);
  return x - u / (1.0 + x * u / 2.0);
}

double normal_critical_value(double confidence) {
  require_open_probability(confidence, "confidence");
  return normal_quantile(1.0 - (1.0 - confidence) / 2.0);
}

Interval wilson_interval(std::uint64_t errors, std::uint64_t total,
                         double confidence) {
  require_counts(errors, total);
  double z = normal_critical_value(confidence);
  double n = static_cast<double>(total);
  double phat = static_cast<double>(errors) / n;
  double z2 = z * z;
  double denom = 1.0 + z2 / n;
  double centre = (phat + z2 / (2.0 * n)) / denom;
  double half = z / denom * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n));
  Interval iv{centre - half, centre + half};
  iv.low = errors == 0 ? 0.0 : std::clamp(iv.low, 0.0, phat);
  iv.high = errors == total ? 1.0 : std::clamp(iv.high, phat, 1.0);
  return iv;
}

double relative_frequency(std::uint64_t errors, std::uint64_t total) {
  require_counts(errors, total);
  return static_cast<double>(errors) / static_cast<double>(total);
}

DecisionOutcome decide(std::uint64_t errors, std::uint64_t total,
                       double expected_pe, const DecisionRule& rule) {
  require_counts(errors, total);
  require_probability(expected_pe, "expected_pe");
  DecisionOutcome out;
  out.statistic = relative_frequency(errors, total);
  bool accept = false;
  switch (rule.kind()) {
    case RuleKind::FixedTolerance: {
      out.bound_low = std::max(0.0, out.statistic - rule.tolerance());
      out.bound_high = std::min(1.0, out.statistic + rule.tolerance());
      accept = std::fabs(out.statistic - expected_pe) <= rule.tolerance();
      break;
    }
    case RuleKind::WilsonInterval: {
      Interval iv = wilson_interval(errors, total, rule.confidence());
      out.bound_low = iv.low;
      out.bound_high = iv.high;
      accept = iv.low <= expected_pe && expected_pe <= iv.high;
      break;
    }
    case RuleKind::ExactBinomial: {
      BinomialTable h0(total, expected_pe, false);
      double alpha = 1.0 - rule.confidence();
      out.p_value = h0.p_value(errors);
      AcceptanceBand band = acceptance_band(h0, total, expected_pe, alpha);
      if (!band.empty) {
        out.bound_low = static_cast<double>(band.first) / static_cast<double>(total);
        out.bound_high = static_cast<double>(band.last) / static_cast<double>(total);
      }
      accept = *out.p_value >= alpha;
      break;
    }
  }
  out.decision = accept ? Decision::Accept : Decision::Reject;
  return out;
}

SampleSizeSpec min_sample_size_literal(double pe) {
  require_probability(pe, "pe");
  for (std::uint64_t n = 1;; ++n) {
    for (std::uint64_t a = 0; a <= n; ++a) {
      if (static_cast<double>(a) / static_cast<double>(n) >= pe) {
        return {a, n - a, n};
      }
    }
  }
}

double exact_test_power(std::uint64_t n, double pe, double null_rate,
                        double confidence) {
  require_probability(pe, "pe");
  require_probability(null_rate, "null_rate");
  require_open_probability(confidence, "confidence");
  if (n == 0) throw Error(ErrorCode::ZeroTotal, "sample size must be positive");
  BinomialTable h0(n, pe, true);
  AcceptanceBand band = acceptance_band(h0, n, pe, 1.0 - confidence);
  BinomialTable alt(n, null_rate, true);
  if (band.empty) return 1.0;
  return std::clamp(1.0 - alt.mass(band.first, band.last), 0.0, 1.0);
}

std::uint64_t recommended_sample_size(double pe, double null_rate,
                                      double confidence, double power) {
  require_open_probability(pe, "pe");
  if (!(null_rate >= 0.0 && null_rate < 1.0)) {
    throw Error(ErrorCode::InvalidProbability, "null_rate must lie in [0, 1)");
  }
  require_open_probability(confidence, "confidence");
  require_open_probability(power, "power");
  if (pe == null_rate) {
    throw Error(ErrorCode::RatesEqual, "pe and null_rate must differ");
  }
  for (std::uint64_t n = 1; n <= kMaxRecommendedSampleSize; ++n) {
    if (exact_test_power(n, pe, null_rate, confidence) >= power) return n;
  }
  throw Error(ErrorCode::Unachievable,
              "required sample size exceeds " +
                  std::to_string(kMaxRecommendedSampleSize));
}

}  // namespace qumark::stats
