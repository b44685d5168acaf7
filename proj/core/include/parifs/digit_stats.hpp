#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "parifs/cf_expansion.hpp"
#include "parifs/outward_interval.hpp"

namespace parifs {

struct LargestDigitTrace {
  /// n = 1..n_max.
  std::vector<std::size_t> n;
  /// L_n = max(a_1, ..., a_n).
  std::vector<Digit> L;
  /// L_n / τ(n), defined for n >= 3.
  std::vector<std::optional<double>> ratio;
};

/// Throws InputError when `digits` has fewer than n_max entries.
LargestDigitTrace largest_digit_trace(const Word& digits, std::size_t n_max);

/// τ(x) = x / log log x, enclosed with outward rounding. DomainError unless x > e.
OutwardInterval tau(const Rational& x, mpfr_prec_t prec = kDefaultPrecisionBits);
OutwardInterval tau(const OutwardInterval& x);
/// Double approximation for reporting; DomainError unless x > e.
double tau_double(double x);

/// floor(alpha · τ(n)) for n >= 3, certified by widening precision up to the policy cap.
BigInt floor_alpha_tau(const Rational& alpha, std::uint64_t n, const PrecisionPolicy& policy = {});

struct GalambosRow {
  double y;
  double empirical_cdf;
  double limit_cdf;
};

struct GalambosResult {
  std::size_t n = 0;
  /// Sorted values L_n log 2 / n, one per sample.
  std::vector<double> values;
  /// Kolmogorov-Smirnov distance to y -> exp(-1/y).
  double ks = 0;
  std::vector<GalambosRow> rows;
};

/// KS statistic of `values` against exp(-1/y); values need not be sorted.
GalambosResult galambos_from_values(std::size_t n, std::vector<double> values);

/// Regular-CF samples (see sample_expansion) of n digits each.
GalambosResult galambos_experiment(std::size_t n, std::size_t samples, std::uint64_t seed,
                                   unsigned bits_per_digit = kRegularBitsPerDigit);

struct LogRatioResult {
  std::size_t n = 0;
  /// log L_n / log n per sample, in sample order.
  std::vector<double> ratios;
  double median = 0;
};

LogRatioResult log_ratio_experiment(std::size_t n, std::size_t samples, std::uint64_t seed,
                                    unsigned bits_per_digit = kRegularBitsPerDigit);

/// Running infimum of L_n log log n / n for n = 3..n_max (index 0 is n = 3).
std::vector<double> philipp_statistic(const Word& digits, std::size_t n_max);

/// Exact frequency of each digit among the first n; sums to 1.
std::map<Digit, Rational> digit_frequency(const Word& digits, std::size_t n);

struct FrequencyResult {
  Digit digit = 0;
  std::size_t n = 0;
  /// freq(digit) per sample, in sample order.
  std::vector<double> per_sample;
  double mean = 0;
};

/// Mean frequency of `digit` over random samples of the family (regular_cf or backward_cf).
FrequencyResult frequency_experiment(Family f, Digit digit, std::size_t n, std::size_t samples, std::uint64_t seed,
                                     unsigned bits_per_digit = 0);

}  // namespace parifs
