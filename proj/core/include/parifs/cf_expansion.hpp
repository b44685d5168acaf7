#pragma once

#include <cstddef>
#include <cstdint>

#include "parifs/ifs.hpp"

namespace parifs {

struct CfDigits {
  Word digits;
  /// The expansion ended (x is rational) before the requested count.
  bool terminated = false;
};

/// Streaming regular continued fraction quotients of a rational x in (0,1).
///
/// Runs Lehmer's algorithm on the leading 62 bits and applies the cofactor
/// matrix to the full numbers, falling back to a full division whenever the
/// single-precision quotients cannot be certified. The digits are exactly
/// those of `encode_digits` over regular_cf.
class RegularCfStream {
 public:
  explicit RegularCfStream(const Rational& x);

  /// Appends up to `count` further digits to `out`; returns how many were appended.
  std::size_t take(std::size_t count, Word& out);
  /// No digits remain.
  bool exhausted() const { return pending_pos_ == pending_.size() && v_ == 0; }

 private:
  void refill();

  BigInt u_, v_;
  Word pending_;
  std::size_t pending_pos_ = 0;
  BigInt t_, w_, q_;
};

CfDigits regular_cf_digits(const Rational& x, std::size_t n);
/// Plain Euclid, one quotient per big division. Reference implementation for benchmarks.
CfDigits regular_cf_digits_euclid(const Rational& x, std::size_t n);

/// Backward continued fraction digits, obtained from the regular quotients:
/// each pair (a, b) becomes a - 1 twos followed by b + 2 (b + 1 when the
/// expansion ends at b). Identical to `encode_digits` over backward_cf.
CfDigits backward_cf_digits(const Rational& x, std::size_t n);

inline constexpr unsigned kRegularBitsPerDigit = 6;
inline constexpr unsigned kBackwardBitsPerDigit = 16;
inline constexpr unsigned kDefaultRetryCap = 8;

unsigned default_bits_per_digit(Family f);

struct SampledExpansion {
  Word digits;
  /// The accepted sample is numerator / 2^bits.
  BigInt numerator;
  std::size_t bits = 0;
  unsigned attempts = 0;
};

/// A uniformly random rational N / 2^B with B = bits_per_digit * n, expanded to
/// n digits, whose prefix is confirmed by a doubled-precision replay
/// (N 2^B + R) / 2^{2B}. Resamples on early termination or replay mismatch;
/// throws InputError after `retry_cap` attempts. Deterministic in (seed, index).
/// Supports regular_cf and backward_cf.
SampledExpansion sample_expansion(Family f, std::size_t n, std::uint64_t seed, std::uint64_t index,
                                  unsigned bits_per_digit, unsigned retry_cap = kDefaultRetryCap);

/// 64-bit mix of (seed, index) used to derive independent per-sample streams.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace parifs
