#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "parifs/cf_expansion.hpp"
#include "parifs/errors.hpp"
#include "parifs/systems.hpp"

using namespace parifs;

namespace {

Word to_word(const std::vector<std::uint64_t>& v) { return Word(v.begin(), v.end()); }

}  // namespace

TEST(RegularCf, LehmerMatchesEuclidOracle) {
  std::mt19937_64 rng(31);
  for (unsigned bits : {8u, 63u, 64u, 65u, 500u, 3000u}) {
    for (int t = 0; t < 60; ++t) {
      Rational x = oracle::random_unit_rational(rng, bits);
      Word expect = to_word(oracle::regular_cf(x));
      CfDigits got = regular_cf_digits(x, expect.size() + 5);
      EXPECT_EQ(got.digits, expect) << to_string(x);
      EXPECT_TRUE(got.terminated);
      EXPECT_EQ(regular_cf_digits_euclid(x, expect.size() + 5).digits, expect);
    }
  }
}

TEST(RegularCf, TruncatesAtN) {
  CfDigits d = regular_cf_digits(Rational(5, 7), 2);
  EXPECT_EQ(d.digits, (Word{1, 2}));
  EXPECT_FALSE(d.terminated);
  CfDigits all = regular_cf_digits(Rational(5, 7), 3);
  EXPECT_FALSE(all.terminated);
  EXPECT_TRUE(regular_cf_digits(Rational(5, 7), 4).terminated);
}

TEST(RegularCf, LargePartialQuotients) {
  // 1/(2^63 + 5 + 1/(3 + 1/(2^63 + 7))) has quotients beyond the 62-bit window.
  BigInt big = (BigInt(1) << 63) + 5;
  Rational inner = Rational(3) + Rational(BigInt(1), (BigInt(1) << 63) + 7);
  Rational x = 1 / (Rational(big) + 1 / inner);
  Word expect = to_word(oracle::regular_cf(x));
  EXPECT_EQ(regular_cf_digits(x, 100).digits, expect);
  EXPECT_THROW(regular_cf_digits(Rational(BigInt(1), BigInt(1) << 80), 3), InputError);  // quotient 2^80 exceeds a digit
}

TEST(RegularCf, StreamTakesInPieces) {
  std::mt19937_64 rng(32);
  Rational x = oracle::random_unit_rational(rng, 2000);
  Word expect = to_word(oracle::regular_cf(x));
  RegularCfStream s(x);
  Word got;
  while (s.take(7, got) > 0) {
  }
  EXPECT_TRUE(s.exhausted());
  EXPECT_EQ(got, expect);
}

TEST(RegularCf, DomainChecked) {
  EXPECT_THROW(regular_cf_digits(Rational(1), 3), DomainError);
  EXPECT_THROW(regular_cf_digits(Rational(-1, 2), 3), DomainError);
}

TEST(BackwardCf, MatchesOracleAndEncoder) {
  std::mt19937_64 rng(33);
  IfsSystem bw = builtin("backward_cf");
  for (int t = 0; t < 200; ++t) {
    Rational x = oracle::random_unit_rational(rng, 48);
    Word expect = to_word(oracle::backward_cf(x, 1u << 20));
    EXPECT_EQ(backward_cf_digits(x, 1u << 20).digits, expect) << to_string(x);
    EXPECT_EQ(encode_digits(bw, x, 40).digits, backward_cf_digits(x, 40).digits);
  }
  EXPECT_EQ(backward_cf_digits(Rational(1, 3), 10).digits, (Word{2, 2}));
}

TEST(BackwardCf, TruncationInsideARunOfTwos) {
  // 1/(5 + 1/3): regular (5, 3) -> four 2s then 4.
  Rational x = 1 / (Rational(5) + Rational(1, 3));
  EXPECT_EQ(backward_cf_digits(x, 10).digits, (Word{2, 2, 2, 2, 4}));
  CfDigits cut = backward_cf_digits(x, 3);
  EXPECT_EQ(cut.digits, (Word{2, 2, 2}));
  EXPECT_FALSE(cut.terminated);
}

TEST(Sampling, DeterministicPerIndex) {
  SampledExpansion a = sample_expansion(Family::regular_cf, 300, 9, 4, kRegularBitsPerDigit);
  SampledExpansion b = sample_expansion(Family::regular_cf, 300, 9, 4, kRegularBitsPerDigit);
  SampledExpansion c = sample_expansion(Family::regular_cf, 300, 9, 5, kRegularBitsPerDigit);
  EXPECT_EQ(a.digits, b.digits);
  EXPECT_EQ(a.numerator, b.numerator);
  EXPECT_NE(a.digits, c.digits);
  EXPECT_EQ(a.digits.size(), 300u);
  EXPECT_EQ(a.bits, 300u * kRegularBitsPerDigit);
}

TEST(Sampling, DigitsAreThoseOfTheSampledRational) {
  for (Family f : {Family::regular_cf, Family::backward_cf}) {
    SampledExpansion s = sample_expansion(f, 200, 3, 0, default_bits_per_digit(f));
    Rational x(s.numerator, BigInt(1) << s.bits);
    x.canonicalize();
    CfDigits ref = f == Family::regular_cf ? regular_cf_digits(x, 200) : backward_cf_digits(x, 200);
    EXPECT_EQ(s.digits, ref.digits);
  }
}

TEST(Sampling, InsufficientBudgetFails) {
  EXPECT_THROW(sample_expansion(Family::regular_cf, 2000, 1, 0, 1, 3), InputError);
  EXPECT_THROW(sample_expansion(Family::even_cf, 10, 1, 0, 6), InputError);
  EXPECT_THROW(sample_expansion(Family::regular_cf, 0, 1, 0, 6), InputError);
}

TEST(Sampling, StreamSeedsDiffer) {
  EXPECT_NE(stream_seed(1, 0), stream_seed(1, 1));
  EXPECT_NE(stream_seed(1, 0), stream_seed(2, 0));
  EXPECT_EQ(stream_seed(7, 3), stream_seed(7, 3));
}
