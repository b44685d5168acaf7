#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "parifs/errors.hpp"
#include "parifs/moebius.hpp"
#include "parifs/outward_interval.hpp"
#include "parifs/rational.hpp"

using namespace parifs;

namespace {



oracle::Mat to_mat(const MoebiusBranch& m) { return {m.a(), m.b(), m.c(), m.d()}; }

// Random matrix mapping [0,1] into [0,1] with 0 <= b <= d, 0 <= a + b <= c + d.
MoebiusBranch random_branch(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> e(0, 40);
  for (;;) {
    long a = e(rng), b = e(rng), c = e(rng), d = e(rng);
    if (std::uniform_int_distribution<int>(0, 3)(rng) == 0) a = -a;
    if (d <= 0 || c + d <= 0 || b > d || a + b < 0 || a + b > c + d || a * d == b * c) continue;
    return MoebiusBranch(a, b, c, d);
  }
}

}  // namespace

TEST(Rational, ParsesAndPrintsReduced) {
  EXPECT_EQ(to_string(parse_rational("6/8")), "3/4");
  EXPECT_EQ(to_string(parse_rational("-3")), "-3/1");
  EXPECT_EQ(to_string(parse_rational("1.25")), "5/4");
  EXPECT_EQ(to_string(parse_rational(" -2/4 ")), "-1/2");
  EXPECT_THROW(parse_rational("2/-4"), InputError);
  EXPECT_THROW(parse_rational("1/0"), InputError);
  EXPECT_THROW(parse_rational("abc"), InputError);
  EXPECT_THROW(parse_rational(""), InputError);
}

TEST(Rational, FloorCeilTowardInfinity) {
  EXPECT_EQ(floor(Rational(-7, 2)), -4);
  EXPECT_EQ(ceil(Rational(-7, 2)), -3);
  EXPECT_EQ(floor(Rational(7, 2)), 3);
  EXPECT_EQ(ceil(Rational(6, 2)), 3);
}

TEST(Rational, U64RoundTrip) {
  for (std::uint64_t v : {0ULL, 1ULL, 4294967296ULL, 18446744073709551615ULL}) EXPECT_EQ(to_u64(from_u64(v)), v);
  EXPECT_THROW(to_u64(from_u64(1) << 64), InputError);
  EXPECT_THROW(to_u64(BigInt(-1)), InputError);
}

TEST(Moebius, DegenerateMatrixRejected) { EXPECT_THROW(MoebiusBranch(1, 2, 2, 4), InputError); }

TEST(Moebius, IdentityComposition) {
  MoebiusBranch f(0, 1, 1, 3);
  EXPECT_EQ(compose(MoebiusBranch::identity(), f), f);
  EXPECT_EQ(compose(f, MoebiusBranch::identity()), f);
}

TEST(Moebius, RegularPhi1Squared) {
  MoebiusBranch phi1(0, 1, 1, 1);
  EXPECT_EQ(compose(phi1, phi1), MoebiusBranch(1, 1, 1, 2));
}

TEST(Moebius, ApplyExamples) {
  EXPECT_EQ(MoebiusBranch(0, 1, 1, 1).apply(Rational(0)), 1);
  EXPECT_EQ(MoebiusBranch(1, 0, 1, 1).apply(Rational(0)), 0);   // backward phi_2
  EXPECT_EQ(MoebiusBranch(0, 1, -1, 2).apply(Rational(1)), 1);  // even psi_2
}

TEST(Moebius, DerivativeExamples) {
  EXPECT_EQ(MoebiusBranch(1, 0, 1, 1).derivative(Rational(0)), 1);
  EXPECT_EQ(MoebiusBranch(0, 1, 1, 1).derivative(Rational(0)), 1);
  EXPECT_EQ(MoebiusBranch::identity().derivative(Rational(2, 7)), 1);
  EXPECT_EQ(MoebiusBranch(0, 1, 1, 1).derivative(Rational(1)), Rational(1, 4));
}

TEST(Moebius, SharedScalarRemoved) {
  MoebiusBranch m(2, 4, 6, 10);
  EXPECT_EQ(m, MoebiusBranch(1, 2, 3, 5));
  EXPECT_EQ(m.det(), -1);
}

TEST(Moebius, InverseUndoesApply) {
  MoebiusBranch m(1, 2, 3, 7);
  Rational x(3, 11);
  EXPECT_EQ(m.inverse().apply(m.apply(x)), x);
}

TEST(Moebius, PoleDetected) {
  MoebiusBranch m(1, 0, -2, 1);
  EXPECT_FALSE(m.pole_free_on_unit_interval());
  EXPECT_THROW(m.apply(Rational(1, 2)), DomainError);
}

TEST(MoebiusProperty, CompositionMatchesMatrixProductAndChainRule) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> num(0, 1000);
  for (int t = 0; t < 2000; ++t) {
    MoebiusBranch f = random_branch(rng);
    MoebiusBranch g = random_branch(rng);
    MoebiusBranch fg = compose(f, g);
    EXPECT_TRUE(oracle::same_map(to_mat(fg), oracle::mul(to_mat(f), to_mat(g))));
    Rational x(num(rng), 1000);
    x.canonicalize();
    EXPECT_EQ(fg.apply(x), f.apply(g.apply(x)));
    EXPECT_EQ(fg.derivative(x), f.derivative(g.apply(x)) * g.derivative(x));
  }
}

TEST(MoebiusProperty, Associative) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 500; ++t) {
    MoebiusBranch f = random_branch(rng), g = random_branch(rng), h = random_branch(rng);
    EXPECT_EQ(compose(compose(f, g), h), compose(f, compose(g, h)));
  }
}

TEST(MoebiusProperty, DerivativeExtremaAtEndpoints) {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 300; ++t) {
    MoebiusBranch f = random_branch(rng);
    const Rational lo = f.min_derivative(), hi = f.max_derivative();
    for (int k = 0; k <= 16; ++k) {
      Rational d = f.derivative(Rational(k, 16));
      EXPECT_LE(lo, d);
      EXPECT_LE(d, hi);
    }
  }
}

TEST(OutwardInterval, EnclosesRationals) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 200; ++t) {
    Rational x = oracle::random_unit_rational(rng, 300);
    OutwardInterval ix(x, 64);
    EXPECT_TRUE(ix.contains(x));
    OutwardInterval sum = ix + OutwardInterval(Rational(1, 3), 64);
    EXPECT_TRUE(sum.contains(x + Rational(1, 3)));
    OutwardInterval prod = ix * OutwardInterval(Rational(7, 3), 64);
    EXPECT_TRUE(prod.contains(x * Rational(7, 3)));
    OutwardInterval quot = ix / OutwardInterval(Rational(3, 7), 64);
    EXPECT_TRUE(quot.contains(x / Rational(3, 7)));
  }
}

TEST(OutwardInterval, LogOfTwoEnclosed) {
  // 0.69314718055994530941 < log 2 < 0.69314718055994530942
  const BigInt scale = pow(BigInt(10), 20);
  OutwardInterval below(Rational(BigInt("69314718055994530941"), scale), 128);
  OutwardInterval above(Rational(BigInt("69314718055994530942"), scale), 128);
  OutwardInterval l = log(OutwardInterval(Rational(2), 128));
  EXPECT_EQ(certainly_less(below, l), Certainty::certainly_true);
  EXPECT_EQ(certainly_less(l, above), Certainty::certainly_true);
  EXPECT_LT(l.width_double(), 1e-30);
  EXPECT_THROW(log(OutwardInterval(Rational(-1), 64)), DomainError);
}

TEST(OutwardInterval, ExpLogRoundTripContainsInput) {
  OutwardInterval x(Rational(5, 3), 128);
  EXPECT_TRUE(exp(log(x)).contains(Rational(5, 3)));
}

TEST(OutwardInterval, CertainComparisons) {
  OutwardInterval a(Rational(1, 3), 128), b(Rational(1, 2), 128);
  EXPECT_EQ(certainly_less(a, b), Certainty::certainly_true);
  EXPECT_EQ(certainly_less(b, a), Certainty::certainly_false);
  EXPECT_EQ(certainly_less(a, a), Certainty::undecided);
}

TEST(OutwardInterval, PowerOfIntegerExponentExact) {
  OutwardInterval p = pow(Rational(3), Rational(2), 64);
  EXPECT_TRUE(p.contains(Rational(9)));
  OutwardInterval r = pow(Rational(4), Rational(1, 2), 128);
  EXPECT_TRUE(r.contains(Rational(2)));
}

TEST(OutwardInterval, DecideWidensThenGivesUp) {
  int calls = 0;
  int v = decide<int>(PrecisionPolicy{128, 1024}, "probe", [&](mpfr_prec_t prec) -> std::optional<int> {
    ++calls;
    if (prec < 512) return std::nullopt;
    return static_cast<int>(prec);
  });
  EXPECT_EQ(v, 512);
  EXPECT_EQ(calls, 3);
  EXPECT_THROW(decide<int>(PrecisionPolicy{128, 256}, "never", [](mpfr_prec_t) -> std::optional<int> {
                 return std::nullopt;
               }),
               PrecisionUndecidable);
}

TEST(OutwardInterval, CertainFloor) {
  EXPECT_EQ(*certain_floor(OutwardInterval(Rational(7, 2), 64)), 3);
  EXPECT_FALSE(certain_floor(OutwardInterval::hull(OutwardInterval(Rational(1, 2), 64),
                                                   OutwardInterval(Rational(3, 2), 64))));
}
