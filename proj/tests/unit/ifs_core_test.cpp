#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "parifs/errors.hpp"
#include "parifs/ifs.hpp"
#include "parifs/systems.hpp"

using namespace parifs;

namespace {

IfsSystem thirds() {
  return IfsSystem::from_branches("thirds", {{1, MoebiusBranch(1, 0, 0, 3)}, {2, MoebiusBranch(1, 2, 0, 3)}});
}

}  // namespace

TEST(FundamentalInterval, Examples) {
  IfsSystem reg = builtin("regular_cf");
  IfsSystem bw = builtin("backward_cf");
  FundInterval e = fundamental_interval(reg, {});
  EXPECT_EQ(e.lo, 0);
  EXPECT_EQ(e.hi, 1);
  FundInterval r1 = fundamental_interval(reg, {1});
  EXPECT_EQ(r1.lo, Rational(1, 2));
  EXPECT_EQ(r1.hi, 1);
  FundInterval b2 = fundamental_interval(bw, {2});
  EXPECT_EQ(b2.lo, 0);
  EXPECT_EQ(b2.hi, Rational(1, 2));
}

TEST(FundamentalInterval, NestedUnderExtension) {
  for (const char* name : {"regular_cf", "backward_cf", "even_cf"}) {
    IfsSystem sys = builtin(name);
    std::vector<Digit> letters = sys.window({1, 7});
    std::mt19937_64 rng(3);
    for (int t = 0; t < 200; ++t) {
      Word w;
      FundInterval prev = fundamental_interval(sys, w);
      for (int j = 0; j < 8; ++j) {
        w.push_back(letters[rng() % letters.size()]);
        FundInterval cur = fundamental_interval(sys, w);
        EXPECT_LT(cur.lo, cur.hi);
        EXPECT_LE(prev.lo, cur.lo);
        EXPECT_LE(cur.hi, prev.hi);
        prev = cur;
      }
    }
  }
}

TEST(Encode, RegularExamples) {
  IfsSystem reg = builtin("regular_cf");
  EncodeResult r = encode_digits(reg, Rational(5, 7), 3);
  EXPECT_EQ(r.digits, (Word{1, 2, 2}));
  EncodeResult half = encode_digits(reg, Rational(1, 2), 5);
  EXPECT_EQ(half.status, EncodeStatus::hit_boundary);
  EXPECT_EQ(half.step, 1u);
  EXPECT_THROW(encode_digits(reg, Rational(3, 2), 4), DomainError);
  EXPECT_THROW(encode_digits(reg, Rational(0), 4), DomainError);
}

TEST(Encode, BackwardOneThird) {
  EncodeResult r = encode_digits(builtin("backward_cf"), Rational(1, 3), 10);
  EXPECT_EQ(r.digits, (Word{2, 2}));
  EXPECT_EQ(r.status, EncodeStatus::hit_boundary);
}

TEST(Encode, CompleteWhenStoppedEarly) {
  EncodeResult r = encode_digits(builtin("regular_cf"), Rational(5, 7), 2);
  EXPECT_EQ(r.digits, (Word{1, 2}));
  EXPECT_EQ(r.status, EncodeStatus::complete);
  EXPECT_EQ(r.step, 0u);
  EXPECT_EQ(r.tail, Rational(1, 2));
}

TEST(Encode, MatchesEuclidOracle) {
  IfsSystem reg = builtin("regular_cf");
  std::mt19937_64 rng(21);
  for (int t = 0; t < 300; ++t) {
    Rational x = oracle::random_unit_rational(rng, 200);
    auto expect = oracle::regular_cf(x);
    EncodeResult r = encode_digits(reg, x, 1000);
    ASSERT_EQ(r.digits.size(), expect.size());
    for (std::size_t i = 0; i < expect.size(); ++i) EXPECT_EQ(r.digits[i], expect[i]);
  }
}

TEST(Encode, MatchesBackwardOracle) {
  IfsSystem bw = builtin("backward_cf");
  std::mt19937_64 rng(22);
  for (int t = 0; t < 200; ++t) {
    Rational x = oracle::random_unit_rational(rng, 64);
    auto expect = oracle::backward_cf(x, 100000);
    EncodeResult r = encode_digits(bw, x, 100000);
    ASSERT_EQ(r.digits.size(), expect.size());
    for (std::size_t i = 0; i < expect.size(); ++i) EXPECT_EQ(r.digits[i], expect[i]);
  }
}

TEST(Encode, RoundTripThroughTail) {
  std::mt19937_64 rng(23);
  for (const char* name : {"regular_cf", "backward_cf", "even_cf"}) {
    IfsSystem sys = builtin(name);
    for (int t = 0; t < 100; ++t) {
      Rational x = oracle::random_unit_rational(rng, 100);
      for (std::size_t n : {1u, 3u, 10u}) {
        EncodeResult r = encode_digits(sys, x, n);
        EXPECT_EQ(decode_point(sys, r.digits, r.tail), x);
        FundInterval j = fundamental_interval(sys, r.digits);
        EXPECT_LE(j.lo, x);
        EXPECT_LE(x, j.hi);
      }
    }
  }
}

TEST(Encode, ExitsRestrictedSystem) {
  IfsSystem sub = restrict_indices(builtin("regular_cf"), std::vector<Digit>{1, 3});
  // 2/5 lies in phi_2((0,1)) = (1/3, 1/2), which the restriction removed.
  EncodeResult r = encode_digits(sub, Rational(2, 5), 4);
  EXPECT_EQ(r.status, EncodeStatus::exited_limit_set);
  EXPECT_EQ(r.step, 1u);
  EXPECT_TRUE(r.digits.empty());
}

TEST(Decode, Examples) {
  IfsSystem reg = builtin("regular_cf");
  IfsSystem bw = builtin("backward_cf");
  EXPECT_EQ(decode_point(reg, {}, Rational(1, 3)), Rational(1, 3));
  EXPECT_EQ(decode_point(reg, {1, 2, 2}, Rational(0)), Rational(5, 7));
  EXPECT_EQ(decode_point(bw, {2, 2}, Rational(1)), Rational(1, 3));
  EXPECT_EQ(decode_point(bw, {2, 2}, Rational(1, 2)), Rational(1, 4));
  EXPECT_THROW(decode_point(bw, {1}, Rational(1, 2)), InputError);
}

TEST(Distortion, FirstOrderIsLogFour) {
  for (const char* name : {"regular_cf", "backward_cf"}) {
    DistortionReport d = distortion_Dn(builtin(name), 1, {1, 50});
    EXPECT_EQ(d.windowed_ratio, 4) << name;
    EXPECT_NEAR(d.windowed.mid_double(), std::log(4.0), 1e-12);
  }
  EXPECT_EQ(distortion_Dn(builtin("regular_cf"), 1, {1, 50}).witness, (Word{1}));
  EXPECT_EQ(distortion_Dn(builtin("backward_cf"), 1, {1, 50}).witness, (Word{2}));
}

TEST(Distortion, SimilaritiesHaveNone) {
  for (std::size_t n : {1u, 3u, 5u}) EXPECT_EQ(distortion_Dn(thirds(), n, {1, 2}).windowed_ratio, 1);
}

TEST(DecayCheck, BuiltinConstants) {
  EXPECT_TRUE(decay_check(builtin("regular_cf"), Rational(1, 4), Rational(2), {1, 200}).holds);
  EXPECT_TRUE(decay_check(builtin("backward_cf"), Rational(1), Rational(2), {2, 200}).holds);
  EXPECT_TRUE(decay_check(builtin("even_cf"), Rational(1, 9), Rational(2), {2, 200}).holds);
  EXPECT_THROW(decay_check(builtin("regular_cf"), Rational(1), Rational(1), {1, 10}), InputError);
}

TEST(DecayCheck, TooStrongConstantFails) {
  // min phi_i' = 1/(i+1)^2 < 1/i^2 already at i = 1.
  DecayCheckReport r = decay_check(builtin("regular_cf"), Rational(1), Rational(2), {1, 10});
  EXPECT_FALSE(r.holds);
  ASSERT_TRUE(r.violating_index);
  EXPECT_EQ(*r.violating_index, 1u);
}

TEST(DecayCheck, NonIntegerExponent) {
  // 1/(i+1)^2 >= (1/8) / i^(3/2) holds for small i only.
  Digit first = 0;
  for (Digit i = 1; i <= 100 && !first; ++i) {
    if (std::pow(double(i), 1.5) < (i + 1.0) * (i + 1.0) / 8) first = i;
  }
  DecayCheckReport r = decay_check(builtin("regular_cf"), Rational(1, 8), Rational(3, 2), {1, 100});
  EXPECT_FALSE(r.holds);
  ASSERT_TRUE(r.violating_index);
  EXPECT_EQ(*r.violating_index, first);

  // Clean window, but the tail cannot satisfy d < 2.
  DecayCheckReport t = decay_check(builtin("regular_cf"), Rational(1, 8), Rational(3, 2), {1, first - 1});
  EXPECT_FALSE(t.holds);
  EXPECT_FALSE(t.violating_index);
  EXPECT_FALSE(t.tail_argument.empty());
}

TEST(Parabolic, BuiltinSets) {
  auto bw = parabolic_indices(builtin("backward_cf"));
  ASSERT_EQ(bw.size(), 1u);
  EXPECT_EQ(bw[0].index, 2u);
  EXPECT_EQ(bw[0].fixed_point.rational, 0);
  auto ev = parabolic_indices(builtin("even_cf"));
  ASSERT_EQ(ev.size(), 1u);
  EXPECT_EQ(ev[0].index, 2u);
  EXPECT_EQ(ev[0].fixed_point.rational, 1);
  EXPECT_TRUE(parabolic_indices(builtin("regular_cf")).empty());
}

TEST(Parabolic, NeutralFixedPointOfSingleBranch) {
  auto fp = neutral_fixed_point(MoebiusBranch(1, 0, 1, 1));
  ASSERT_TRUE(fp);
  EXPECT_EQ(fp->sign(), 0);
  // Golden-ratio fixed point of 1/(x+1) is hyperbolic.
  EXPECT_FALSE(neutral_fixed_point(MoebiusBranch(0, 1, 1, 1)));
}

TEST(Renyi, Values) {
  EXPECT_EQ(renyi_quantity(builtin("regular_cf"), {1, 30}).windowed_sup, 2);
  EXPECT_EQ(renyi_quantity(builtin("backward_cf"), {2, 30}).windowed_sup, 2);
  EXPECT_EQ(renyi_quantity(thirds(), {1, 2}).windowed_sup, 0);
}

TEST(DecayProbe, Examples) {
  auto sim = uniform_decay_probe(thirds(), 5, {1, 2});
  for (std::size_t n = 1; n <= 5; ++n) EXPECT_EQ(sim[n - 1].max_diameter, Rational(1, static_cast<long>(std::pow(3, n))));
  auto run = uniform_decay_probe(builtin("backward_cf"), 6, {2, 2});
  for (std::size_t n = 1; n <= 6; ++n) EXPECT_EQ(run[n - 1].max_diameter, Rational(1, static_cast<long>(n + 1)));
  auto reg = uniform_decay_probe(builtin("regular_cf"), 3, {1, 2});
  EXPECT_LT(reg[2].max_diameter, Rational(1, 4));
  // Brute force over the 8 words.
  Rational best = 0;
  for (Digit a : {1, 2})
    for (Digit b : {1, 2})
      for (Digit c : {1, 2}) best = std::max(best, fundamental_interval(builtin("regular_cf"), {a, b, c}).diameter());
  EXPECT_EQ(reg[2].max_diameter, best);
}

TEST(Enumeration, CapEnforced) {
  IfsSystem reg = builtin("regular_cf");
  std::vector<MoebiusBranch> maps{reg.branch(1), reg.branch(2)};
  std::size_t seen = 0;
  for_each_word(maps, {1, 2}, 4, 100, [&](const Word&, const MoebiusBranch&) { ++seen; });
  EXPECT_EQ(seen, 16u);
  EXPECT_THROW(for_each_word(maps, {1, 2}, 10, 100, [](const Word&, const MoebiusBranch&) {}), InputError);
}

TEST(ChainRule, EnumeratedWords) {
  IfsSystem bw = builtin("backward_cf");
  std::vector<Digit> letters{2, 3, 4};
  std::vector<MoebiusBranch> maps;
  for (Digit i : letters) maps.push_back(bw.branch(i));
  for_each_word(maps, letters, 4, 1000, [&](const Word& w, const MoebiusBranch& m) {
    Rational x(2, 7), deriv(1);
    for (std::size_t j = w.size(); j-- > 0;) {
      deriv *= bw.branch(w[j]).derivative(x);
      x = bw.branch(w[j]).apply(x);
    }
    EXPECT_EQ(m.derivative(Rational(2, 7)), deriv);
    EXPECT_EQ(m.apply(Rational(2, 7)), x);
  });
}
