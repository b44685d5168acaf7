// Acceptance suite: `parifs_acceptance --criterion N` checks one criterion,
// no argument runs all 14. One PASS/FAIL line per criterion; exit 1 on any FAIL.

#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "parifs/digit_stats.hpp"
#include "parifs/insertion.hpp"
#include "parifs/subsystem.hpp"
#include "parifs/systems.hpp"

using namespace parifs;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

constexpr std::uint64_t kSeed = 20240917;

struct Config {
  std::uint64_t p;
  Rational alpha;
};

const std::vector<Config>& configs() {
  static const std::vector<Config> all{{2, Rational(1, 2)}, {2, Rational(1)}, {2, Rational(2)},
                                       {3, Rational(1, 2)}, {3, Rational(1)}, {3, Rational(2)}};
  return all;
}

std::string label(const Config& c) { return "p=" + std::to_string(c.p) + " alpha=" + to_string(c.alpha); }

InsertionSchedule backward_schedule(const Config& c, std::uint64_t kmax) {
  return build_schedule(Rational(2), c.p, c.alpha, kmax, select_subsystem(builtin("backward_cf"), c.p, {3, 5}));
}

Word flatten(const std::vector<Word>& blocks) {
  Word out;
  for (const Word& b : blocks) out.insert(out.end(), b.begin(), b.end());
  return out;
}

// 1. encode -> decode round trip on random rationals with q < 2^256.
Outcome criterion_1() {
  Outcome o;
  std::mt19937_64 rng(kSeed);
  std::ostringstream msg;
  for (const char* name : {"regular_cf", "backward_cf", "even_cf"}) {
    IfsSystem sys = builtin(name);
    std::size_t bad = 0, digits = 0;
    for (int t = 0; t < 500; ++t) {
      Rational x = oracle::random_unit_rational(rng, 256);
      EncodeResult full = encode_digits(sys, x, 1u << 24);
      digits += full.digits.size();
      bool ok = full.status != EncodeStatus::complete && decode_point(sys, full.digits, full.tail) == x;
      // Every prefix decodes back through its own tail.
      std::size_t cut = 1 + rng() % full.digits.size();
      EncodeResult part = encode_digits(sys, x, cut);
      ok = ok && decode_point(sys, part.digits, part.tail) == x;
      FundInterval j = fundamental_interval(sys, part.digits);
      ok = ok && j.lo <= x && x <= j.hi;
      if (sys.family_tag() == Family::regular_cf) {
        auto ref = oracle::regular_cf(x);
        ok = ok && Word(ref.begin(), ref.end()) == full.digits;
      }
      if (sys.family_tag() == Family::backward_cf) {
        auto ref = oracle::backward_cf(x, 1u << 24);
        ok = ok && Word(ref.begin(), ref.end()) == full.digits;
      }
      if (!ok) ++bad;
    }
    msg << name << ": " << bad << " mismatches (" << digits << " digits); ";
    if (bad) o.pass = false;
  }
  o.detail = msg.str();
  return o;
}

// 2. 2 <= n(k) - (k+p)^d <= p along the schedule.
Outcome criterion_2() {
  Outcome o;
  std::ostringstream msg;
  IfsSystem reg = builtin("regular_cf");
  for (std::uint64_t p : {2u, 3u, 5u}) {
    InsertionSchedule s = build_schedule(Rational(2), p, Rational(1), 9999, select_subsystem(reg, p, {1, 2}));
    std::size_t bad = 0;
    std::uint64_t first = 0;
    for (std::uint64_t k = 1; k <= 10000; ++k) {
      // Independent integer check.
      const long long gap = static_cast<long long>(s.n[k]) - static_cast<long long>((k + p) * (k + p));
      if (gap < 2 || gap > static_cast<long long>(p)) {
        if (!bad) first = k;
        ++bad;
      }
    }
    if (bad != s.gap_violations.size()) {
      o.pass = false;
      msg << "(oracle disagrees with check_gap) ";
    }
    msg << "d=2 p=" << p << ": " << bad << " violations";
    if (bad) msg << " (first k=" << first << ", n(k)-(k+p)^2=" << (s.n[first] - (first + p) * (first + p)) << ")";
    msg << "; ";
    if (bad) o.pass = false;
  }
  AdmissibleScan scan = smallest_admissible_p(Rational(5, 2));
  const std::uint64_t p = *scan.p;
  InsertionSchedule s = build_schedule(Rational(5, 2), p, Rational(1), 999, select_subsystem(reg, p, {1, 2}));
  std::size_t bad = 0;
  std::uint64_t first = 0;
  for (std::uint64_t k = 1; k <= 1000; ++k) {
    // Outward enclosure of n(k) - (k+p)^(5/2).
    OutwardInterval gap = OutwardInterval(Rational(from_u64(s.n[k])), 256) - pow(Rational(from_u64(k + p)), Rational(5, 2), 256);
    bool lower = certainly_less(OutwardInterval(Rational(2), 256), gap) == Certainty::certainly_true;
    bool upper = certainly_less(gap, OutwardInterval(Rational(from_u64(p)), 256)) == Certainty::certainly_true;
    if (!lower || !upper) {
      if (!bad) first = k;
      ++bad;
    }
  }
  msg << "d=5/2 p=" << p << ": " << bad << " violations";
  if (bad) {
    double g = static_cast<double>(s.n[first]) - std::pow(static_cast<double>(first + p), 2.5);
    msg << " (first k=" << first << ", gap=" << g << ")";
  }
  if (bad) o.pass = false;
  o.detail = msg.str();
  return o;
}

// 3. Admissibility of p.
Outcome criterion_3() {
  Outcome o;
  std::ostringstream msg;
  std::size_t rejected = 0;
  for (std::uint64_t p = 2; p <= 64; ++p) {
    if (!admissible_p(Rational(2), p)) ++rejected;
  }
  msg << "d=2 rejects " << rejected << " of p=2..64; ";
  if (rejected) o.pass = false;
  bool two = admissible_p(Rational(11, 10), 2);
  msg << "d=1.1 p=2 " << (two ? "accepted" : "rejected") << "; ";
  if (two) o.pass = false;
  AdmissibleScan scan = smallest_admissible_p(Rational(11, 10));
  if (scan.p) {
    msg << "scan found p=" << *scan.p;
  } else {
    msg << "scan found no admissible p (stopped at p=" << scan.scanned_to << ": " << scan.reason << ")";
    o.pass = false;
  }
  o.detail = msg.str();
  return o;
}

// 4. L_n(x) = floor(alpha tau(n(k))) on [n(k), n(k+1)), k0 <= k <= 1000.
Outcome criterion_4() {
  Outcome o;
  std::ostringstream msg;
  for (const Config& c : configs()) {
    InsertionSchedule s = backward_schedule(c, 1000);
    auto blocks = random_blocks(s.sub, s.blocks_in(s.horizon()) + 1, kSeed);
    MaxDigitReport r = verify_max_digit_law(s, blocks, 0, 1000);
    msg << label(c) << ": k0=" << r.k0 << " " << (r.holds ? "holds" : "FAILS") << " over " << r.positions_checked
        << " positions; ";
    if (!r.holds) o.pass = false;
  }
  o.detail = msg.str();
  return o;
}

// 5. eliminate(synthesize(y)) = y.
Outcome criterion_5() {
  Outcome o;
  std::ostringstream msg;
  for (const Config& c : configs()) {
    InsertionSchedule s = backward_schedule(c, 40);
    std::size_t bad = 0;
    for (std::uint64_t t = 0; t < 1000; ++t) {
      auto blocks = random_blocks(s.sub, s.blocks_in(s.horizon()) + 1, kSeed, t);
      const std::size_t len = 1 + static_cast<std::size_t>(stream_seed(kSeed, t) % s.horizon());
      Word y = eliminate(s, synthesize(s, blocks, len));
      Word expect = flatten(blocks);
      expect.resize(len - s.insertions_in(len));
      if (y != expect) ++bad;
    }
    msg << label(c) << ": " << bad << "/1000 mismatches; ";
    if (bad) o.pass = false;
  }
  o.detail = msg.str();
  return o;
}

// 6. Two similarities of ratio 1/3.
Outcome criterion_6() {
  Outcome o;
  std::vector<MoebiusBranch> maps{MoebiusBranch(1, 0, 0, 3), MoebiusBranch(1, 2, 0, 3)};
  const double target = std::log(2.0) / std::log(3.0);
  double worst = 0;
  for (std::size_t depth = 1; depth <= 12; ++depth) {
    DimensionBracket b = dimension_bracket(maps, depth);
    worst = std::max({worst, std::fabs(b.s_lo - target), std::fabs(b.s_hi - target)});
  }
  o.pass = worst <= 1e-10;
  std::ostringstream msg;
  msg << "max |bracket end - log2/log3| over depths 1..12 = " << worst;
  o.detail = msg.str();
  return o;
}

// 7. Regular CF on {1,2}: nested brackets, narrow at depth 10.
Outcome criterion_7() {
  Outcome o;
  IfsSystem reg = builtin("regular_cf");
  std::vector<MoebiusBranch> maps{reg.branch(1), reg.branch(2)};
  DimensionBracket b6 = dimension_bracket(maps, 6), b8 = dimension_bracket(maps, 8), b10 = dimension_bracket(maps, 10),
                   b12 = dimension_bracket(maps, 12);
  const double slack = 1e-9;
  bool nested = b8.s_lo >= b6.s_lo - slack && b8.s_hi <= b6.s_hi + slack && b10.s_lo >= b8.s_lo - slack &&
                b10.s_hi <= b8.s_hi + slack;
  double width = b10.s_hi - b10.s_lo;
  double mid12 = 0.5 * (b12.s_lo + b12.s_hi);
  bool contains = b10.s_lo <= mid12 && mid12 <= b10.s_hi;
  o.pass = nested && width <= 0.05 && contains;
  std::ostringstream msg;
  msg.precision(12);
  msg << "depth6 [" << b6.s_lo << ", " << b6.s_hi << "] depth8 [" << b8.s_lo << ", " << b8.s_hi << "] depth10 ["
      << b10.s_lo << ", " << b10.s_hi << "] width " << width << ", depth12 midpoint " << mid12
      << (nested ? "; nested" : "; NOT nested") << (contains ? "" : "; midpoint outside");
  o.detail = msg.str();
  return o;
}

// 8. Subsystem invariants over random configurations.
Outcome criterion_8() {
  Outcome o;
  std::mt19937_64 rng(kSeed);
  const char* names[] = {"regular_cf", "backward_cf", "even_cf"};
  std::ostringstream msg;
  std::size_t failures = 0, words = 0;
  for (int t = 0; t < 20; ++t) {
    IfsSystem sys = builtin(names[rng() % 3]);
    const std::size_t p = 2 + rng() % 2;
    const Digit lo = sys.indices().min() + rng() % 4;
    const Digit hi = lo + 1 + rng() % 3;
    std::string what = sys.name() + " p=" + std::to_string(p) + " window " + std::to_string(lo) + ".." +
                       std::to_string(hi);
    try {
      Subsystem sub = select_subsystem(sys, p, {lo, hi});
      words += sub.size();
      bool ok = true;
      Rational min_gap = -1;
      for (std::size_t i = 0; i < sub.size(); ++i) {
        // (b) last letter.
        ok = ok && !sys.is_parabolic(sub.words[i].back());
        // (a) pairwise disjoint closed intervals, endpoints recomputed from the word.
        FundInterval ji = fundamental_interval(sys, sub.words[i]);
        for (std::size_t j = 0; j < sub.size(); ++j) {
          if (i == j) continue;
          FundInterval jj = fundamental_interval(sys, sub.words[j]);
          ok = ok && (ji.hi < jj.lo || jj.hi < ji.lo);
          Rational gap = ji.hi < jj.lo ? jj.lo - ji.hi : ji.lo - jj.hi;
          if (min_gap < 0 || gap < min_gap) min_gap = gap;
        }
        // (c) max|phi_w'| < e^{-gamma p}, certified.
        MoebiusBranch m = compose_word(sys, sub.words[i]);
        OutwardInterval bound =
            exp(-OutwardInterval(sub.gamma, 256) * OutwardInterval(Rational(from_u64(p)), 256));
        ok = ok && certainly_less(OutwardInterval(m.max_derivative(), 256), bound) == Certainty::certainly_true;
      }
      ok = ok && sub.gamma > 0;
      if (sub.size() >= 2) ok = ok && sub.K && *sub.K > 0 && *sub.K == min_gap;
      if (!ok) {
        ++failures;
        msg << "FAIL " << what << "; ";
      }
    } catch (const std::exception& e) {
      ++failures;
      msg << "ERROR " << what << ": " << e.what() << "; ";
    }
  }
  o.pass = failures == 0;
  msg << "20 configurations, " << words << " words, " << failures << " failures";
  o.detail = msg.str();
  return o;
}

// 9. Galambos law.
Outcome criterion_9() {
  GalambosResult g = galambos_experiment(10000, 2000, kSeed);
  Outcome o;
  o.pass = g.ks <= 0.08;
  o.detail = "n=10000, 2000 samples, KS = " + std::to_string(g.ks) + " (bound 0.08)";
  return o;
}

// 10. log L_n / log n.
Outcome criterion_10() {
  LogRatioResult r = log_ratio_experiment(100000, 200, kSeed);
  Outcome o;
  o.pass = r.median >= 0.85 && r.median <= 1.15;
  o.detail = "n=100000, 200 samples, median = " + std::to_string(r.median) + " (range [0.85, 1.15])";
  return o;
}

// 11. Backward CF: the digit 2 dominates.
Outcome criterion_11() {
  FrequencyResult f = frequency_experiment(Family::backward_cf, 2, 100000, 50, kSeed);
  Outcome o;
  o.pass = f.mean >= 0.85;
  o.detail = "n=100000, 50 samples, mean freq(2) = " + std::to_string(f.mean) + " (bound 0.85)";
  return o;
}

// 12. |J| >= |Jbar|^{1+eps} from some k1 <= 50 through k = 300.
Outcome criterion_12() {
  Outcome o;
  std::ostringstream msg;
  for (const Config& c : configs()) {
    InsertionSchedule s = backward_schedule(c, 300);
    CompareReport r = verify_compare_lemma(s, Rational(1, 2), 4, 300, kSeed);
    std::uint64_t tested = 0, failures = 0;
    for (const CompareRow& row : r.rows) {
      tested += row.tested;
      failures += row.failures;
    }
    msg << label(c) << ": k1=" << (r.k1 ? std::to_string(*r.k1) : "none") << " (" << tested << " tests, " << failures
        << " failures, " << r.exact_fallbacks << " exact fallbacks); ";
    if (!r.k1 || *r.k1 > 50) o.pass = false;
  }
  o.detail = msg.str();
  return o;
}

// 13. Hoelder bound with 2 C_est and exact K.
Outcome criterion_13() {
  Outcome o;
  std::ostringstream msg;
  IfsSystem bw = builtin("backward_cf");
  A2Estimate a2 = estimate_A2_constant(bw, 3000, 1, 12, kSeed, {2, 8});
  msg << "C_est=" << to_string(a2.C_est) << " (" << to_double(a2.C_est) << "); ";
  const std::uint64_t k_hi = 40;
  for (const Config& c : configs()) {
    InsertionSchedule s = backward_schedule(c, 300);
    CompareReport cmp = verify_compare_lemma(s, Rational(1, 2), 2, k_hi, kSeed);
    if (!cmp.k1) {
      msg << label(c) << ": no k1; ";
      o.pass = false;
      continue;
    }
    HolderReport h = verify_holder(s, Rational(1, 2), a2.C_est, *cmp.k1, 1000, kSeed, k_hi);
    msg << label(c) << ": " << (h.holds() ? "holds" : "FAILS") << " (gap " << h.gap_failures << "/" << h.gap_checked
        << ", lemma " << h.lemma_failures << "/" << h.lemma_checked << ", bound " << h.holder_failures << "/"
        << h.holder_checked << "); ";
    if (!h.holds() || h.pairs != 1000) o.pass = false;
  }
  o.detail = msg.str();
  return o;
}

// 14. Composition and chain rule on random matrices.
Outcome criterion_14() {
  std::mt19937_64 rng(kSeed);
  std::uniform_int_distribution<long> e(0, 60);
  auto random_branch = [&]() {
    for (;;) {
      long a = e(rng), b = e(rng), c = e(rng), d = e(rng);
      if (rng() % 4 == 0) a = -a;
      if (d <= 0 || c + d <= 0 || b > d || a + b < 0 || a + b > c + d || a * d == b * c) continue;
      return MoebiusBranch(a, b, c, d);
    }
  };
  std::size_t bad = 0;
  for (int t = 0; t < 10000; ++t) {
    MoebiusBranch f = random_branch(), g = random_branch(), h = random_branch();
    MoebiusBranch fg = compose(f, g);
    oracle::Mat mf{f.a(), f.b(), f.c(), f.d()}, mg{g.a(), g.b(), g.c(), g.d()};
    oracle::Mat prod = oracle::mul(mf, mg);
    Rational x = oracle::random_unit_rational(rng, 40);
    bool ok = oracle::same_map({fg.a(), fg.b(), fg.c(), fg.d()}, prod);
    ok = ok && fg.apply(x) == f.apply(g.apply(x)) && fg.apply(x) == oracle::apply(prod, x);
    ok = ok && fg.derivative(x) == f.derivative(g.apply(x)) * g.derivative(x);
    ok = ok && compose(fg, h) == compose(f, compose(g, h));
    if (!ok) ++bad;
  }
  Outcome o;
  o.pass = bad == 0;
  o.detail = "10000 random triples, " + std::to_string(bad) + " mismatches";
  return o;
}

const std::vector<std::pair<std::string, std::function<Outcome()>>>& criteria() {
  static const std::vector<std::pair<std::string, std::function<Outcome()>>> all{
      {"exact coding round trip", criterion_1},
      {"schedule window bound", criterion_2},
      {"admissibility of p", criterion_3},
      {"max-digit law", criterion_4},
      {"elimination round trip", criterion_5},
      {"Moran closed form", criterion_6},
      {"bracket stability", criterion_7},
      {"subsystem invariants", criterion_8},
      {"Galambos law", criterion_9},
      {"log-ratio law", criterion_10},
      {"backward-CF digit dominance", criterion_11},
      {"comparison lemma", criterion_12},
      {"Hoelder bound", criterion_13},
      {"chain rule and composition", criterion_14},
  };
  return all;
}

bool run_one(std::size_t n) {
  const auto& [name, fn] = criteria()[n - 1];
  auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = fn();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << "criterion " << n << " (" << name << "): " << (o.pass ? "PASS" : "FAIL") << " [" << secs << " s] "
            << o.detail << std::endl;
  return o.pass;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::size_t> which;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      which.push_back(std::stoul(argv[++i]));
    } else {
      std::cerr << "usage: parifs_acceptance [--criterion N]...\n";
      return 2;
    }
  }
  if (which.empty()) {
    for (std::size_t n = 1; n <= criteria().size(); ++n) which.push_back(n);
  }
  bool all = true;
  for (std::size_t n : which) {
    if (n < 1 || n > criteria().size()) {
      std::cerr << "no criterion " << n << "\n";
      return 2;
    }
    all = run_one(n) && all;
  }
  return all ? 0 : 1;
}
