#include "parifs/subsystem.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "parifs/cf_expansion.hpp"
#include "parifs/errors.hpp"
#include "parifs/parallel.hpp"

namespace parifs {

std::optional<std::size_t> Subsystem::find(const Word& w) const {
  auto it = std::find(words.begin(), words.end(), w);
  if (it == words.end()) return std::nullopt;
  return static_cast<std::size_t>(it - words.begin());
}

namespace {

struct Candidate {
  Word word;
  MoebiusBranch map;
  FundInterval interval;
};

bool by_left_endpoint(const Candidate& x, const Candidate& y) {
  if (x.interval.lo != y.interval.lo) return x.interval.lo < y.interval.lo;
  return x.word < y.word;
}

// γ strictly below -(1/p) log m: a dyadic with 60 fractional bits under a certified enclosure.
Rational certified_gamma(const Rational& m, std::size_t p) {
  return decide<Rational>(PrecisionPolicy{}, "subsystem contraction exponent",
                          [&](mpfr_prec_t prec) -> std::optional<Rational> {
                            OutwardInterval g = -log(OutwardInterval(m, prec)) /
                                                OutwardInterval(Rational(from_u64(p)), prec);
                            if (!g.certainly_positive()) return std::nullopt;
                            Rational lo;
                            mpfr_get_q(lo.get_mpq_t(), g.lo());
                            const BigInt scale = BigInt(1) << 60;
                            BigInt ticks = floor(lo * scale) - 1;
                            if (ticks <= 0) return std::nullopt;
                            Rational out(ticks, scale);
                            out.canonicalize();
                            return out;
                          });
}

Subsystem assemble(const IfsSystem& sys, std::vector<Candidate> kept) {
  if (kept.empty()) throw InputError("subsystem is empty");
  std::sort(kept.begin(), kept.end(), by_left_endpoint);
  Subsystem sub{sys, kept.front().word.size(), {}, {}, {}, Rational(0), Rational(0), std::nullopt, 0};
  for (std::size_t k = 0; k < kept.size(); ++k) {
    const Candidate& c = kept[k];
    if (c.word.size() != sub.p) throw InputError("subsystem words must share one length");
    if (sys.is_parabolic(c.word.back())) {
      throw InputError("word " + to_string(c.word) + " ends in the parabolic index " + std::to_string(c.word.back()));
    }
    if (k > 0) {
      const FundInterval& prev = kept[k - 1].interval;
      if (c.interval.lo <= prev.hi) {
        throw InputError("fundamental intervals of " + to_string(kept[k - 1].word) + " and " + to_string(c.word) +
                         " are not disjoint");
      }
      Rational gap = c.interval.lo - prev.hi;
      if (!sub.K || gap < *sub.K) sub.K = gap;
    }
    sub.max_derivative = std::max(sub.max_derivative, c.map.max_derivative());
    sub.max_letter = std::max(sub.max_letter, *std::max_element(c.word.begin(), c.word.end()));
    sub.words.push_back(c.word);
    sub.composed.push_back(c.map);
    sub.intervals.push_back(c.interval);
  }
  if (sub.max_derivative >= 1) {
    throw VerificationFailure("subsystem word is not contracting: max|phi'| = " + to_string(sub.max_derivative));
  }
  sub.gamma = certified_gamma(sub.max_derivative, sub.p);
  return sub;
}

}  // namespace

Subsystem make_subsystem(const IfsSystem& sys, std::vector<Word> words) {
  std::vector<Candidate> cands;
  cands.reserve(words.size());
  for (Word& w : words) {
    if (w.empty()) throw InputError("subsystem words must be non-empty");
    MoebiusBranch m = compose_word(sys, w);
    Rational a = m.apply(Rational(0));
    Rational b = m.apply(Rational(1));
    if (a > b) std::swap(a, b);
    cands.push_back({w, m, FundInterval{std::move(w), a, b}});
  }
  return assemble(sys, std::move(cands));
}

Subsystem select_subsystem(const IfsSystem& sys, std::size_t p, const IndexWindow& window, std::size_t max_words,
                           std::size_t enumeration_cap) {
  if (p < 2) throw InputError("select_subsystem needs p >= 2");
  std::vector<Digit> letters = sys.window(window);
  std::vector<MoebiusBranch> maps;
  for (Digit i : letters) maps.push_back(sys.branch(i));

  std::vector<Candidate> cands;
  for_each_word(maps, letters, p, enumeration_cap, [&](const Word& w, const MoebiusBranch& m) {
    if (sys.is_parabolic(w.back())) return;
    Rational a = m.apply(Rational(0));
    Rational b = m.apply(Rational(1));
    if (a > b) std::swap(a, b);
    cands.push_back({w, m, FundInterval{w, a, b}});
  });
  if (cands.empty()) {
    throw InputError("window " + std::to_string(window.lo) + ".." + std::to_string(window.hi) +
                     " has no non-parabolic last letter");
  }

  std::sort(cands.begin(), cands.end(), by_left_endpoint);
  std::vector<Candidate> kept;
  for (Candidate& c : cands) {
    if (!kept.empty() && c.interval.lo <= kept.back().interval.hi) continue;
    kept.push_back(std::move(c));
  }

  if (max_words > 0 && kept.size() > max_words) {
    std::vector<Rational> spread;
    for (const Candidate& c : kept) spread.push_back(c.map.max_derivative());
    std::vector<std::size_t> order(kept.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return spread[x] > spread[y]; });
    std::vector<Candidate> trimmed;
    for (std::size_t k = 0; k < max_words; ++k) trimmed.push_back(std::move(kept[order[k]]));
    kept = std::move(trimmed);
  }
  return assemble(sys, std::move(kept));
}

OutwardInterval gamma_of(const Subsystem& sub, mpfr_prec_t prec) {
  return -log(OutwardInterval(sub.max_derivative, prec)) / OutwardInterval(Rational(from_u64(sub.p)), prec);
}

Rational gap_constant(const Subsystem& sub) {
  if (sub.size() < 2) throw InputError("gap constant needs at least two words");
  Rational best = sub.intervals[1].lo - sub.intervals[0].hi;
  for (std::size_t k = 1; k < sub.size(); ++k) {
    Rational gap = sub.intervals[k].lo - sub.intervals[k - 1].hi;
    if (gap <= 0) {
      throw VerificationFailure("intervals of " + to_string(sub.words[k - 1]) + " and " + to_string(sub.words[k]) +
                                " touch");
    }
    best = std::min(best, gap);
  }
  return best;
}

namespace {

// Σ exp(s·ℓ_i) with Neumaier compensation, in index order.
double pressure_sum(const std::vector<double>& logs, double s) {
  double sum = 0;
  double comp = 0;
  for (double l : logs) {
    double t = std::exp(s * l);
    double next = sum + t;
    comp += std::fabs(sum) >= std::fabs(t) ? (sum - next) + t : (t - next) + sum;
    sum = next;
  }
  return sum + comp;
}

// Root of pressure_sum(logs, s) = 1, bracketed to kBisectionTolerance; returns the requested end.
double pressure_root(const std::vector<double>& logs, bool upper) {
  for (double l : logs) {
    if (!(l < 0)) throw InputError("dimension bracket needs strictly contracting cylinders");
  }
  double lo = 0;
  double hi = 1;
  while (pressure_sum(logs, hi) > 1) {
    lo = hi;
    hi *= 2;
    if (hi > 1e9) throw InputError("dimension bracket: no root below 1e9");
  }
  while (hi - lo > kBisectionTolerance) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (pressure_sum(logs, mid) > 1 ? lo : hi) = mid;
  }
  return upper ? hi : lo;
}

}  // namespace

DimensionBracket dimension_bracket(const std::vector<MoebiusBranch>& maps, std::size_t depth,
                                   std::size_t enumeration_cap) {
  if (depth < 1) throw InputError("dimension bracket needs depth >= 1");
  if (maps.empty()) throw InputError("dimension bracket needs at least one map");
  DimensionBracket out;
  out.depth = depth;
  if (maps.size() == 1) {
    out.words_enumerated = 1;
    return out;
  }
  double count = std::pow(static_cast<double>(maps.size()), static_cast<double>(depth));
  if (count > static_cast<double>(enumeration_cap)) {
    throw InputError("enumeration of " + std::to_string(maps.size()) + "^" + std::to_string(depth) +
                     " words exceeds the cap " + std::to_string(enumeration_cap));
  }

  std::vector<Digit> labels(maps.size());
  std::iota(labels.begin(), labels.end(), Digit{0});
  std::vector<std::vector<double>> lo_parts(maps.size());
  std::vector<std::vector<double>> hi_parts(maps.size());
  parallel_for(maps.size(), [&](std::size_t first) {
    for_each_word(maps, labels, depth - 1, enumeration_cap, [&](const Word&, const MoebiusBranch& tail) {
      MoebiusBranch m = compose(maps[first], tail);
      // |φ'| = |det| / (c x + d)^2 is extremal at the endpoints x = 0, 1.
      double ldet = log_double(m.abs_det());
      BigInt e0 = abs(m.d());
      BigInt e1 = abs(BigInt(m.c() + m.d()));
      const BigInt& big = e0 > e1 ? e0 : e1;
      const BigInt& small = e0 > e1 ? e1 : e0;
      lo_parts[first].push_back(ldet - 2 * log_double(big));
      hi_parts[first].push_back(ldet - 2 * log_double(small));
    });
  });
  std::vector<double> lmin;
  std::vector<double> lmax;
  for (std::size_t k = 0; k < maps.size(); ++k) {
    lmin.insert(lmin.end(), lo_parts[k].begin(), lo_parts[k].end());
    lmax.insert(lmax.end(), hi_parts[k].begin(), hi_parts[k].end());
  }
  out.words_enumerated = lmin.size();
  out.s_lo = pressure_root(lmin, false);
  out.s_hi = pressure_root(lmax, true);
  return out;
}

DimensionBracket dimension_bracket(const Subsystem& sub, std::size_t depth, std::size_t enumeration_cap) {
  return dimension_bracket(sub.composed, depth, enumeration_cap);
}

double bernoulli_dimension_estimate(const Subsystem& sub, std::size_t sample_depth, std::size_t samples,
                                    std::uint64_t seed) {
  if (sub.size() <= 1) return 0;
  if (sample_depth < 1 || samples < 1) throw InputError("bernoulli estimate needs sample_depth, samples >= 1");
  std::vector<double> lyap(samples);
  parallel_for(samples, [&](std::size_t s) {
    std::mt19937_64 rng(stream_seed(seed, s));
    std::uniform_int_distribution<std::size_t> pick(0, sub.size() - 1);
    std::uniform_int_distribution<std::uint64_t> point(1, (std::uint64_t{1} << 32) - 1);
    MoebiusBranch m = MoebiusBranch::identity();
    for (std::size_t j = 0; j < sample_depth; ++j) m.then_inner(sub.composed[pick(rng)]);
    Rational x(from_u64(point(rng)), BigInt(1) << 32);
    x.canonicalize();
    lyap[s] = -log_double(m.derivative(x));
  });
  double sum = 0;
  for (double v : lyap) sum += v;
  const double chi = sum / static_cast<double>(samples) / static_cast<double>(sub.p * sample_depth);
  const double h = std::log(static_cast<double>(sub.size())) / static_cast<double>(sub.p);
  return h / chi;
}

}  // namespace parifs
