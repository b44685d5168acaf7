#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "parifs/cf_expansion.hpp"
#include "parifs/digit_stats.hpp"
#include "parifs/errors.hpp"
#include "parifs/insertion.hpp"
#include "parifs/parallel.hpp"

namespace parifs {

namespace {

// Unreduced running product φ_{a_1} ∘ ⋯ ∘ φ_{a_n}. Only right multiplication
// by single branches, which keeps each step linear in the operand size.
struct Mat {
  BigInt a = 1, b = 0, c = 0, d = 1;
  BigInt det = 1;

  void push(const MoebiusBranch& m) {
    BigInt na = a * m.a() + b * m.c();
    BigInt nb = a * m.b() + b * m.d();
    BigInt nc = c * m.a() + d * m.c();
    BigInt nd = c * m.b() + d * m.d();
    a.swap(na);
    b.swap(nb);
    c.swap(nc);
    d.swap(nd);
    det *= m.det();
  }

  // |φ([0,1])| = |det| / |d (c + d)|
  Rational diameter() const {
    Rational r(abs(det), abs(BigInt(d * (c + d))));
    r.canonicalize();
    return r;
  }
  double log_diameter() const {
    return log_double(BigInt(abs(det))) - log_double(BigInt(abs(d))) - log_double(BigInt(abs(BigInt(c + d))));
  }
  Rational at_half() const {
    Rational r(BigInt(a + 2 * b), BigInt(c + 2 * d));
    r.canonicalize();
    return r;
  }
};

// Branch cache for one verification run.
class Branches {
 public:
  explicit Branches(const IfsSystem& sys) : sys_(sys) {}
  const MoebiusBranch& operator()(Digit i) {
    auto it = cache_.find(i);
    if (it == cache_.end()) it = cache_.emplace(i, sys_.branch(i)).first;
    return it->second;
  }

 private:
  const IfsSystem& sys_;
  std::map<Digit, MoebiusBranch> cache_;
};

std::uint64_t ulong_of(const BigInt& v, const char* what) {
  if (!mpz_fits_ulong_p(v.get_mpz_t())) throw InputError(std::string(what) + " is too large");
  return v.get_ui();
}

}  // namespace

MaxDigitReport verify_max_digit_law(const InsertionSchedule& s, const std::vector<Word>& blocks, std::uint64_t k_from,
                                    std::uint64_t k_to) {
  if (s.bypass) throw InputError("alpha = 0 inserts no digits; the max-digit law does not apply");
  if (k_to > s.k_max()) throw InputError("k_to exceeds the schedule's k_max");
  MaxDigitReport rep;
  rep.k_to = k_to;
  const Digit M = s.sub.max_letter;
  std::uint64_t k0 = 1;
  while (k0 <= k_to && s.inserted[k0] < M) ++k0;
  if (k0 > k_to) {
    throw InputError("no k <= " + std::to_string(k_to) + " inserts a digit >= " + std::to_string(M) +
                     " (largest letter of W_p)");
  }
  rep.k0 = k0;
  rep.k_from = std::max({k0, k_from, std::uint64_t{1}});
  if (rep.k_from > k_to) return rep;

  const std::uint64_t len = s.n[k_to + 1] - 1;
  const Word x = synthesize(s, blocks, len);
  Digit L = 0;
  std::uint64_t k = 0;
  bool first = true;
  for (std::uint64_t pos = 1; pos <= len; ++pos) {
    L = std::max(L, x[pos - 1]);
    while (k + 1 < s.n.size() && s.n[k + 1] <= pos) ++k;
    if (k < rep.k_from) continue;
    ++rep.positions_checked;
    if (L != s.inserted[k]) {
      rep.holds = false;
      rep.fail_n = pos;
      rep.fail_observed = L;
      rep.fail_expected = s.inserted[k];
      break;
    }
    const double r = static_cast<double>(L) / tau_double(static_cast<double>(pos));
    rep.ratio_min = first ? r : std::min(rep.ratio_min, r);
    rep.ratio_max = first ? r : std::max(rep.ratio_max, r);
    first = false;
  }
  const double last = static_cast<double>(s.inserted[k_to]);
  rep.last_ratio_lo = last / tau_double(static_cast<double>(s.n[k_to + 1] - 1));
  rep.last_ratio_hi = last / tau_double(static_cast<double>(std::max<std::uint64_t>(s.n[k_to], 3)));
  return rep;
}

CompareReport verify_compare_lemma(const InsertionSchedule& s, const Rational& eps, std::size_t samples,
                                   std::uint64_t k_to, std::uint64_t seed) {
  if (eps <= 0) throw InputError("eps must be positive");
  if (k_to > s.k_max()) throw InputError("k_to exceeds the schedule's k_max");
  if (samples < 1) throw InputError("compare lemma needs at least one sample");
  const std::uint64_t u = ulong_of(eps.get_num(), "numerator of eps");
  const std::uint64_t v = ulong_of(eps.get_den(), "denominator of eps");
  const double one_plus = 1.0 + to_double(eps);
  const std::uint64_t len = s.n[k_to + 1] - 1;
  const std::uint64_t n_blocks = s.blocks_in(len) + 1;

  std::vector<std::vector<CompareRow>> per_sample(samples);
  std::vector<std::uint64_t> fallbacks(samples, 0);
  parallel_for(samples, [&](std::size_t smp) {
    Branches branch(s.sub.base);
    const Word x = synthesize(s, random_blocks(s.sub, n_blocks, seed, smp), len);
    std::vector<CompareRow> rows(k_to + 1);
    for (std::uint64_t k = 0; k <= k_to; ++k) rows[k].k = k;
    Mat full;
    Mat bar;
    std::uint64_t k = 0;
    for (std::uint64_t pos = 1; pos <= len; ++pos) {
      const MoebiusBranch& m = branch(x[pos - 1]);
      full.push(m);
      const bool inserted = !s.bypass && k + 1 < s.n.size() && s.n[k + 1] == pos;
      if (inserted) {
        ++k;
      } else {
        bar.push(m);
      }
      if ((pos - s.n[k]) % s.p != 0) continue;
      // pos ∈ B_k
      const double lj = full.log_diameter();
      const double lb = bar.log_diameter();
      const double margin = lj - one_plus * lb;
      // log_double is accurate to a few ulps of the magnitude; decide exactly inside that band.
      const double band = 1e-9 * (1.0 + std::fabs(lj) + std::fabs(lb));
      bool holds = margin >= 0;
      if (std::fabs(margin) <= band) {
        ++fallbacks[smp];
        // |J|^v >= |J̄|^{u+v}  <=>  |det|^v · D̄^{u+v} >= |det̄|^{u+v} · D^v, D = |d (c+d)|
        const BigInt D = abs(BigInt(full.d * (full.c + full.d)));
        const BigInt Db = abs(BigInt(bar.d * (bar.c + bar.d)));
        holds = pow(BigInt(abs(full.det)), v) * pow(Db, u + v) >= pow(BigInt(abs(bar.det)), u + v) * pow(D, v);
      }
      CompareRow& row = rows[k];
      if (row.tested == 0 || margin < row.worst_margin) row.worst_margin = margin;
      if (pos == s.n[k]) {
        row.log_J = lj;
        row.log_Jbar = lb;
      }
      ++row.tested;
      if (!holds) ++row.failures;
    }
    per_sample[smp] = std::move(rows);
  });

  CompareReport rep;
  rep.eps = eps;
  rep.samples = samples;
  rep.rows = per_sample[0];
  for (std::size_t smp = 1; smp < samples; ++smp) {
    for (std::uint64_t k = 0; k <= k_to; ++k) {
      const CompareRow& r = per_sample[smp][k];
      CompareRow& t = rep.rows[k];
      if (r.tested > 0 && (t.tested == 0 || r.worst_margin < t.worst_margin)) t.worst_margin = r.worst_margin;
      t.tested += r.tested;
      t.failures += r.failures;
    }
  }
  for (std::uint64_t f : fallbacks) rep.exact_fallbacks += f;
  for (std::uint64_t k = k_to + 1; k-- > 0;) {
    if (rep.rows[k].failures > 0) break;
    if (rep.rows[k].tested > 0) rep.k1 = k;
  }
  return rep;
}

HolderReport verify_holder(const InsertionSchedule& s, const Rational& eps, const Rational& C_est, std::uint64_t k1,
                           std::size_t pair_samples, std::uint64_t seed, std::uint64_t k_hi) {
  if (eps <= 0) throw InputError("eps must be positive");
  if (C_est < 1) throw InputError("C_est must be at least 1");
  if (s.sub.size() < 2) throw InputError("Hölder check needs at least two subsystem words");
  if (s.k_max() < 1 || k_hi > s.k_max() - 1) throw InputError("k_hi must be below the schedule's k_max");
  if (k1 > s.k_max()) throw InputError("k1 exceeds the schedule's k_max");
  const std::uint64_t u = ulong_of(eps.get_num(), "numerator of eps");
  const std::uint64_t v = ulong_of(eps.get_den(), "denominator of eps");

  HolderReport rep;
  rep.C_est = C_est;
  rep.C_used = 2 * C_est;
  rep.K = gap_constant(s.sub);
  rep.k1 = k1;
  rep.pairs = pair_samples;
  const Rational& C = rep.C_used;
  const Rational& K = rep.K;
  const std::uint64_t p = s.p;

  struct Outcome {
    HolderPair row;
    Rational dist;
  };
  std::vector<Outcome> outcomes(pair_samples);
  parallel_for(pair_samples, [&](std::size_t i) {
    std::mt19937_64 rng(stream_seed(seed, i));
    Branches branch(s.sub.base);
    const std::uint64_t k = std::uniform_int_distribution<std::uint64_t>(0, k_hi)(rng);
    const std::uint64_t m = std::uniform_int_distribution<std::uint64_t>(0, s.m[k] - 1)(rng);
    const std::uint64_t P = s.n[k] + m * p;
    const std::uint64_t depth = P + 3 * p;
    const std::size_t j = static_cast<std::size_t>((P - (s.bypass ? 0 : k)) / p);
    const std::size_t n_blocks = static_cast<std::size_t>(s.blocks_in(depth) + 1);

    std::uniform_int_distribution<std::size_t> pick(0, s.sub.size() - 1);
    std::vector<Word> A(n_blocks);
    for (auto& w : A) w = s.sub.words[pick(rng)];
    std::vector<Word> B = A;
    do {
      B[j] = s.sub.words[pick(rng)];
    } while (B[j] == A[j]);
    for (std::size_t t = j + 1; t < n_blocks; ++t) B[t] = s.sub.words[pick(rng)];

    const Word xd = synthesize(s, A, depth);
    const Word yd = synthesize(s, B, depth);
    const Word hxd = eliminate(s, xd);
    const Word hyd = eliminate(s, yd);

    std::uint64_t sep = 0;
    while (sep < depth && xd[sep] == yd[sep]) ++sep;

    Mat mx, my, mhx, mhy;
    Rational prefix_diam;
    for (std::uint64_t pos = 1; pos <= depth; ++pos) {
      mx.push(branch(xd[pos - 1]));
      my.push(branch(yd[pos - 1]));
      if (pos == P) prefix_diam = mx.diameter();
    }
    if (P == 0) prefix_diam = 1;
    for (Digit a : hxd) mhx.push(branch(a));
    for (Digit a : hyd) mhy.push(branch(a));
    const Rational dist = abs(Rational(mx.at_half() - my.at_half()));
    const Rational hdist = abs(Rational(mhx.at_half() - mhy.at_half()));

    HolderPair& row = outcomes[i].row;
    outcomes[i].dist = dist;
    row.k = k;
    row.m = m;
    row.separation = sep;
    row.log_dist = log_double(dist);
    row.log_hdist = hdist > 0 ? log_double(hdist) : -HUGE_VAL;
    if (sep < P || sep >= P + p) throw VerificationFailure("pair diverged outside its divergent block");

    if (sep < p) {
      row.regime = "gap";
      row.bound_ok = dist >= K;
      return;
    }
    row.lemma_ok = prefix_diam * K <= C * dist;
    if (sep >= s.n[k1]) {
      row.regime = "holder";
      // |Δh| <= (C |x-y| / K)^{v/(u+v)}  <=>  |Δh|^{u+v} <= (C |x-y| / K)^v
      row.bound_ok = pow(hdist, u + v) <= pow(Rational(C * dist / K), v);
    } else {
      row.regime = "k1_regime";
    }
  });

  for (Outcome& o : outcomes) {
    const HolderPair& r = o.row;
    if (r.regime == "gap") {
      ++rep.gap_checked;
      if (!r.bound_ok) ++rep.gap_failures;
    } else {
      ++rep.lemma_checked;
      if (!r.lemma_ok) ++rep.lemma_failures;
      if (r.regime == "holder") {
        ++rep.holder_checked;
        if (!r.bound_ok) ++rep.holder_failures;
      } else {
        ++rep.k1_regime;
      }
    }
    if (r.regime != "holder" && (!rep.K1 || o.dist < *rep.K1)) rep.K1 = o.dist;
    rep.rows.push_back(std::move(o.row));
  }
  return rep;
}

A2Estimate estimate_A2_constant(const IfsSystem& sys, std::size_t word_samples, std::size_t min_len,
                                std::size_t max_len, std::uint64_t seed, const IndexWindow& window) {
  if (min_len < 1 || max_len < min_len) throw InputError("word lengths must satisfy 1 <= min_len <= max_len");
  const std::vector<Digit> letters = sys.window(window);
  const bool any_regular = std::any_of(letters.begin(), letters.end(), [&](Digit i) { return !sys.is_parabolic(i); });
  if (!any_regular && letters.size() < 2) throw InputError("window admits no word of the (A2) class");

  std::mt19937_64 rng(stream_seed(seed, 0));
  std::uniform_int_distribution<std::size_t> pick(0, letters.size() - 1);
  std::uniform_int_distribution<std::size_t> length(min_len, max_len);
  A2Estimate out{Rational(1), {}, word_samples};
  for (std::size_t i = 0; i < word_samples; ++i) {
    Word w(length(rng));
    for (auto& a : w) a = letters[pick(rng)];
    // (A2) class: last letter non-parabolic, or different from the letter before it.
    auto admissible = [&] {
      if (!sys.is_parabolic(w.back())) return true;
      return w.size() >= 2 && w[w.size() - 2] != w.back();
    };
    while (!admissible()) w.back() = letters[pick(rng)];
    Rational r = compose_word(sys, w).distortion_ratio();
    if (r > out.C_est) {
      out.C_est = r;
      out.witness = w;
    }
  }
  return out;
}

DeltaFeasibility delta_feasibility(const InsertionSchedule& s, const Rational& C, double gamma, const Rational& eps,
                                   const DecayConstants& decay) {
  if (C < 1) throw InputError("C must be at least 1");
  if (gamma <= 0) throw InputError("gamma must be positive");
  const double e = to_double(eps);
  const double logC = log_double(C);
  DeltaFeasibility out;
  out.delta = logC > 0 ? e * gamma / (4 * logC + e * gamma) : 0.5;
  const double d = to_double(s.d);
  const double logc = log_double(decay.c);
  const double p = static_cast<double>(s.p);

  auto first_stable = [&](auto holds) -> std::optional<std::uint64_t> {
    std::optional<std::uint64_t> from;
    for (std::uint64_t k = s.k_max(); k >= 1; --k) {
      if (!holds(k, static_cast<double>(s.n[k]))) break;
      from = k;
    }
    return from;
  };
  out.k_linear = first_stable([&](std::uint64_t k, double n) { return static_cast<double>(k + 1) <= out.delta * n; });
  out.k_decay = first_stable([&](std::uint64_t, double n) {
    return 2 * std::pow(n, 1 / d) * (d * std::log(n) - logc) <= e * gamma * (1 - out.delta) * n / 4;
  });
  out.k_blocks = first_stable([&](std::uint64_t k, double n) {
    const double rest = n - static_cast<double>(k);
    return p * std::floor(rest / p) >= rest / 2;
  });
  return out;
}

}  // namespace parifs
