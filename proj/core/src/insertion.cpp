#include "parifs/insertion.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "parifs/cf_expansion.hpp"
#include "parifs/digit_stats.hpp"
#include "parifs/errors.hpp"

namespace parifs {

namespace {

unsigned long small_exponent(const BigInt& e, const char* what) {
  if (!mpz_fits_ulong_p(e.get_mpz_t())) throw InputError(std::string(what) + " is too large");
  return e.get_ui();
}

void require_exponent(const Rational& d) {
  if (d <= 1) throw InputError("d must exceed 1, got " + to_string(d));
}

// floor(base^d) for d = u/w, exactly.
BigInt floor_power(std::uint64_t base, const Rational& d) {
  BigInt x = pow(from_u64(base), small_exponent(d.get_num(), "numerator of d"));
  BigInt r;
  mpz_root(r.get_mpz_t(), x.get_mpz_t(), small_exponent(d.get_den(), "denominator of d"));
  return r;
}

// (k+p+1)^d + 2p + 1 < (k+p+2)^d
bool gap_inequality(const Rational& d, std::uint64_t p, std::uint64_t k, const PrecisionPolicy& policy) {
  const Rational lo_base(from_u64(k + p + 1));
  const Rational hi_base(from_u64(k + p + 2));
  const Rational slack(from_u64(2 * p + 1));
  if (d.get_den() == 1) {
    const unsigned long e = small_exponent(d.get_num(), "d");
    return pow(lo_base, e) + slack < pow(hi_base, e);
  }
  return decide<bool>(policy, "admissibility at p=" + std::to_string(p) + ", k=" + std::to_string(k),
                      [&](mpfr_prec_t prec) -> std::optional<bool> {
                        OutwardInterval lhs = pow(lo_base, d, prec) + OutwardInterval(slack, prec);
                        OutwardInterval rhs = pow(hi_base, d, prec);
                        switch (certainly_less(lhs, rhs)) {
                          case Certainty::certainly_true:
                            return true;
                          case Certainty::certainly_false:
                            return false;
                          case Certainty::undecided:
                            break;
                        }
                        return std::nullopt;
                      });
}

}  // namespace

bool admissible_p(const Rational& d, std::uint64_t p, const PrecisionPolicy& policy) {
  require_exponent(d);
  if (p < 2) throw InputError("p must be at least 2");
  for (std::uint64_t k = 0; k <= 8; ++k) {
    if (!gap_inequality(d, p, k, policy)) return false;
  }
  return true;
}

AdmissibleScan smallest_admissible_p(const Rational& d, std::uint64_t p_limit, const PrecisionPolicy& policy) {
  require_exponent(d);
  AdmissibleScan out;
  if (d >= 2) {
    out.scanned_to = 2;
    if (!admissible_p(d, 2, policy)) throw VerificationFailure("p = 2 rejected although d >= 2");
    out.p = 2;
    out.reason = "d >= 2: (p+2)^d - (p+1)^d >= d (p+1)^(d-1) >= 2p + 2 for every p";
    return out;
  }
  for (std::uint64_t p = 2; p <= p_limit; ++p) {
    out.scanned_to = p;
    if (admissible_p(d, p, policy)) {
      out.p = p;
      out.reason = "first admissible p";
      return out;
    }
    // Mean value bound: (p+2)^d - (p+1)^d <= d (p+2)^(d-1). Once that is <= 2p + 1
    // it stays so, since 2p + 1 - d (p+2)^(d-1) is increasing for d < 2.
    const Rational dd = d;
    bool cutoff = decide<bool>(policy, "scan cutoff at p=" + std::to_string(p),
                               [&](mpfr_prec_t prec) -> std::optional<bool> {
                                 OutwardInterval bound = OutwardInterval(dd, prec) *
                                                         pow(Rational(from_u64(p + 2)), dd - 1, prec);
                                 OutwardInterval lin(Rational(from_u64(2 * p + 1)), prec);
                                 Certainty c = certainly_less(lin, bound);
                                 if (c == Certainty::undecided) return std::nullopt;
                                 return c == Certainty::certainly_false;
                               });
    if (cutoff) {
      out.reason = "no admissible p exists: d (p+2)^(d-1) <= 2p + 1 from p = " + std::to_string(p) +
                   " on, and every smaller p was rejected";
      return out;
    }
  }
  out.reason = "scan limit reached";
  return out;
}

GapCheck check_gap(const Rational& d, std::uint64_t p, std::uint64_t k, std::uint64_t nk) {
  // n - (k+p)^d >= 2  <=>  (n-2)^w >= (k+p)^u ;  n - (k+p)^d <= p  <=>  n - p <= 0 or (n-p)^w <= (k+p)^u
  const unsigned long u = small_exponent(d.get_num(), "numerator of d");
  const unsigned long w = small_exponent(d.get_den(), "denominator of d");
  const BigInt power = pow(from_u64(k + p), u);
  GapCheck out;
  out.lower_ok = nk >= 2 && pow(from_u64(nk - 2), w) >= power;
  out.upper_ok = nk <= p || pow(from_u64(nk - p), w) <= power;
  return out;
}

std::uint64_t InsertionSchedule::insertions_in(std::uint64_t length) const {
  if (bypass) return 0;
  auto it = std::upper_bound(n.begin() + 1, n.end(), length);
  return static_cast<std::uint64_t>(it - (n.begin() + 1));
}

std::uint64_t InsertionSchedule::blocks_in(std::uint64_t length) const {
  return (length - insertions_in(length)) / p;
}

std::uint64_t InsertionSchedule::segment_of(std::uint64_t pos) const {
  auto it = std::upper_bound(n.begin(), n.end(), pos);
  return static_cast<std::uint64_t>(it - n.begin()) - 1;
}

InsertionSchedule build_schedule(const Rational& d, std::uint64_t p, const Rational& alpha, std::uint64_t k_max,
                                 const Subsystem& sub, const PrecisionPolicy& policy) {
  require_exponent(d);
  if (alpha < 0) throw InputError("alpha must be non-negative");
  if (sub.p != p) {
    throw InputError("subsystem word length " + std::to_string(sub.p) + " differs from p = " + std::to_string(p));
  }
  if (!admissible_p(d, p, policy)) {
    throw InputError("p = " + std::to_string(p) + " is not admissible for d = " + to_string(d) +
                     ": (k+p+1)^d + 2p + 1 < (k+p+2)^d fails at k = 0");
  }

  InsertionSchedule s{d, p, alpha, sub, {0}, {}, {0}, {false}, {}, alpha == 0};
  s.m.reserve(k_max + 1);
  s.n.reserve(k_max + 2);
  for (std::uint64_t k = 0; k <= k_max; ++k) {
    const BigInt F = floor_power(k + p + 1, d);
    const BigInt nk = from_u64(s.n[k]);
    if (F < nk) throw VerificationFailure("n(" + std::to_string(k) + ") overtook (k+p+1)^d");
    const BigInt mk = (F - nk) / from_u64(p) + 1;
    if (mk < 2) {
      throw InputError("m(" + std::to_string(k) + ") = " + mk.get_str() + " < 2 for d = " + to_string(d) +
                       ", p = " + std::to_string(p));
    }
    s.m.push_back(to_u64(mk));
    s.n.push_back(to_u64(nk + mk * from_u64(p) + 1));
  }

  const Digit smallest = sub.base.indices().min();
  for (std::uint64_t k = 1; k < s.n.size(); ++k) {
    GapCheck g = check_gap(d, p, k, s.n[k]);
    if (!g.lower_ok || !g.upper_ok) s.gap_violations.push_back(k);
    if (s.bypass) {
      s.inserted.push_back(0);
      s.clamped.push_back(false);
      continue;
    }
    const BigInt raw = floor_alpha_tau(alpha, s.n[k], policy);
    Digit digit = raw < from_u64(smallest) ? smallest : to_u64(raw);
    s.clamped.push_back(raw < from_u64(smallest));
    if (!sub.base.indices().contains(digit)) {
      throw InputError("inserted digit " + std::to_string(digit) + " at n(" + std::to_string(k) +
                       ") is not an index of " + sub.base.name());
    }
    s.inserted.push_back(digit);
  }
  return s;
}

std::vector<Word> random_blocks(const Subsystem& sub, std::size_t count, std::uint64_t seed, std::uint64_t stream) {
  std::mt19937_64 rng(stream_seed(seed, stream));
  std::uniform_int_distribution<std::size_t> pick(0, sub.size() - 1);
  std::vector<Word> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(sub.words[pick(rng)]);
  return out;
}

Word synthesize(const InsertionSchedule& s, const std::vector<Word>& blocks, std::size_t n_max) {
  if (n_max > s.horizon()) {
    throw InputError("requested " + std::to_string(n_max) + " digits but the schedule covers " +
                     std::to_string(s.horizon()));
  }
  const std::set<Word> allowed(s.sub.words.begin(), s.sub.words.end());
  const std::uint64_t needed = (n_max - s.insertions_in(n_max) + s.p - 1) / s.p;
  if (blocks.size() < needed) {
    throw InputError(std::to_string(n_max) + " digits need " + std::to_string(needed) + " blocks, got " +
                     std::to_string(blocks.size()));
  }
  Word out;
  out.reserve(n_max);
  std::size_t b = 0;
  std::size_t off = 0;
  std::uint64_t k = 1;
  while (out.size() < n_max) {
    const std::uint64_t pos = out.size() + 1;
    if (!s.bypass && k < s.n.size() && pos == s.n[k]) {
      out.push_back(s.inserted[k++]);
      continue;
    }
    if (off == 0 && !allowed.count(blocks[b])) throw InputError("block " + to_string(blocks[b]) + " is not in W_p");
    out.push_back(blocks[b][off]);
    if (++off == s.p) {
      off = 0;
      ++b;
    }
  }
  return out;
}

Word eliminate(const InsertionSchedule& s, const Word& x_digits) {
  if (x_digits.size() > s.horizon()) throw InputError("digit stream is longer than the schedule horizon");
  if (s.bypass) return x_digits;
  Word out;
  out.reserve(x_digits.size());
  std::uint64_t k = 1;
  for (std::size_t i = 0; i < x_digits.size(); ++i) {
    const std::uint64_t pos = i + 1;
    if (k < s.n.size() && pos == s.n[k]) {
      if (x_digits[i] != s.inserted[k]) {
        throw InputError("layout violation at n(" + std::to_string(k) + ") = " + std::to_string(pos) + ": digit " +
                         std::to_string(x_digits[i]) + ", scheduled " + std::to_string(s.inserted[k]));
      }
      ++k;
      continue;
    }
    out.push_back(x_digits[i]);
  }
  return out;
}

}  // namespace parifs
