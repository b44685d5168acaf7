#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "parifs/subsystem.hpp"

namespace parifs {

/// (k+p+1)^d + 2p + 1 < (k+p+2)^d for every k >= 0. The gap between
/// consecutive d-th powers grows with k, so k = 0 decides; k = 0..8 are checked.
bool admissible_p(const Rational& d, std::uint64_t p, const PrecisionPolicy& policy = {});

struct AdmissibleScan {
  std::optional<std::uint64_t> p;
  /// Largest p examined.
  std::uint64_t scanned_to = 0;
  /// Why the scan stopped.
  std::string reason;
};

/// Smallest admissible p >= 2. For d >= 2 this is 2. For 1 < d < 2 the scan
/// stops at the first p where 2p + 1 >= d (p+2)^(d-1), beyond which the
/// inequality fails for good (its right side minus its left side shrinks in p).
AdmissibleScan smallest_admissible_p(const Rational& d, std::uint64_t p_limit = 1'000'000,
                                     const PrecisionPolicy& policy = {});

/// Positions n(k), block counts m(k) and inserted digits for the construction.
/// Positions are 1-based; n(0) = 0.
struct InsertionSchedule {
  Rational d;
  std::uint64_t p = 0;
  Rational alpha;
  Subsystem sub;
  /// n(0..k_max+1).
  std::vector<std::uint64_t> n;
  /// m(0..k_max).
  std::vector<std::uint64_t> m;
  /// inserted[k] is the digit at n(k) for k >= 1; inserted[0] is unused.
  std::vector<Digit> inserted;
  /// The raw floor(α τ(n(k))) was below the smallest index and was raised to it.
  std::vector<bool> clamped;
  /// k >= 1 where 2 <= n(k) - (k+p)^d <= p fails.
  std::vector<std::uint64_t> gap_violations;
  /// α = 0: no digits are inserted and the stream is the block stream itself.
  bool bypass = false;

  std::uint64_t k_max() const { return m.size() - 1; }
  /// Longest stream the schedule lays out: n(k_max+1).
  std::uint64_t horizon() const { return n.back(); }
  /// Number of W_p blocks in the first `length` positions.
  std::uint64_t blocks_in(std::uint64_t length) const;
  /// Number of inserted positions n(k) <= length, k >= 1.
  std::uint64_t insertions_in(std::uint64_t length) const;
  /// k with n(k) <= pos < n(k+1).
  std::uint64_t segment_of(std::uint64_t pos) const;
};

/// Builds n, m by exact recursion: n(k) + (m(k)-1)p <= (k+p+1)^d < n(k) + m(k)p,
/// n(k+1) = n(k) + m(k)p + 1. The window bound 2 <= n(k) - (k+p)^d <= p is
/// checked exactly for every k and violations are recorded, not thrown.
/// Throws InputError when p is not admissible, sub.p != p, or m(k) < 2.
InsertionSchedule build_schedule(const Rational& d, std::uint64_t p, const Rational& alpha, std::uint64_t k_max,
                                 const Subsystem& sub, const PrecisionPolicy& policy = {});

/// Lower and upper check of n(k) - (k+p)^d against [2, p], decided exactly.
struct GapCheck {
  bool lower_ok = false;
  bool upper_ok = false;
};
GapCheck check_gap(const Rational& d, std::uint64_t p, std::uint64_t k, std::uint64_t nk);

/// Uniform random blocks from W_p, deterministic in (seed, stream).
std::vector<Word> random_blocks(const Subsystem& sub, std::size_t count, std::uint64_t seed, std::uint64_t stream = 0);

/// Digits of x(y) at positions 1..n_max: the blocks in order with the inserted
/// digit at each n(k). Throws InputError for blocks outside W_p, too few blocks,
/// or n_max beyond the schedule horizon.
Word synthesize(const InsertionSchedule& s, const std::vector<Word>& blocks, std::size_t n_max);

/// Removes the digits at n(1), n(2), ...; throws InputError when one of them
/// differs from the scheduled digit.
Word eliminate(const InsertionSchedule& s, const Word& x_digits);

struct MaxDigitReport {
  std::uint64_t k0 = 0;
  std::uint64_t k_from = 0;
  std::uint64_t k_to = 0;
  std::uint64_t positions_checked = 0;
  bool holds = true;
  /// First failure: position, observed L_n, expected digit.
  std::optional<std::uint64_t> fail_n;
  Digit fail_observed = 0;
  Digit fail_expected = 0;
  /// Extremes of L_n / τ(n) over the checked positions, and at the last k.
  double ratio_min = 0;
  double ratio_max = 0;
  double last_ratio_lo = 0;
  double last_ratio_hi = 0;
};

/// L_n(x) = inserted digit of k for every n in [n(k), n(k+1)), k0 <= k <= k_to,
/// where k0 is the first k whose inserted digit dominates every letter of W_p.
MaxDigitReport verify_max_digit_law(const InsertionSchedule& s, const std::vector<Word>& blocks, std::uint64_t k_from,
                                    std::uint64_t k_to);

struct CompareRow {
  std::uint64_t k = 0;
  std::uint64_t tested = 0;
  std::uint64_t failures = 0;
  /// min over tested n of log|J| - (1+ε) log|J̄| (negative on failure).
  double worst_margin = 0;
  /// Sample values at n(k) from the first stream.
  double log_J = 0;
  double log_Jbar = 0;
};

struct CompareReport {
  Rational eps;
  std::size_t samples = 0;
  std::vector<CompareRow> rows;
  /// Smallest k from which every tested k' in [k, k_to] holds.
  std::optional<std::uint64_t> k1;
  std::uint64_t exact_fallbacks = 0;
};

/// |J(a_1..a_n)| >= |J̄(a_1..a_n)|^{1+ε} for n in B_k = {n(k) + m p : 0 <= m <= m(k)},
/// k = 0..k_to (n >= 1), over `samples` random block streams.
CompareReport verify_compare_lemma(const InsertionSchedule& s, const Rational& eps, std::size_t samples,
                                   std::uint64_t k_to, std::uint64_t seed);

struct HolderPair {
  std::uint64_t k = 0;
  std::uint64_t m = 0;
  /// Common prefix length of the two codings.
  std::uint64_t separation = 0;
  double log_dist = 0;
  double log_hdist = 0;
  /// Which bound applied: "gap" (s < p), "holder" (s >= n(k1)) or "k1_regime".
  std::string regime;
  bool lemma_ok = true;
  bool bound_ok = true;
};

struct HolderReport {
  Rational C_est;
  /// 2 · C_est, the constant used in the checks.
  Rational C_used;
  Rational K;
  std::uint64_t k1 = 0;
  std::size_t pairs = 0;
  std::size_t gap_checked = 0, gap_failures = 0;
  std::size_t lemma_checked = 0, lemma_failures = 0;
  std::size_t holder_checked = 0, holder_failures = 0;
  std::size_t k1_regime = 0;
  /// min |x - y| over the pairs with s < n(k1) (reported, not asserted).
  std::optional<Rational> K1;
  std::vector<HolderPair> rows;

  bool holds() const { return gap_failures == 0 && lemma_failures == 0 && holder_failures == 0; }
};

/// Samples pairs of constructed points diverging in a random block of a random
/// segment k <= k_hi (depth: end of that block + 2p, anchor 1/2) and checks
/// |x - y| >= K when s < p, |J(a_1..a_{n(k)+mp})| <= C |x-y| / K when s >= p,
/// and |h(x) - h(y)| <= (C |x-y| / K)^{1/(1+ε)} when s >= n(k1), with C = 2 C_est.
HolderReport verify_holder(const InsertionSchedule& s, const Rational& eps, const Rational& C_est, std::uint64_t k1,
                           std::size_t pair_samples, std::uint64_t seed, std::uint64_t k_hi);

struct A2Estimate {
  Rational C_est;
  Word witness;
  std::size_t samples = 0;
};

/// max over random words (lengths in [min_len, max_len], letters from the
/// window, last letter non-parabolic or different from the one before) of
/// max|φ_ω'| / min|φ_ω'|. A lower bound for the (A2) constant.
A2Estimate estimate_A2_constant(const IfsSystem& sys, std::size_t word_samples, std::size_t min_len,
                                std::size_t max_len, std::uint64_t seed, const IndexWindow& window);

/// Largest δ with δ log C <= ε γ (1 - δ) / 4, and the first k along the schedule
/// from which each threshold used in the comparison argument holds through k_max.
struct DeltaFeasibility {
  double delta = 0;
  /// k + 1 <= δ n(k).
  std::optional<std::uint64_t> k_linear;
  /// 2 n^{1/d} (d log n - log c) <= ε γ (1 - δ) n / 4 at n = n(k).
  std::optional<std::uint64_t> k_decay;
  /// p floor((n - k)/p) >= (n - k)/2 at n = n(k).
  std::optional<std::uint64_t> k_blocks;
};

DeltaFeasibility delta_feasibility(const InsertionSchedule& s, const Rational& C, double gamma, const Rational& eps,
                                   const DecayConstants& decay);

}  // namespace parifs
