#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "parifs/ifs.hpp"

namespace parifs {

/// A finite subsystem W_p of words of length p with pairwise disjoint
/// fundamental intervals and non-parabolic last letters.
struct Subsystem {
  IfsSystem base;
  std::size_t p = 0;
  /// Sorted by the left endpoint of their fundamental intervals.
  std::vector<Word> words;
  std::vector<MoebiusBranch> composed;
  std::vector<FundInterval> intervals;
  /// max over words of max_x |φ_ω'(x)|, exact.
  Rational max_derivative;
  /// Rational strictly below -(1/p) log max_derivative, so max|φ_ω'| < e^{-γ p} holds strictly.
  Rational gamma;
  /// Exact minimum gap between distinct intervals; absent for a single word.
  std::optional<Rational> K;
  /// Largest letter used by any word.
  Digit max_letter = 0;

  std::size_t size() const { return words.size(); }
  /// Index of w in `words`, or nullopt.
  std::optional<std::size_t> find(const Word& w) const;
};

/// Validates the Subsystem invariants (disjoint intervals, non-parabolic last
/// letters, contraction) for explicitly chosen words and fills γ and K.
/// Words may have any common length p >= 1.
Subsystem make_subsystem(const IfsSystem& sys, std::vector<Word> words);

/// All words of length p over the window whose last letter is not parabolic,
/// sorted by left endpoint; any interval touching its kept predecessor is
/// dropped. With max_words > 0 the survivors are then truncated to the
/// max_words with the largest max|φ_ω'|.
Subsystem select_subsystem(const IfsSystem& sys, std::size_t p, const IndexWindow& window, std::size_t max_words = 0,
                           std::size_t enumeration_cap = kDefaultEnumerationCap);

/// -(1/p) log max_ω max_x |φ_ω'(x)|: the supremum of admissible γ. `sub.gamma` lies strictly below it.
OutwardInterval gamma_of(const Subsystem& sub, mpfr_prec_t prec = kDefaultPrecisionBits);

/// Exact minimum distance between the intervals of distinct words. Throws
/// InputError for fewer than two words and VerificationFailure if two intervals touch.
Rational gap_constant(const Subsystem& sub);

struct DimensionBracket {
  std::size_t depth = 0;
  double s_lo = 0;
  double s_hi = 0;
  std::size_t words_enumerated = 0;
};

inline constexpr double kBisectionTolerance = 1e-12;

/// Roots of Σ_ω (min|φ_ω'|)^s = 1 and Σ_ω (max|φ_ω'|)^s = 1 over all words of
/// length `depth` in the maps. One map gives [0, 0].
DimensionBracket dimension_bracket(const std::vector<MoebiusBranch>& maps, std::size_t depth,
                                   std::size_t enumeration_cap = kDefaultEnumerationCap);
DimensionBracket dimension_bracket(const Subsystem& sub, std::size_t depth,
                                   std::size_t enumeration_cap = kDefaultEnumerationCap);

/// h/χ for the uniform Bernoulli measure on W_p: h = (1/p) log #W_p, χ the
/// sample mean of -log|φ_ω'(x)| / (p · sample_depth) over random words of
/// sample_depth blocks at random interior points.
double bernoulli_dimension_estimate(const Subsystem& sub, std::size_t sample_depth, std::size_t samples,
                                    std::uint64_t seed);

}  // namespace parifs
