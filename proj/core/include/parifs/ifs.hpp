#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "parifs/index_set.hpp"
#include "parifs/moebius.hpp"
#include "parifs/outward_interval.hpp"
#include "parifs/rational.hpp"

namespace parifs {

enum class Family { regular_cf, backward_cf, even_cf, explicit_maps };

std::string to_string(Family f);

/// Claimed d-decay constants: min_x |φ_i'(x)| >= c / i^d.
struct DecayConstants {
  Rational c;
  Rational d;
};

/// r + s·√n. `n` is 1 (and s = 0) for rational values.
struct QuadraticSurd {
  Rational rational;
  Rational coeff;
  BigInt radicand = 1;

  bool is_rational() const { return coeff == 0; }
  /// -1, 0 or +1, decided exactly.
  int sign() const;
  double approx() const;
  std::string str() const;
};

struct ParabolicPoint {
  Digit index;
  QuadraticSurd fixed_point;
};

/// Where a point sits relative to the open order-1 images φ_i((0,1)).
struct Location {
  enum class Kind { interior, boundary, outside };
  Kind kind = Kind::outside;
  /// For `boundary`, the image lying to the left of the point (the point is its right endpoint)
  /// when that index is available, otherwise the image to the right.
  Digit index = 0;
};

/// A validated parabolic IFS of integer Möbius branches on [0,1].
///
/// Schematic families (regular / backward / even continued fractions, and
/// their schematic restrictions) generate branches in closed form for any
/// index; explicit systems carry a finite table. Immutable once built.
class IfsSystem {
 public:
  /// Closed-form family over its natural index set. Use `builtin()` in systems.hpp.
  static IfsSystem family(Family f);
  /// Finite table of branches. Validates the branch conditions, (A1) and the open set condition.
  static IfsSystem from_branches(std::string name, std::map<Digit, MoebiusBranch> branches,
                                 std::optional<DecayConstants> decay = std::nullopt);

  const std::string& name() const { return name_; }
  Family family_tag() const { return family_; }
  bool schematic() const { return family_ != Family::explicit_maps; }
  const IndexSet& indices() const { return indices_; }
  const std::optional<DecayConstants>& decay() const { return decay_; }
  const std::vector<ParabolicPoint>& parabolic() const { return parabolic_; }
  bool is_parabolic(Digit i) const;
  const std::vector<std::string>& warnings() const { return warnings_; }

  /// φ_i; throws InputError when i is not in the index set.
  MoebiusBranch branch(Digit i) const;
  /// Members of the index set inside the window; throws when none.
  std::vector<Digit> window(const IndexWindow& w) const;

  Location locate(const Rational& y) const;

  /// Same branches over a subset of the index set (restriction bookkeeping lives in systems.hpp).
  IfsSystem with_indices(IndexSet subset, std::string name, std::vector<std::string> extra_warnings) const;
  IfsSystem with_decay(std::optional<DecayConstants> decay) const;

 private:
  IfsSystem() = default;
  MoebiusBranch family_branch(Digit i) const;
  Location locate_family(const Rational& y) const;
  Location locate_explicit(const Rational& y) const;

  std::string name_;
  Family family_ = Family::explicit_maps;
  IndexSet indices_ = IndexSet::finite({});
  std::map<Digit, MoebiusBranch> table_;
  std::optional<DecayConstants> decay_;
  std::vector<ParabolicPoint> parabolic_;
  std::vector<std::string> warnings_;
};

/// Neutral fixed point of a single Möbius branch inside [0,1], if any.
/// Throws InputError for branches with |φ'| = 1 everywhere (translations/reflections).
std::optional<QuadraticSurd> neutral_fixed_point(const MoebiusBranch& m);

struct FundInterval {
  Word word;
  Rational lo;
  Rational hi;

  Rational diameter() const { return hi - lo; }
};

/// φ_{ω_1} ∘ ⋯ ∘ φ_{ω_n}; the identity for the empty word.
MoebiusBranch compose_word(const IfsSystem& sys, const Word& w);

FundInterval fundamental_interval(const IfsSystem& sys, const Word& w);

enum class EncodeStatus { complete, hit_boundary, exited_limit_set };

std::string to_string(EncodeStatus s);

struct EncodeResult {
  Word digits;
  EncodeStatus status = EncodeStatus::complete;
  /// 1-based step at which the boundary was hit or the point left the images; 0 when complete.
  std::size_t step = 0;
  /// f^{|digits|}(x); decode_point(digits, tail) == x.
  Rational tail;
};

/// Greedy digit extraction through the Bernoulli map f|φ_i((0,1)) = φ_i^{-1}.
/// Requires 0 < x < 1. A point on a shared endpoint emits the left image's
/// index and stops with `hit_boundary`.
EncodeResult encode_digits(const IfsSystem& sys, const Rational& x, std::size_t n);

Rational decode_point(const IfsSystem& sys, const Word& w, const Rational& anchor);

struct DistortionReport {
  std::size_t order = 0;
  /// Exact sup of max|φ_ω'| / min|φ_ω'| over the enumerated words.
  Rational windowed_ratio;
  /// log of windowed_ratio.
  OutwardInterval windowed;
  Word witness;
  std::size_t words_enumerated = 0;
  /// n · log(sup_i ratio_i) over the whole (schematic) index set, when derivable.
  std::optional<OutwardInterval> tail_bound;
  bool window_truncated = false;
};

inline constexpr std::size_t kDefaultEnumerationCap = 10'000'000;

DistortionReport distortion_Dn(const IfsSystem& sys, std::size_t n, const IndexWindow& window,
                               std::size_t enumeration_cap = kDefaultEnumerationCap);

struct DecayCheckReport {
  bool holds = false;
  /// First index where min|φ_i'| < c / i^d, when the window exposes one.
  std::optional<Digit> violating_index;
  /// Closed-form statement used for the indices beyond the window ("" for finite systems).
  std::string tail_argument;
};

/// Checks min_x|φ_i'(x)| >= c / i^d on the window, and on the whole index set
/// in closed form for schematic families. Requires c > 0 and d > 1.
DecayCheckReport decay_check(const IfsSystem& sys, const Rational& c, const Rational& d, const IndexWindow& window);

/// Exact (A1) solve: every parabolic index and its neutral fixed point.
std::vector<ParabolicPoint> parabolic_indices(const IfsSystem& sys);

struct RenyiReport {
  /// max over windowed i and x in [0,1] of |(log|φ_i'|)'(x)| = 2|c| / |c x + d|.
  Rational windowed_sup;
  Digit witness = 0;
  /// Bound for indices beyond the window (schematic families only).
  std::optional<Rational> tail_bound;
};

RenyiReport renyi_quantity(const IfsSystem& sys, const IndexWindow& window);

struct DecayProbeRow {
  std::size_t order = 0;
  Rational max_diameter;
  Word witness;
};

/// sup over window^n of |J(ω)| for n = 1..depth.
std::vector<DecayProbeRow> uniform_decay_probe(const IfsSystem& sys, std::size_t depth, const IndexWindow& window,
                                               std::size_t enumeration_cap = kDefaultEnumerationCap);

/// Depth-first enumeration of alphabet^n with prefix reuse. `visit(word, composed)`
/// sees every word of exactly length n once. Throws InputError above the cap.
void for_each_word(const std::vector<MoebiusBranch>& maps, const std::vector<Digit>& labels, std::size_t n,
                   std::size_t enumeration_cap,
                   const std::function<void(const Word&, const MoebiusBranch&)>& visit);

}  // namespace parifs
