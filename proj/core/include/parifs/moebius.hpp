#pragma once

#include <compare>
#include <string>

#include "parifs/rational.hpp"

namespace parifs {

/// An integer Möbius map x -> (a x + b) / (c x + d) with ad - bc != 0.
///
/// Entries are stored with their common factor removed and signed so that the
/// denominator c x + d is positive at x = 0 (or, when d = 0, so that c > 0).
/// A branch of an IFS additionally satisfies `valid_on_unit_interval()`;
/// plain construction only rejects singular matrices so that intermediate
/// products (inverses, test matrices) stay representable.
class MoebiusBranch {
 public:
  MoebiusBranch(BigInt a, BigInt b, BigInt c, BigInt d);
  MoebiusBranch(long a, long b, long c, long d) : MoebiusBranch(BigInt(a), BigInt(b), BigInt(c), BigInt(d)) {}

  static MoebiusBranch identity() { return MoebiusBranch(1, 0, 0, 1); }

  const BigInt& a() const { return a_; }
  const BigInt& b() const { return b_; }
  const BigInt& c() const { return c_; }
  const BigInt& d() const { return d_; }
  /// Signed determinant ad - bc of the reduced matrix.
  const BigInt& det() const { return det_; }
  BigInt abs_det() const { return det_ < 0 ? BigInt(-det_) : det_; }
  bool orientation_preserving() const { return det_ > 0; }

  /// c x + d never vanishes on [0,1] and the map sends [0,1] into [0,1].
  bool valid_on_unit_interval() const;
  /// c x + d has constant non-zero sign on [0,1].
  bool pole_free_on_unit_interval() const;

  Rational apply(const Rational& x) const;
  /// |φ'(x)| = |ad - bc| / (c x + d)^2.
  Rational derivative(const Rational& x) const;
  /// Signed φ'(x) = (ad - bc) / (c x + d)^2.
  Rational signed_derivative(const Rational& x) const;

  /// Extremes of |φ'| over [0,1]; attained at an endpoint since (c x + d)^2 is monotone there.
  Rational max_derivative() const;
  Rational min_derivative() const;
  /// max|φ'| / min|φ'| over [0,1] = (max(|d|,|c+d|) / min(|d|,|c+d|))^2.
  Rational distortion_ratio() const;

  /// |φ(1) - φ(0)| = |det| / |d (c + d)|.
  Rational image_diameter() const;

  MoebiusBranch inverse() const;

  /// Right-multiplies in place: *this becomes (*this) ∘ inner.
  MoebiusBranch& then_inner(const MoebiusBranch& inner);

  friend bool operator==(const MoebiusBranch&, const MoebiusBranch&) = default;

 private:
  MoebiusBranch() = default;
  void normalize();

  BigInt a_, b_, c_, d_, det_;
};

/// outer ∘ inner, i.e. the matrix product outer × inner with the common scalar removed.
MoebiusBranch compose(const MoebiusBranch& outer, const MoebiusBranch& inner);

std::string to_string(const MoebiusBranch& m);

}  // namespace parifs
