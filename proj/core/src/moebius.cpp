#include "parifs/moebius.hpp"

#include "parifs/errors.hpp"

namespace parifs {

MoebiusBranch::MoebiusBranch(BigInt a, BigInt b, BigInt c, BigInt d)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
  det_ = a_ * d_ - b_ * c_;
  if (det_ == 0) throw InputError("degenerate Möbius matrix " + to_string(*this) + " (det = 0)");
  normalize();
}

void MoebiusBranch::normalize() {
  // A common factor s of all four entries satisfies s^2 | det. When |det| = 1
  // (every continued-fraction word) there is nothing to remove and the gcd
  // over multi-thousand-bit entries is skipped entirely.
  if (det_ != 1 && det_ != -1) {
    BigInt g;
    mpz_gcd(g.get_mpz_t(), det_.get_mpz_t(), a_.get_mpz_t());
    if (g != 1) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), b_.get_mpz_t());
    if (g != 1) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c_.get_mpz_t());
    if (g != 1) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d_.get_mpz_t());
    if (g > 1) {
      mpz_divexact(a_.get_mpz_t(), a_.get_mpz_t(), g.get_mpz_t());
      mpz_divexact(b_.get_mpz_t(), b_.get_mpz_t(), g.get_mpz_t());
      mpz_divexact(c_.get_mpz_t(), c_.get_mpz_t(), g.get_mpz_t());
      mpz_divexact(d_.get_mpz_t(), d_.get_mpz_t(), g.get_mpz_t());
      BigInt g2 = g * g;
      mpz_divexact(det_.get_mpz_t(), det_.get_mpz_t(), g2.get_mpz_t());
    }
  }
  int s = sgn(d_) != 0 ? sgn(d_) : sgn(c_);
  if (s < 0) {
    a_ = -a_;
    b_ = -b_;
    c_ = -c_;
    d_ = -d_;
  }
}

bool MoebiusBranch::pole_free_on_unit_interval() const {
  // d > 0 after normalization whenever d != 0; the denominator is linear, so
  // it is sign-constant on [0,1] iff both endpoint values share that sign.
  BigInt at_one = c_ + d_;
  return d_ != 0 && at_one != 0 && sgn(d_) == sgn(at_one);
}

bool MoebiusBranch::valid_on_unit_interval() const {
  if (!pole_free_on_unit_interval()) return false;
  Rational y0 = apply(Rational(0));
  Rational y1 = apply(Rational(1));
  return y0 >= 0 && y0 <= 1 && y1 >= 0 && y1 <= 1;
}

Rational MoebiusBranch::apply(const Rational& x) const {
  Rational den = c_ * x + d_;
  if (den == 0) throw DomainError("pole of " + to_string(*this) + " at x = " + parifs::to_string(x));
  Rational out = (a_ * x + b_) / den;
  return out;
}

Rational MoebiusBranch::signed_derivative(const Rational& x) const {
  Rational den = c_ * x + d_;
  if (den == 0) throw DomainError("pole of " + to_string(*this) + " at x = " + parifs::to_string(x));
  return Rational(det_) / (den * den);
}

Rational MoebiusBranch::derivative(const Rational& x) const { return abs(signed_derivative(x)); }

Rational MoebiusBranch::max_derivative() const {
  Rational l = derivative(Rational(0));
  Rational r = derivative(Rational(1));
  return l > r ? l : r;
}

Rational MoebiusBranch::min_derivative() const {
  Rational l = derivative(Rational(0));
  Rational r = derivative(Rational(1));
  return l < r ? l : r;
}

Rational MoebiusBranch::distortion_ratio() const {
  BigInt u = abs(d_);
  BigInt v = abs(BigInt(c_ + d_));
  if (u == 0 || v == 0) throw DomainError("pole of " + to_string(*this) + " on [0,1]");
  Rational q = u > v ? Rational(u, v) : Rational(v, u);
  q.canonicalize();
  return q * q;
}

Rational MoebiusBranch::image_diameter() const {
  BigInt den = d_ * (c_ + d_);
  if (den == 0) throw DomainError("pole of " + to_string(*this) + " on [0,1]");
  Rational out(abs(det_), abs(den));
  out.canonicalize();
  return out;
}

MoebiusBranch MoebiusBranch::inverse() const { return MoebiusBranch(d_, -b_, -c_, a_); }

MoebiusBranch& MoebiusBranch::then_inner(const MoebiusBranch& inner) {
  BigInt na = a_ * inner.a_ + b_ * inner.c_;
  BigInt nb = a_ * inner.b_ + b_ * inner.d_;
  BigInt nc = c_ * inner.a_ + d_ * inner.c_;
  BigInt nd = c_ * inner.b_ + d_ * inner.d_;
  a_.swap(na);
  b_.swap(nb);
  c_.swap(nc);
  d_.swap(nd);
  det_ *= inner.det_;
  normalize();
  return *this;
}

MoebiusBranch compose(const MoebiusBranch& outer, const MoebiusBranch& inner) {
  MoebiusBranch out = outer;
  out.then_inner(inner);
  return out;
}

std::string to_string(const MoebiusBranch& m) {
  return "(" + m.a().get_str() + "," + m.b().get_str() + "," + m.c().get_str() + "," + m.d().get_str() + ")";
}

}  // namespace parifs
