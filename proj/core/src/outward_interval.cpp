#include "parifs/outward_interval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <utility>

#include "parifs/errors.hpp"

namespace parifs {

OutwardInterval::OutwardInterval(mpfr_prec_t prec) : prec_(prec) {
  mpfr_init2(lo_, prec_);
  mpfr_init2(hi_, prec_);
  mpfr_set_zero(lo_, 1);
  mpfr_set_zero(hi_, 1);
}

OutwardInterval::OutwardInterval(const Rational& exact, mpfr_prec_t prec) : OutwardInterval(prec) {
  mpfr_set_q(lo_, exact.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(hi_, exact.get_mpq_t(), MPFR_RNDU);
}

OutwardInterval::OutwardInterval(const BigInt& exact, mpfr_prec_t prec) : OutwardInterval(prec) {
  mpfr_set_z(lo_, exact.get_mpz_t(), MPFR_RNDD);
  mpfr_set_z(hi_, exact.get_mpz_t(), MPFR_RNDU);
}

OutwardInterval::OutwardInterval(const OutwardInterval& other) : OutwardInterval(other.prec_) {
  mpfr_set(lo_, other.lo_, MPFR_RNDD);
  mpfr_set(hi_, other.hi_, MPFR_RNDU);
}

OutwardInterval::OutwardInterval(OutwardInterval&& other) noexcept : OutwardInterval(other.prec_) {
  mpfr_swap(lo_, other.lo_);
  mpfr_swap(hi_, other.hi_);
}

OutwardInterval& OutwardInterval::operator=(OutwardInterval other) noexcept {
  // mpfr_swap also swaps precisions
  std::swap(prec_, other.prec_);
  mpfr_swap(lo_, other.lo_);
  mpfr_swap(hi_, other.hi_);
  return *this;
}

OutwardInterval::~OutwardInterval() {
  mpfr_clear(lo_);
  mpfr_clear(hi_);
}

OutwardInterval OutwardInterval::from_double(double v, mpfr_prec_t prec) {
  OutwardInterval out(std::max<mpfr_prec_t>(prec, 53));
  mpfr_set_d(out.lo_, v, MPFR_RNDD);
  mpfr_set_d(out.hi_, v, MPFR_RNDU);
  return out;
}

OutwardInterval OutwardInterval::hull(const OutwardInterval& lo_src, const OutwardInterval& hi_src) {
  OutwardInterval out(std::max(lo_src.prec_, hi_src.prec_));
  mpfr_min(out.lo_, lo_src.lo_, hi_src.lo_, MPFR_RNDD);
  mpfr_max(out.hi_, lo_src.hi_, hi_src.hi_, MPFR_RNDU);
  return out;
}

double OutwardInterval::lo_double() const { return mpfr_get_d(lo_, MPFR_RNDD); }
double OutwardInterval::hi_double() const { return mpfr_get_d(hi_, MPFR_RNDU); }

double OutwardInterval::mid_double() const {
  mpfr_t m;
  mpfr_init2(m, prec_ + 1);
  mpfr_add(m, lo_, hi_, MPFR_RNDN);
  mpfr_div_2ui(m, m, 1, MPFR_RNDN);
  double out = mpfr_get_d(m, MPFR_RNDN);
  mpfr_clear(m);
  return out;
}

double OutwardInterval::width_double() const {
  mpfr_t w;
  mpfr_init2(w, prec_);
  mpfr_sub(w, hi_, lo_, MPFR_RNDU);
  double out = mpfr_get_d(w, MPFR_RNDU);
  mpfr_clear(w);
  return out;
}

bool OutwardInterval::contains(const Rational& x) const {
  return mpfr_cmp_q(lo_, x.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_, x.get_mpq_t()) >= 0;
}

OutwardInterval operator+(const OutwardInterval& x, const OutwardInterval& y) {
  OutwardInterval out(std::max(x.prec_, y.prec_));
  mpfr_add(out.lo_, x.lo_, y.lo_, MPFR_RNDD);
  mpfr_add(out.hi_, x.hi_, y.hi_, MPFR_RNDU);
  return out;
}

OutwardInterval operator-(const OutwardInterval& x, const OutwardInterval& y) {
  OutwardInterval out(std::max(x.prec_, y.prec_));
  mpfr_sub(out.lo_, x.lo_, y.hi_, MPFR_RNDD);
  mpfr_sub(out.hi_, x.hi_, y.lo_, MPFR_RNDU);
  return out;
}

OutwardInterval operator-(const OutwardInterval& x) {
  OutwardInterval out(x.prec_);
  mpfr_neg(out.lo_, x.hi_, MPFR_RNDD);
  mpfr_neg(out.hi_, x.lo_, MPFR_RNDU);
  return out;
}

OutwardInterval operator*(const OutwardInterval& x, const OutwardInterval& y) {
  const mpfr_prec_t prec = std::max(x.prec_, y.prec_);
  OutwardInterval out(prec);
  mpfr_t t;
  mpfr_init2(t, prec);
  const mpfr_t* xs[2] = {&x.lo_, &x.hi_};
  const mpfr_t* ys[2] = {&y.lo_, &y.hi_};
  bool first = true;
  for (auto* xe : xs) {
    for (auto* ye : ys) {
      mpfr_mul(t, *xe, *ye, MPFR_RNDD);
      if (first || mpfr_less_p(t, out.lo_)) mpfr_set(out.lo_, t, MPFR_RNDD);
      mpfr_mul(t, *xe, *ye, MPFR_RNDU);
      if (first || mpfr_greater_p(t, out.hi_)) mpfr_set(out.hi_, t, MPFR_RNDU);
      first = false;
    }
  }
  mpfr_clear(t);
  return out;
}

OutwardInterval operator/(const OutwardInterval& x, const OutwardInterval& y) {
  if (mpfr_sgn(y.lo_) <= 0 && mpfr_sgn(y.hi_) >= 0) {
    throw DomainError("outward interval division by an interval containing zero");
  }
  const mpfr_prec_t prec = std::max(x.prec_, y.prec_);
  OutwardInterval out(prec);
  mpfr_t t;
  mpfr_init2(t, prec);
  const mpfr_t* xs[2] = {&x.lo_, &x.hi_};
  const mpfr_t* ys[2] = {&y.lo_, &y.hi_};
  bool first = true;
  for (auto* xe : xs) {
    for (auto* ye : ys) {
      mpfr_div(t, *xe, *ye, MPFR_RNDD);
      if (first || mpfr_less_p(t, out.lo_)) mpfr_set(out.lo_, t, MPFR_RNDD);
      mpfr_div(t, *xe, *ye, MPFR_RNDU);
      if (first || mpfr_greater_p(t, out.hi_)) mpfr_set(out.hi_, t, MPFR_RNDU);
      first = false;
    }
  }
  mpfr_clear(t);
  return out;
}

OutwardInterval log(const OutwardInterval& x) {
  if (mpfr_sgn(x.lo_) <= 0) throw DomainError("log of an interval that is not strictly positive");
  OutwardInterval out(x.prec_);
  mpfr_log(out.lo_, x.lo_, MPFR_RNDD);
  mpfr_log(out.hi_, x.hi_, MPFR_RNDU);
  return out;
}

OutwardInterval exp(const OutwardInterval& x) {
  OutwardInterval out(x.prec_);
  mpfr_exp(out.lo_, x.lo_, MPFR_RNDD);
  mpfr_exp(out.hi_, x.hi_, MPFR_RNDU);
  return out;
}

std::string OutwardInterval::str() const {
  char buf[128];
  std::snprintf(buf, sizeof buf, "[%.17g, %.17g]", lo_double(), hi_double());
  return buf;
}

Certainty certainly_less(const OutwardInterval& x, const OutwardInterval& y) {
  if (mpfr_less_p(x.hi(), y.lo())) return Certainty::certainly_true;
  if (mpfr_greaterequal_p(x.lo(), y.hi())) return Certainty::certainly_false;
  return Certainty::undecided;
}

OutwardInterval pow(const Rational& x, const Rational& e, mpfr_prec_t prec) {
  if (x <= 0) throw DomainError("pow of non-positive base " + to_string(x));
  if (e.get_den() == 1 && mpz_fits_slong_p(e.get_num_mpz_t())) {
    long n = e.get_num().get_si();
    Rational exact = n >= 0 ? pow(x, static_cast<std::uint64_t>(n)) : Rational(1) / pow(x, static_cast<std::uint64_t>(-n));
    return OutwardInterval(exact, prec);
  }
  // Guard bits keep the enclosure tight after the exp amplifies log's error.
  const mpfr_prec_t work = prec + 32;
  return exp(OutwardInterval(e, work) * log(OutwardInterval(x, work)));
}

std::optional<BigInt> certain_floor(const OutwardInterval& value) {
  BigInt lo_floor;
  BigInt hi_floor;
  mpfr_get_z(lo_floor.get_mpz_t(), value.lo(), MPFR_RNDD);
  mpfr_get_z(hi_floor.get_mpz_t(), value.hi(), MPFR_RNDD);
  if (lo_floor == hi_floor) return lo_floor;
  return std::nullopt;
}

}  // namespace parifs
