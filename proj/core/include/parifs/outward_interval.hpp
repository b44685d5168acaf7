#pragma once

#include <mpfr.h>

#include <functional>
#include <optional>
#include <string>

#include "parifs/rational.hpp"

namespace parifs {

inline constexpr mpfr_prec_t kDefaultPrecisionBits = 128;
inline constexpr mpfr_prec_t kDefaultPrecisionCap = 4096;

/// A closed interval [lo, hi] of MPFR floats. Every operation rounds lo down and
/// hi up, so the exact real it encloses stays inside after arbitrary chains of
/// operations.
class OutwardInterval {
 public:
  explicit OutwardInterval(mpfr_prec_t prec = kDefaultPrecisionBits);
  OutwardInterval(const Rational& exact, mpfr_prec_t prec);
  OutwardInterval(const BigInt& exact, mpfr_prec_t prec);
  OutwardInterval(const OutwardInterval& other);
  OutwardInterval(OutwardInterval&& other) noexcept;
  OutwardInterval& operator=(OutwardInterval other) noexcept;
  ~OutwardInterval();

  /// Encloses a double-precision value exactly (doubles are representable).
  static OutwardInterval from_double(double v, mpfr_prec_t prec);
  static OutwardInterval hull(const OutwardInterval& lo_src, const OutwardInterval& hi_src);

  mpfr_prec_t precision() const { return prec_; }
  const mpfr_t& lo() const { return lo_; }
  const mpfr_t& hi() const { return hi_; }

  /// Nearest doubles rounded outward.
  double lo_double() const;
  double hi_double() const;
  double mid_double() const;
  double width_double() const;

  bool contains(const Rational& x) const;
  bool certainly_positive() const { return mpfr_sgn(lo_) > 0; }
  bool certainly_negative() const { return mpfr_sgn(hi_) < 0; }

  friend OutwardInterval operator+(const OutwardInterval& x, const OutwardInterval& y);
  friend OutwardInterval operator-(const OutwardInterval& x, const OutwardInterval& y);
  friend OutwardInterval operator*(const OutwardInterval& x, const OutwardInterval& y);
  friend OutwardInterval operator/(const OutwardInterval& x, const OutwardInterval& y);
  friend OutwardInterval operator-(const OutwardInterval& x);

  /// Natural log; throws DomainError unless the interval is strictly positive.
  friend OutwardInterval log(const OutwardInterval& x);
  friend OutwardInterval exp(const OutwardInterval& x);

  /// "[lo, hi]" with 17 significant digits per endpoint.
  std::string str() const;

 private:
  mpfr_prec_t prec_;
  mpfr_t lo_;
  mpfr_t hi_;
};

/// Three-way result of comparing two enclosures.
enum class Certainty { certainly_true, certainly_false, undecided };

Certainty certainly_less(const OutwardInterval& x, const OutwardInterval& y);

/// x^e for x > 0 and a rational exponent, as exp(e * log x); exact when e is an integer.
OutwardInterval pow(const Rational& x, const Rational& e, mpfr_prec_t prec);

/// Precision schedule for "widen until decided" loops.
struct PrecisionPolicy {
  mpfr_prec_t start = kDefaultPrecisionBits;
  mpfr_prec_t cap = kDefaultPrecisionCap;
};

/// Re-runs `probe` at 128, 256, ... bits until it returns a value, or throws
/// PrecisionUndecidable naming `what` once the cap is exceeded.
template <typename T>
T decide(const PrecisionPolicy& policy, const std::string& what,
         const std::function<std::optional<T>(mpfr_prec_t)>& probe);

/// floor(value) when the enclosure pins it down, else nullopt.
std::optional<BigInt> certain_floor(const OutwardInterval& value);

}  // namespace parifs

#include "parifs/detail/decide.ipp"
