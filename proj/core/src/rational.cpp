#include "parifs/rational.hpp"

#include <cctype>
#include <cmath>

#include "parifs/errors.hpp"

namespace parifs {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char ch : s) {
    if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
  }
  return true;
}

BigInt parse_integer(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw InputError("not a rational number: '" + std::string(whole) + "'");
  BigInt v(std::string(s), 10);
  return negative ? BigInt(-v) : v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw InputError("empty rational");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    BigInt num = parse_integer(text.substr(0, slash), text);
    std::string_view den_text = text.substr(slash + 1);
    if (!all_digits(den_text)) throw InputError("bad denominator in '" + std::string(text) + "'");
    BigInt den(std::string(den_text), 10);
    if (den == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
    Rational r(num, den);
    r.canonicalize();
    return r;
  }

  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = text.substr(0, dot);
    std::string_view frac_part = text.substr(dot + 1);
    bool negative = !int_part.empty() && int_part.front() == '-';
    if (!int_part.empty() && (int_part.front() == '-' || int_part.front() == '+')) int_part.remove_prefix(1);
    if (int_part.empty()) int_part = "0";
    if (!all_digits(int_part) || (!frac_part.empty() && !all_digits(frac_part))) {
      throw InputError("not a rational number: '" + std::string(text) + "'");
    }
    BigInt scale = pow(BigInt(10), frac_part.size());
    BigInt num = BigInt(std::string(int_part), 10) * scale;
    if (!frac_part.empty()) num += BigInt(std::string(frac_part), 10);
    if (negative) num = -num;
    Rational r(num, scale);
    r.canonicalize();
    return r;
  }

  return Rational(parse_integer(text, text));
}

std::string to_string(const Rational& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

BigInt floor(const Rational& r) {
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

BigInt ceil(const Rational& r) {
  BigInt q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

Rational abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

BigInt pow(const BigInt& base, std::uint64_t exp) {
  BigInt out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exp);
  return out;
}

Rational pow(const Rational& base, std::uint64_t exp) {
  Rational out(pow(base.get_num(), exp), pow(base.get_den(), exp));
  out.canonicalize();
  return out;
}

double to_double(const Rational& r) {
  if (r == 0) return 0.0;
  if (mpz_sizeinbase(r.get_num_mpz_t(), 2) < 900 && mpz_sizeinbase(r.get_den_mpz_t(), 2) < 900) return r.get_d();
  double sign = r < 0 ? -1.0 : 1.0;
  return sign * std::exp(log_double(abs(r)));
}

double log_double(const Rational& r) {
  if (r <= 0) throw DomainError("log of non-positive rational " + to_string(r));
  long num_exp = 0;
  long den_exp = 0;
  double num_mant = mpz_get_d_2exp(&num_exp, r.get_num_mpz_t());
  double den_mant = mpz_get_d_2exp(&den_exp, r.get_den_mpz_t());
  return std::log(num_mant) - std::log(den_mant) + static_cast<double>(num_exp - den_exp) * std::log(2.0);
}

double log_double(const BigInt& v) {
  if (v <= 0) throw DomainError("log of non-positive integer " + v.get_str());
  long e = 0;
  double mant = mpz_get_d_2exp(&e, v.get_mpz_t());
  return std::log(mant) + static_cast<double>(e) * std::log(2.0);
}

BigInt from_u64(std::uint64_t v) {
  BigInt out;
  mpz_import(out.get_mpz_t(), 1, -1, sizeof v, 0, 0, &v);
  return out;
}

std::uint64_t to_u64(const BigInt& v) {
  if (v < 0 || mpz_sizeinbase(v.get_mpz_t(), 2) > 64) throw InputError(v.get_str() + " does not fit in 64 bits");
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, -1, sizeof out, 0, 0, v.get_mpz_t());
  return out;
}

}  // namespace parifs
