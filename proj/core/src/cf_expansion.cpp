#include "parifs/cf_expansion.hpp"

#include <limits>

#include "parifs/errors.hpp"

namespace parifs {

namespace {

void require_unit_open(const Rational& x) {
  if (x <= 0 || x >= 1) throw DomainError("continued fraction expansion needs 0 < x < 1, got " + to_string(x));
}

// Leading-bit window for Lehmer steps; cofactors stay below 2^62.
constexpr unsigned kLehmerBits = 62;

__extension__ using i128 = __int128;

}  // namespace

RegularCfStream::RegularCfStream(const Rational& x) {
  require_unit_open(x);
  u_ = x.get_den();
  v_ = x.get_num();
}

void RegularCfStream::refill() {
  pending_.clear();
  pending_pos_ = 0;
  if (v_ == 0) return;

  const std::size_t ubits = mpz_sizeinbase(u_.get_mpz_t(), 2);
  if (ubits <= 64) {
    std::uint64_t u = to_u64(u_);
    std::uint64_t v = to_u64(v_);
    while (v != 0 && pending_.size() < 256) {
      pending_.push_back(u / v);
      std::uint64_t r = u % v;
      u = v;
      v = r;
    }
    u_ = from_u64(u);
    v_ = from_u64(v);
    return;
  }

  const mp_bitcnt_t h = ubits - kLehmerBits;
  mpz_tdiv_q_2exp(t_.get_mpz_t(), u_.get_mpz_t(), h);
  mpz_tdiv_q_2exp(w_.get_mpz_t(), v_.get_mpz_t(), h);
  i128 uh = static_cast<i128>(to_u64(t_));
  i128 vh = static_cast<i128>(to_u64(w_));
  i128 A = 1, B = 0, C = 0, D = 1;
  // Knuth 4.5.2 Algorithm L: accept a quotient only when both ends of the
  // cofactor interval agree on it.
  while (vh + C > 0 && vh + D > 0) {
    i128 q = (uh + A) / (vh + C);
    if (q != (uh + B) / (vh + D)) break;
    i128 T = A - q * C;
    A = C;
    C = T;
    T = B - q * D;
    B = D;
    D = T;
    T = uh - q * vh;
    uh = vh;
    vh = T;
    pending_.push_back(static_cast<Digit>(q));
  }

  if (B == 0) {
    mpz_tdiv_qr(q_.get_mpz_t(), t_.get_mpz_t(), u_.get_mpz_t(), v_.get_mpz_t());
    pending_.push_back(to_u64(q_));
    std::swap(u_, v_);
    std::swap(v_, t_);
    return;
  }

  auto combine = [](BigInt& out, const BigInt& x, long cx, const BigInt& y, long cy) {
    mpz_mul_si(out.get_mpz_t(), x.get_mpz_t(), cx);
    if (cy >= 0) {
      mpz_addmul_ui(out.get_mpz_t(), y.get_mpz_t(), static_cast<unsigned long>(cy));
    } else {
      mpz_submul_ui(out.get_mpz_t(), y.get_mpz_t(), static_cast<unsigned long>(-cy));
    }
  };
  combine(t_, u_, static_cast<long>(A), v_, static_cast<long>(B));
  combine(w_, u_, static_cast<long>(C), v_, static_cast<long>(D));
  std::swap(u_, t_);
  std::swap(v_, w_);
}

std::size_t RegularCfStream::take(std::size_t count, Word& out) {
  std::size_t taken = 0;
  while (taken < count) {
    if (pending_pos_ == pending_.size()) {
      if (v_ == 0) break;
      refill();
      continue;
    }
    std::size_t avail = std::min(pending_.size() - pending_pos_, count - taken);
    out.insert(out.end(), pending_.begin() + static_cast<std::ptrdiff_t>(pending_pos_),
               pending_.begin() + static_cast<std::ptrdiff_t>(pending_pos_ + avail));
    pending_pos_ += avail;
    taken += avail;
  }
  return taken;
}

CfDigits regular_cf_digits(const Rational& x, std::size_t n) {
  RegularCfStream s(x);
  CfDigits out;
  out.digits.reserve(std::min<std::size_t>(n, 1 << 20));
  s.take(n, out.digits);
  out.terminated = out.digits.size() < n;
  return out;
}

CfDigits regular_cf_digits_euclid(const Rational& x, std::size_t n) {
  require_unit_open(x);
  BigInt u = x.get_den();
  BigInt v = x.get_num();
  BigInt q, r;
  CfDigits out;
  while (v != 0 && out.digits.size() < n) {
    mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t());
    out.digits.push_back(to_u64(q));
    std::swap(u, v);
    std::swap(v, r);
  }
  out.terminated = out.digits.size() < n;
  return out;
}

CfDigits backward_cf_digits(const Rational& x, std::size_t n) {
  RegularCfStream s(x);
  Word buf;
  std::size_t pos = 0;
  auto next = [&](Digit& a) {
    if (pos == buf.size()) {
      buf.clear();
      pos = 0;
      if (s.take(1024, buf) == 0) return false;
    }
    a = buf[pos++];
    return true;
  };
  auto last_read = [&] { return pos == buf.size() && s.exhausted(); };

  CfDigits out;
  Word& digits = out.digits;
  while (digits.size() < n) {
    Digit a = 0;
    Digit b = 0;
    if (!next(a)) break;
    std::size_t twos = static_cast<std::size_t>(std::min<Digit>(a - 1, n - digits.size()));
    digits.insert(digits.end(), twos, 2);
    if (digits.size() == n || !next(b)) break;
    if (b > std::numeric_limits<Digit>::max() - 2) throw InputError("backward digit exceeds 64 bits");
    bool last = last_read();
    digits.push_back(last ? b + 1 : b + 2);
    if (last) break;
  }
  out.terminated = digits.size() < n;
  return out;
}

unsigned default_bits_per_digit(Family f) {
  switch (f) {
    case Family::regular_cf:
      return kRegularBitsPerDigit;
    case Family::backward_cf:
      return kBackwardBitsPerDigit;
    default:
      throw InputError("sampling supports regular_cf and backward_cf, not " + to_string(f));
  }
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(seed ^ mix(index + 0x632be59bd9b4e019ULL));
}

SampledExpansion sample_expansion(Family f, std::size_t n, std::uint64_t seed, std::uint64_t index,
                                  unsigned bits_per_digit, unsigned retry_cap) {
  if (f != Family::regular_cf && f != Family::backward_cf) default_bits_per_digit(f);
  if (n == 0) throw InputError("sample_expansion needs n >= 1");
  if (bits_per_digit == 0) throw InputError("bits_per_digit must be positive");
  auto expand = [f](const Rational& x, std::size_t count) {
    return f == Family::regular_cf ? regular_cf_digits(x, count) : backward_cf_digits(x, count);
  };

  gmp_randclass rng(gmp_randinit_mt);
  rng.seed(from_u64(stream_seed(seed, index)));
  const std::size_t bits = static_cast<std::size_t>(bits_per_digit) * n;

  for (unsigned attempt = 1; attempt <= retry_cap; ++attempt) {
    BigInt N = rng.get_z_bits(bits);
    BigInt R = rng.get_z_bits(bits);
    if (N == 0) continue;
    Rational x(N, BigInt(1) << bits);
    x.canonicalize();
    CfDigits first = expand(x, n);
    if (first.terminated) continue;
    Rational replay((N << bits) + R, BigInt(1) << (2 * bits));
    replay.canonicalize();
    CfDigits second = expand(replay, n);
    if (second.digits != first.digits) continue;
    return SampledExpansion{std::move(first.digits), std::move(N), bits, attempt};
  }
  throw InputError("bit budget of " + std::to_string(bits_per_digit) + " bits/digit did not yield " +
                   std::to_string(n) + " stable digits within " + std::to_string(retry_cap) + " attempts");
}

}  // namespace parifs
