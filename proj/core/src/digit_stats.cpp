#include "parifs/digit_stats.hpp"

#include <algorithm>
#include <cmath>

#include "parifs/errors.hpp"
#include "parifs/parallel.hpp"

namespace parifs {

LargestDigitTrace largest_digit_trace(const Word& digits, std::size_t n_max) {
  if (n_max < 1) throw InputError("largest_digit_trace needs n_max >= 1");
  if (digits.size() < n_max) {
    throw InputError("digit stream has " + std::to_string(digits.size()) + " digits, need " + std::to_string(n_max));
  }
  LargestDigitTrace out;
  out.n.reserve(n_max);
  out.L.reserve(n_max);
  out.ratio.reserve(n_max);
  Digit best = 0;
  for (std::size_t i = 0; i < n_max; ++i) {
    best = std::max(best, digits[i]);
    const std::size_t n = i + 1;
    out.n.push_back(n);
    out.L.push_back(best);
    if (n >= 3) {
      out.ratio.push_back(static_cast<double>(best) / tau_double(static_cast<double>(n)));
    } else {
      out.ratio.push_back(std::nullopt);
    }
  }
  return out;
}

OutwardInterval tau(const OutwardInterval& x) {
  OutwardInterval e = exp(OutwardInterval(Rational(1), x.precision()));
  if (certainly_less(e, x) != Certainty::certainly_true) {
    throw DomainError("tau(x) = x / log log x needs x > e; got " + x.str());
  }
  OutwardInterval ll = log(log(x));
  if (!ll.certainly_positive()) {
    throw PrecisionUndecidable("log log x is not separated from 0 at " + std::to_string(x.precision()) + " bits");
  }
  return x / ll;
}

OutwardInterval tau(const Rational& x, mpfr_prec_t prec) {
  if (x <= 2) throw DomainError("tau(x) = x / log log x needs x > e; got " + to_string(x));
  return decide<OutwardInterval>(PrecisionPolicy{prec, std::max<mpfr_prec_t>(prec, kDefaultPrecisionCap)},
                                 "tau(" + to_string(x) + ")", [&](mpfr_prec_t p) -> std::optional<OutwardInterval> {
                                   OutwardInterval X(x, p);
                                   OutwardInterval e = exp(OutwardInterval(Rational(1), p));
                                   Certainty c = certainly_less(e, X);
                                   if (c == Certainty::certainly_false) {
                                     throw DomainError("tau(x) = x / log log x needs x > e; got " + to_string(x));
                                   }
                                   if (c == Certainty::undecided) return std::nullopt;
                                   OutwardInterval ll = log(log(X));
                                   if (!ll.certainly_positive()) return std::nullopt;
                                   return X / ll;
                                 });
}

double tau_double(double x) {
  if (!(x > std::exp(1.0))) throw DomainError("tau(x) = x / log log x needs x > e");
  return x / std::log(std::log(x));
}

BigInt floor_alpha_tau(const Rational& alpha, std::uint64_t n, const PrecisionPolicy& policy) {
  if (alpha < 0) throw InputError("alpha must be non-negative");
  if (alpha == 0) return BigInt(0);
  const Rational x(from_u64(n));
  return decide<BigInt>(policy, "floor(alpha * tau(" + std::to_string(n) + "))",
                        [&](mpfr_prec_t p) -> std::optional<BigInt> {
                          OutwardInterval t = tau(x, p);
                          return certain_floor(OutwardInterval(alpha, p) * t);
                        });
}

GalambosResult galambos_from_values(std::size_t n, std::vector<double> values) {
  GalambosResult out;
  out.n = n;
  std::sort(values.begin(), values.end());
  const double N = static_cast<double>(values.size());
  auto limit = [](double y) { return y > 0 ? std::exp(-1.0 / y) : 0.0; };
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double F = limit(values[i]);
    const double above = static_cast<double>(i + 1) / N;
    const double below = static_cast<double>(i) / N;
    out.ks = std::max({out.ks, above - F, F - below});
    out.rows.push_back({values[i], above, F});
  }
  out.values = std::move(values);
  return out;
}

namespace {

Digit largest(const Word& w) { return w.empty() ? 0 : *std::max_element(w.begin(), w.end()); }

double median_of(std::vector<double> v) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

}  // namespace

GalambosResult galambos_experiment(std::size_t n, std::size_t samples, std::uint64_t seed, unsigned bits_per_digit) {
  if (n < 1000) throw InputError("galambos_experiment needs n >= 1000");
  if (samples < 100) throw InputError("galambos_experiment needs samples >= 100");
  std::vector<double> values(samples);
  parallel_for(samples, [&](std::size_t i) {
    SampledExpansion s = sample_expansion(Family::regular_cf, n, seed, i, bits_per_digit);
    values[i] = static_cast<double>(largest(s.digits)) * std::log(2.0) / static_cast<double>(n);
  });
  return galambos_from_values(n, std::move(values));
}

LogRatioResult log_ratio_experiment(std::size_t n, std::size_t samples, std::uint64_t seed, unsigned bits_per_digit) {
  if (n < 2) throw InputError("log_ratio_experiment needs n >= 2");
  if (samples < 1) throw InputError("log_ratio_experiment needs samples >= 1");
  LogRatioResult out;
  out.n = n;
  out.ratios.resize(samples);
  parallel_for(samples, [&](std::size_t i) {
    SampledExpansion s = sample_expansion(Family::regular_cf, n, seed, i, bits_per_digit);
    out.ratios[i] = std::log(static_cast<double>(largest(s.digits))) / std::log(static_cast<double>(n));
  });
  out.median = median_of(out.ratios);
  return out;
}

std::vector<double> philipp_statistic(const Word& digits, std::size_t n_max) {
  if (n_max < 3) throw InputError("philipp_statistic needs n_max > e");
  if (digits.size() < n_max) throw InputError("digit stream shorter than n_max");
  std::vector<double> out;
  out.reserve(n_max - 2);
  Digit best = std::max(digits[0], digits[1]);
  double inf = 0;
  for (std::size_t n = 3; n <= n_max; ++n) {
    best = std::max(best, digits[n - 1]);
    const double nd = static_cast<double>(n);
    const double v = static_cast<double>(best) * std::log(std::log(nd)) / nd;
    inf = n == 3 ? v : std::min(inf, v);
    out.push_back(inf);
  }
  return out;
}

std::map<Digit, Rational> digit_frequency(const Word& digits, std::size_t n) {
  if (n < 1) throw InputError("digit_frequency needs n >= 1");
  if (digits.size() < n) throw InputError("digit stream shorter than n");
  std::map<Digit, std::size_t> counts;
  for (std::size_t i = 0; i < n; ++i) ++counts[digits[i]];
  std::map<Digit, Rational> out;
  for (const auto& [digit, count] : counts) {
    Rational f(from_u64(count), from_u64(n));
    f.canonicalize();
    out.emplace(digit, f);
  }
  return out;
}

FrequencyResult frequency_experiment(Family f, Digit digit, std::size_t n, std::size_t samples, std::uint64_t seed,
                                     unsigned bits_per_digit) {
  if (bits_per_digit == 0) bits_per_digit = default_bits_per_digit(f);
  if (samples < 1) throw InputError("frequency_experiment needs samples >= 1");
  FrequencyResult out;
  out.digit = digit;
  out.n = n;
  out.per_sample.resize(samples);
  parallel_for(samples, [&](std::size_t i) {
    SampledExpansion s = sample_expansion(f, n, seed, i, bits_per_digit);
    out.per_sample[i] = static_cast<double>(std::count(s.digits.begin(), s.digits.end(), digit)) /
                        static_cast<double>(n);
  });
  double sum = 0;
  for (double v : out.per_sample) sum += v;
  out.mean = sum / static_cast<double>(samples);
  return out;
}

}  // namespace parifs
