#include "parifs/ifs.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "parifs/errors.hpp"
#include "parifs/systems.hpp"

namespace parifs {

std::string to_string(Family f) {
  switch (f) {
    case Family::regular_cf:
      return "regular_cf";
    case Family::backward_cf:
      return "backward_cf";
    case Family::even_cf:
      return "even_cf";
    case Family::explicit_maps:
      return "explicit";
  }
  return "?";
}

std::string to_string(EncodeStatus s) {
  switch (s) {
    case EncodeStatus::complete:
      return "complete";
    case EncodeStatus::hit_boundary:
      return "hit_boundary";
    case EncodeStatus::exited_limit_set:
      return "exited_limit_set";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// QuadraticSurd

int QuadraticSurd::sign() const {
  int rs = sgn(rational);
  int ss = coeff == 0 ? 0 : sgn(coeff) * (radicand > 0 ? 1 : 0);
  if (ss == 0) return rs;
  if (rs == 0 || rs == ss) return ss;
  Rational lhs = rational * rational;
  Rational rhs = coeff * coeff * radicand;
  if (lhs > rhs) return rs;
  if (lhs < rhs) return ss;
  return 0;
}

double QuadraticSurd::approx() const {
  return to_double(rational) + to_double(coeff) * std::sqrt(radicand.get_d());
}

std::string QuadraticSurd::str() const {
  if (is_rational()) return parifs::to_string(rational);
  return parifs::to_string(rational) + (coeff < 0 ? " - " : " + ") + parifs::to_string(abs(coeff)) + "*sqrt(" +
         radicand.get_str() + ")";
}

std::optional<QuadraticSurd> neutral_fixed_point(const MoebiusBranch& m) {
  const BigInt& a = m.a();
  const BigInt& c = m.c();
  const BigInt& d = m.d();
  const BigInt& det = m.det();

  auto in_unit = [](const QuadraticSurd& x) {
    QuadraticSurd one_minus{Rational(1) - x.rational, -x.coeff, x.radicand};
    return x.sign() >= 0 && one_minus.sign() >= 0;
  };

  if (c == 0) {
    if (abs(a) == abs(d)) {
      throw InputError("branch " + to_string(m) + " has |phi'| = 1 everywhere");
    }
    return std::nullopt;
  }

  BigInt trace = a + d;
  if (det > 0 && trace * trace == 4 * det) {
    // Parabolic matrix: the double root of c x^2 + (d - a) x - b = 0.
    QuadraticSurd x{Rational(BigInt(a - d), BigInt(2 * c)), Rational(0), BigInt(1)};
    x.rational.canonicalize();
    if (in_unit(x)) return x;
    return std::nullopt;
  }

  if (det < 0 && trace == 0) {
    // Multiplier -1 at both fixed points (a - d ± 2√(-det)) / (2c).
    BigInt radicand = -det;
    Rational base(BigInt(a - d), BigInt(2 * c));
    base.canonicalize();
    Rational step(BigInt(1), c);
    step.canonicalize();
    if (mpz_perfect_square_p(radicand.get_mpz_t())) {
      BigInt root;
      mpz_sqrt(root.get_mpz_t(), radicand.get_mpz_t());
      step *= root;
      radicand = 1;
      for (int s : {-1, 1}) {
        QuadraticSurd x{base + s * step, Rational(0), BigInt(1)};
        if (in_unit(x)) return x;
      }
      return std::nullopt;
    }
    for (int s : {-1, 1}) {
      QuadraticSurd x{base, s * step, radicand};
      if (in_unit(x)) return x;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// IfsSystem

namespace {

struct FamilyInfo {
  Digit min_index;
};

FamilyInfo family_info(Family f) {
  switch (f) {
    case Family::regular_cf:
      return {1};
    case Family::backward_cf:
      return {2};
    case Family::even_cf:
      return {1};
    case Family::explicit_maps:
      break;
  }
  throw InputError("not a schematic family");
}

BigInt big(Digit i) {
  BigInt out;
  mpz_import(out.get_mpz_t(), 1, -1, sizeof(Digit), 0, 0, &i);
  return out;
}

// Closed-form images of the schematic families: indices that share the point y
// as an endpoint. Returns {left_image, right_image} where y is the right
// endpoint of the left image and the left endpoint of the right image.
struct TieCandidates {
  Digit left;
  Digit right;
};

}  // namespace

IfsSystem IfsSystem::family(Family f) {
  IfsSystem sys;
  sys.family_ = f;
  sys.name_ = to_string(f);
  sys.indices_ = IndexSet::tail(family_info(f).min_index);
  // The trace/determinant of each family's matrix is affine in i, and a real
  // Möbius map has a neutral fixed point only when trace^2 = 4 det (det > 0)
  // or trace = 0 (det < 0). Regular CF: trace i, det -1; backward: trace i,
  // det 1; even: trace i with det 1 (even i) or trace i + 1 with det -1 (odd i).
  // Only i = 2 can qualify, so scanning the first indices is exhaustive.
  const Digit lo = sys.indices_.min();
  for (Digit i = lo; i < lo + 8; ++i) {
    if (auto fp = neutral_fixed_point(sys.family_branch(i))) sys.parabolic_.push_back({i, *fp});
  }
  return sys;
}

IfsSystem IfsSystem::from_branches(std::string name, std::map<Digit, MoebiusBranch> branches,
                                   std::optional<DecayConstants> decay) {
  if (branches.size() < 2) throw InputError("an IFS needs at least 2 indices, got " + std::to_string(branches.size()));
  IfsSystem sys;
  sys.name_ = std::move(name);
  sys.family_ = Family::explicit_maps;
  std::vector<Digit> idx;
  for (const auto& [i, m] : branches) {
    if (i == 0) throw InputError("branch index must be positive");
    if (!m.valid_on_unit_interval()) {
      throw InputError("branch " + std::to_string(i) + " " + to_string(m) + " does not map [0,1] into [0,1]");
    }
    auto fp = neutral_fixed_point(m);
    Rational at0 = m.derivative(Rational(0));
    Rational at1 = m.derivative(Rational(1));
    if (at0 > 1 || at1 > 1) {
      throw InputError("branch " + std::to_string(i) + " is expanding somewhere on [0,1]");
    }
    if (at0 == 1 || at1 == 1) {
      // (A1): |φ'| may reach 1 only at the unique fixed point.
      bool ok = fp && fp->is_rational() &&
                ((at0 == 1 && fp->rational == 0 && at1 < 1) || (at1 == 1 && fp->rational == 1 && at0 < 1));
      if (!ok) throw InputError("branch " + std::to_string(i) + " violates (A1): |phi'| = 1 away from a fixed point");
    }
    if (fp) sys.parabolic_.push_back({i, *fp});
    idx.push_back(i);
  }
  sys.indices_ = IndexSet::finite(idx);
  sys.table_ = std::move(branches);

  OscReport osc = osc_check(sys, IndexWindow{sys.indices_.min(), sys.indices_.max()});
  if (!osc.holds) {
    throw InputError("open set condition fails for indices " + std::to_string(osc.first) + " and " +
                     std::to_string(osc.second) + ": overlap (" + to_string(osc.overlap_lo) + ", " +
                     to_string(osc.overlap_hi) + ")");
  }
  if (decay) {
    auto rep = decay_check(sys, decay->c, decay->d, IndexWindow{sys.indices_.min(), sys.indices_.max()});
    if (!rep.holds) throw InputError("claimed decay constants do not hold");
  }
  sys.decay_ = std::move(decay);
  return sys;
}

bool IfsSystem::is_parabolic(Digit i) const {
  return std::any_of(parabolic_.begin(), parabolic_.end(), [i](const ParabolicPoint& p) { return p.index == i; });
}

MoebiusBranch IfsSystem::family_branch(Digit i) const {
  const BigInt n = big(i);
  switch (family_) {
    case Family::regular_cf:
      return MoebiusBranch(BigInt(0), BigInt(1), BigInt(1), n);  // 1/(x+i)
    case Family::backward_cf:
      return MoebiusBranch(BigInt(1), BigInt(n - 2), BigInt(1), BigInt(n - 1));  // 1 - 1/(x+i-1)
    case Family::even_cf:
      if (i % 2 == 0) return MoebiusBranch(BigInt(0), BigInt(1), BigInt(-1), n);  // 1/(i-x)
      return MoebiusBranch(BigInt(0), BigInt(1), BigInt(1), BigInt(n + 1));     // 1/(x+i+1)
    case Family::explicit_maps:
      break;
  }
  throw InputError("no closed form for explicit system");
}

MoebiusBranch IfsSystem::branch(Digit i) const {
  if (!indices_.contains(i)) {
    throw InputError("index " + std::to_string(i) + " is not in the index set " + indices_.describe() + " of " + name_);
  }
  if (family_ == Family::explicit_maps) return table_.at(i);
  return family_branch(i);
}

std::vector<Digit> IfsSystem::window(const IndexWindow& w) const {
  auto out = indices_.within(w);
  if (out.empty()) {
    throw InputError("index window " + std::to_string(w.lo) + ".." + std::to_string(w.hi) + " contains no index of " +
                     name_);
  }
  return out;
}

Location IfsSystem::locate(const Rational& y) const {
  if (family_ == Family::explicit_maps) return locate_explicit(y);
  return locate_family(y);
}

Location IfsSystem::locate_family(const Rational& y) const {
  if (y <= 0 || y >= 1) return {Location::Kind::outside, 0};
  auto digit_of = [](const BigInt& v) -> Digit {
    if (!mpz_fits_ulong_p(v.get_mpz_t())) throw DomainError("digit exceeds 64 bits");
    return v.get_ui();
  };

  bool tie = false;
  Digit interior = 0;
  TieCandidates cand{0, 0};
  switch (family_) {
    case Family::regular_cf: {
      Rational t = 1 / y;
      if (t.get_den() == 1) {
        tie = true;
        Digit T = digit_of(t.get_num());
        cand = {T, T - 1};
      } else {
        interior = digit_of(floor(t));
      }
      break;
    }
    case Family::backward_cf: {
      Rational u = 1 / (1 - y);
      if (u.get_den() == 1) {
        tie = true;
        Digit U = digit_of(u.get_num());
        cand = {U, U + 1};
      } else {
        interior = digit_of(floor(u)) + 1;
      }
      break;
    }
    case Family::even_cf: {
      auto g = [](Digit f) { return f % 2 == 1 ? f + 1 : f - 1; };
      Rational t = 1 / y;
      if (t.get_den() == 1) {
        tie = true;
        Digit T = digit_of(t.get_num());
        cand = {g(T), g(T - 1)};
      } else {
        interior = g(digit_of(floor(t)));
      }
      break;
    }
    case Family::explicit_maps:
      break;
  }
  if (!tie) {
    if (indices_.contains(interior)) return {Location::Kind::interior, interior};
    return {Location::Kind::outside, 0};
  }
  if (indices_.contains(cand.left)) return {Location::Kind::boundary, cand.left};
  if (indices_.contains(cand.right)) return {Location::Kind::boundary, cand.right};
  return {Location::Kind::outside, 0};
}

Location IfsSystem::locate_explicit(const Rational& y) const {
  std::optional<Digit> left;
  std::optional<Digit> right;
  for (const auto& [i, m] : table_) {
    if (!indices_.contains(i)) continue;
    Rational p = m.apply(Rational(0));
    Rational q = m.apply(Rational(1));
    const Rational& lo = p < q ? p : q;
    const Rational& hi = p < q ? q : p;
    if (lo < y && y < hi) return {Location::Kind::interior, i};
    if (y == hi && !left) left = i;
    if (y == lo && !right) right = i;
  }
  if (left) return {Location::Kind::boundary, *left};
  if (right) return {Location::Kind::boundary, *right};
  return {Location::Kind::outside, 0};
}

IfsSystem IfsSystem::with_indices(IndexSet subset, std::string name, std::vector<std::string> extra_warnings) const {
  IfsSystem out = *this;
  out.indices_ = std::move(subset);
  out.name_ = std::move(name);
  std::erase_if(out.parabolic_, [&](const ParabolicPoint& p) { return !out.indices_.contains(p.index); });
  if (family_ == Family::explicit_maps) {
    std::erase_if(out.table_, [&](const auto& kv) { return !out.indices_.contains(kv.first); });
  }
  out.warnings_.insert(out.warnings_.end(), extra_warnings.begin(), extra_warnings.end());
  return out;
}

IfsSystem IfsSystem::with_decay(std::optional<DecayConstants> decay) const {
  IfsSystem out = *this;
  out.decay_ = std::move(decay);
  return out;
}

// ---------------------------------------------------------------------------
// Words and fundamental intervals

MoebiusBranch compose_word(const IfsSystem& sys, const Word& w) {
  MoebiusBranch out = MoebiusBranch::identity();
  for (Digit i : w) out.then_inner(sys.branch(i));
  return out;
}

FundInterval fundamental_interval(const IfsSystem& sys, const Word& w) {
  MoebiusBranch m = compose_word(sys, w);
  Rational p = m.apply(Rational(0));
  Rational q = m.apply(Rational(1));
  if (p < q) return {w, p, q};
  return {w, q, p};
}

EncodeResult encode_digits(const IfsSystem& sys, const Rational& x, std::size_t n) {
  if (x <= 0 || x >= 1) throw DomainError("encode_digits needs 0 < x < 1, got " + to_string(x));
  EncodeResult out;
  Rational y = x;
  for (std::size_t step = 1; step <= n; ++step) {
    Location loc = sys.locate(y);
    if (loc.kind == Location::Kind::outside) {
      out.status = EncodeStatus::exited_limit_set;
      out.step = step;
      break;
    }
    out.digits.push_back(loc.index);
    y = sys.branch(loc.index).inverse().apply(y);
    if (loc.kind == Location::Kind::boundary) {
      out.status = EncodeStatus::hit_boundary;
      out.step = step;
      break;
    }
  }
  out.tail = y;
  return out;
}

Rational decode_point(const IfsSystem& sys, const Word& w, const Rational& anchor) {
  if (anchor < 0 || anchor > 1) throw DomainError("anchor must lie in [0,1], got " + to_string(anchor));
  return compose_word(sys, w).apply(anchor);
}

// ---------------------------------------------------------------------------
// Enumeration and diagnostics

void for_each_word(const std::vector<MoebiusBranch>& maps, const std::vector<Digit>& labels, std::size_t n,
                   std::size_t enumeration_cap,
                   const std::function<void(const Word&, const MoebiusBranch&)>& visit) {
  if (maps.size() != labels.size()) throw InputError("for_each_word: label/map count mismatch");
  if (maps.empty()) throw InputError("for_each_word: empty alphabet");
  double count = std::pow(static_cast<double>(maps.size()), static_cast<double>(n));
  if (count > static_cast<double>(enumeration_cap)) {
    throw InputError("enumeration of " + std::to_string(maps.size()) + "^" + std::to_string(n) +
                     " words exceeds the cap " + std::to_string(enumeration_cap));
  }
  if (n == 0) {
    visit(Word{}, MoebiusBranch::identity());
    return;
  }
  Word word(n);
  std::vector<std::size_t> choice(n, 0);
  std::vector<MoebiusBranch> prefix(n + 1, MoebiusBranch::identity());
  std::size_t level = 0;
  // Iterative depth-first walk; prefix[k] = maps[choice[0]] ∘ ⋯ ∘ maps[choice[k-1]].
  while (true) {
    prefix[level + 1] = compose(prefix[level], maps[choice[level]]);
    word[level] = labels[choice[level]];
    if (level + 1 == n) {
      visit(word, prefix[n]);
      // advance
      while (true) {
        if (++choice[level] < maps.size()) break;
        choice[level] = 0;
        if (level == 0) return;
        --level;
      }
    } else {
      ++level;
      choice[level] = 0;
    }
  }
}

namespace {

std::vector<MoebiusBranch> branches_of(const IfsSystem& sys, const std::vector<Digit>& labels) {
  std::vector<MoebiusBranch> out;
  out.reserve(labels.size());
  for (Digit i : labels) out.push_back(sys.branch(i));
  return out;
}

// sup_i of the single-letter distortion ratio over the whole schematic index
// set. Each family's ratio is decreasing in i within a parity class
// (((i+1)/i)^2, (i/(i-1))^2, ((i+2)/(i+1))^2), so the first two members bound it.
Rational family_ratio_sup(const IfsSystem& sys) {
  auto first = sys.indices().within({sys.indices().min(), sys.indices().min() + 3});
  Rational best = 0;
  for (std::size_t k = 0; k < first.size() && k < 2; ++k) best = std::max(best, sys.branch(first[k]).distortion_ratio());
  return best;
}

// x^(u/v) >= y for positive rationals, decided exactly as x^u >= y^v.
bool rational_power_at_least(const Rational& x, const Rational& exponent, const Rational& y) {
  if (exponent < 0) throw InputError("negative exponent");
  const BigInt& u = exponent.get_num();
  const BigInt& v = exponent.get_den();
  if (!mpz_fits_ulong_p(u.get_mpz_t()) || !mpz_fits_ulong_p(v.get_mpz_t())) throw InputError("exponent too large");
  return pow(x, u.get_ui()) >= pow(y, v.get_ui());
}

}  // namespace

DistortionReport distortion_Dn(const IfsSystem& sys, std::size_t n, const IndexWindow& window,
                               std::size_t enumeration_cap) {
  if (n == 0) throw InputError("distortion_Dn needs n >= 1");
  auto labels = sys.window(window);
  auto maps = branches_of(sys, labels);
  DistortionReport rep;
  rep.order = n;
  rep.windowed_ratio = 1;
  rep.witness = Word(n, labels.front());
  for_each_word(maps, labels, n, enumeration_cap, [&](const Word& w, const MoebiusBranch& m) {
    ++rep.words_enumerated;
    Rational r = m.distortion_ratio();
    if (r > rep.windowed_ratio) {
      rep.windowed_ratio = r;
      rep.witness = w;
    }
  });
  rep.windowed = log(OutwardInterval(rep.windowed_ratio, kDefaultPrecisionBits));
  if (sys.schematic()) {
    rep.window_truncated = true;
    Rational sup = family_ratio_sup(sys);
    rep.tail_bound = OutwardInterval(BigInt(n), kDefaultPrecisionBits) * log(OutwardInterval(sup, kDefaultPrecisionBits));
  } else {
    rep.window_truncated = labels.size() != *sys.indices().size();
  }
  return rep;
}

DecayCheckReport decay_check(const IfsSystem& sys, const Rational& c, const Rational& d, const IndexWindow& window) {
  if (c <= 0) throw InputError("decay constant c must be positive");
  if (d <= 1) throw InputError("decay exponent d must exceed 1, got " + to_string(d));
  DecayCheckReport rep;
  rep.holds = true;
  // min|φ_i'| >= c / i^d  <=>  i^d * min|φ_i'| >= c  <=>  i^d >= c / min|φ_i'|
  for (Digit i : sys.window(window)) {
    Rational need = c / sys.branch(i).min_derivative();
    if (!rational_power_at_least(Rational(big(i)), d, need)) {
      rep.holds = false;
      rep.violating_index = i;
      return rep;
    }
  }
  if (!sys.schematic()) {
    auto inside = sys.indices().within(window);
    if (inside.size() != *sys.indices().size()) {
      rep.tail_argument = "window covers " + std::to_string(inside.size()) + " of " +
                          std::to_string(*sys.indices().size()) + " indices";
    }
    return rep;
  }
  // Schematic tail: every family has min|φ_i'| = 1/(i+s)^2 with s fixed within a
  // parity class (regular s=1, backward s=0, even: s=0 for even i, s=2 for odd i).
  // The bound becomes i^d >= c (i+s)^2, and i^d/(i+s)^2 is nondecreasing for
  // d >= 2, so the first tail member of each class decides it. For d < 2 the
  // ratio tends to 0 and the bound fails eventually.
  if (d < 2) {
    rep.holds = false;
    rep.tail_argument = "d < 2: i^d / (i+s)^2 -> 0, so min|phi_i'| = 1/(i+s)^2 < c/i^d for large i";
    return rep;
  }
  auto tail = sys.indices().within({window.hi + 1, window.hi + 4});
  for (std::size_t k = 0; k < tail.size() && k < 2; ++k) {
    Rational need = c / sys.branch(tail[k]).min_derivative();
    if (!rational_power_at_least(Rational(big(tail[k])), d, need)) {
      rep.holds = false;
      rep.violating_index = tail[k];
      return rep;
    }
  }
  rep.tail_argument = "i^d/(i+s)^2 nondecreasing for d >= 2; checked at the first tail index of each parity class";
  return rep;
}

std::vector<ParabolicPoint> parabolic_indices(const IfsSystem& sys) { return sys.parabolic(); }

RenyiReport renyi_quantity(const IfsSystem& sys, const IndexWindow& window) {
  RenyiReport rep;
  rep.windowed_sup = 0;
  for (Digit i : sys.window(window)) {
    MoebiusBranch m = sys.branch(i);
    // (log|φ'|)' = -2c / (c x + d); its modulus peaks where |c x + d| is smallest.
    BigInt lo = std::min(abs(m.d()), abs(BigInt(m.c() + m.d())));
    Rational v(BigInt(2 * abs(m.c())), lo);
    v.canonicalize();
    if (v > rep.windowed_sup) {
      rep.windowed_sup = v;
      rep.witness = i;
    }
  }
  if (sys.schematic()) {
    // All three families have |c| = 1 and |c x + d| >= i - 1 on [0,1].
    Digit next = window.hi + 1;
    rep.tail_bound = Rational(2, static_cast<unsigned long>(next - 1));
  }
  return rep;
}

std::vector<DecayProbeRow> uniform_decay_probe(const IfsSystem& sys, std::size_t depth, const IndexWindow& window,
                                               std::size_t enumeration_cap) {
  if (depth == 0) throw InputError("uniform_decay_probe needs depth >= 1");
  auto labels = sys.window(window);
  auto maps = branches_of(sys, labels);
  std::vector<DecayProbeRow> rows;
  for (std::size_t n = 1; n <= depth; ++n) {
    DecayProbeRow row;
    row.order = n;
    row.max_diameter = -1;
    for_each_word(maps, labels, n, enumeration_cap, [&](const Word& w, const MoebiusBranch& m) {
      Rational diam = m.image_diameter();
      if (diam > row.max_diameter) {
        row.max_diameter = diam;
        row.witness = w;
      }
    });
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace parifs
