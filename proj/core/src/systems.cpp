#include "parifs/systems.hpp"

#include <algorithm>

#include "parifs/errors.hpp"

namespace parifs {

IfsSystem builtin(const std::string& name) {
  if (name == "regular_cf") {
    return IfsSystem::family(Family::regular_cf).with_decay(DecayConstants{Rational(1, 4), Rational(2)});
  }
  if (name == "backward_cf") {
    return IfsSystem::family(Family::backward_cf).with_decay(DecayConstants{Rational(1), Rational(2)});
  }
  if (name == "even_cf") {
    return IfsSystem::family(Family::even_cf).with_decay(DecayConstants{Rational(1, 9), Rational(2)});
  }
  throw InputError("unknown builtin system '" + name + "' (expected regular_cf, backward_cf or even_cf)");
}

namespace {

// Closed-form images of the schematic families: regular φ_i((0,1)) = (1/(i+1), 1/i);
// backward (1 - 1/(i-1), 1 - 1/i); even, i even: (1/i, 1/(i-1)); i odd: (1/(i+2), 1/(i+1)).
// These tile (0,1) with abutting endpoints, so disjointness holds for every index.
std::pair<Rational, Rational> closed_form_image(Family f, Digit i) {
  auto q = [](unsigned long num, unsigned long den) {
    Rational r(num, den);
    r.canonicalize();
    return r;
  };
  switch (f) {
    case Family::regular_cf:
      return {q(1, i + 1), q(1, i)};
    case Family::backward_cf:
      return {q(i - 2, i - 1), q(i - 1, i)};
    case Family::even_cf:
      if (i % 2 == 0) return {q(1, i), q(1, i - 1)};
      return {q(1, i + 2), q(1, i + 1)};
    case Family::explicit_maps:
      break;
  }
  throw InputError("no closed form for explicit system");
}

}  // namespace

OscReport osc_check(const IfsSystem& sys, const IndexWindow& window) {
  struct Image {
    Digit index;
    Rational lo, hi;
  };
  std::vector<Image> images;
  for (Digit i : sys.window(window)) {
    MoebiusBranch m = sys.branch(i);
    Rational p = m.apply(Rational(0));
    Rational q = m.apply(Rational(1));
    images.push_back(p < q ? Image{i, p, q} : Image{i, q, p});
  }
  OscReport rep;
  std::sort(images.begin(), images.end(), [](const Image& x, const Image& y) { return x.lo < y.lo; });
  // After sorting by left endpoint, open intervals are pairwise disjoint iff
  // each one starts at or after the running maximum of previous right endpoints.
  std::size_t reach = 0;
  for (std::size_t k = 1; k < images.size(); ++k) {
    if (images[k].lo < images[reach].hi) {
      rep.holds = false;
      rep.first = images[reach].index;
      rep.second = images[k].index;
      rep.overlap_lo = images[k].lo;
      rep.overlap_hi = std::min(images[k].hi, images[reach].hi);
      if (rep.first > rep.second) std::swap(rep.first, rep.second);
      return rep;
    }
    if (images[k].hi > images[reach].hi) reach = k;
  }
  if (sys.schematic()) {
    for (const Image& img : images) {
      auto [lo, hi] = closed_form_image(sys.family_tag(), img.index);
      if (lo != img.lo || hi != img.hi) {
        throw VerificationFailure("closed-form image of index " + std::to_string(img.index) +
                                  " disagrees with its matrix");
      }
    }
    rep.closed_form_layout = true;
  }
  return rep;
}

IfsSystem restrict_indices(const IfsSystem& sys, const Restriction& subset) {
  IndexSet target = IndexSet::finite({});
  std::string label;
  if (const auto* list = std::get_if<std::vector<Digit>>(&subset)) {
    target = IndexSet::finite(*list);
    label = target.describe();
  } else {
    const auto& tail = std::get<TailRestriction>(subset);
    if (sys.indices().is_finite()) {
      std::vector<Digit> kept;
      for (Digit i : sys.indices().explicit_indices()) {
        if (i >= tail.min && (tail.parity == Parity::any || (i % 2 == 0) == (tail.parity == Parity::even))) {
          kept.push_back(i);
        }
      }
      target = IndexSet::finite(kept);
    } else {
      Parity base = sys.indices().parity();
      if (base != Parity::any && tail.parity != Parity::any && base != tail.parity) {
        throw InputError("restriction parity is incompatible with the index set " + sys.indices().describe());
      }
      target = IndexSet::tail(std::max(tail.min, sys.indices().min()), tail.parity == Parity::any ? base : tail.parity);
    }
    label = target.describe();
  }
  if (!target.is_subset_of(sys.indices())) {
    throw InputError("restriction " + label + " is not a subset of " + sys.indices().describe());
  }
  if (target.size() && *target.size() < 2) {
    throw InputError("restriction " + label + " keeps fewer than 2 indices");
  }
  std::vector<std::string> warnings;
  for (const auto& p : sys.parabolic()) {
    if (!target.contains(p.index)) {
      warnings.push_back("parabolic index " + std::to_string(p.index) +
                         " removed; the restricted limit set may have strictly smaller dimension");
    }
  }
  return sys.with_indices(std::move(target), sys.name() + "|" + label, std::move(warnings));
}

std::vector<EvenCfDigitPair> even_cf_convert(const std::vector<Digit>& digits) {
  std::vector<EvenCfDigitPair> out;
  out.reserve(digits.size());
  for (Digit a : digits) {
    if (a == 0) throw InputError("even-CF digits are positive");
    out.push_back(a % 2 == 0 ? EvenCfDigitPair{a, -1} : EvenCfDigitPair{a + 1, +1});
  }
  return out;
}

std::vector<Digit> even_cf_unconvert(const std::vector<EvenCfDigitPair>& pairs) {
  std::vector<Digit> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) {
    if (p.b < 2 || p.b % 2 != 0 || (p.eps != 1 && p.eps != -1)) {
      throw InputError("invalid even-CF pair (" + std::to_string(p.b) + "," + std::to_string(p.eps) + ")");
    }
    out.push_back(p.eps == -1 ? p.b : p.b - 1);
  }
  return out;
}

IfsSystem build_system(const SystemConfig& cfg) {
  IfsSystem sys = [&] {
    if (cfg.family == "explicit") {
      std::map<Digit, MoebiusBranch> table;
      for (const auto& br : cfg.branches) {
        if (table.count(br.index)) throw ConfigError("branches", "duplicate index " + std::to_string(br.index));
        try {
          table.emplace(br.index, MoebiusBranch(br.a, br.b, br.c, br.d));
        } catch (const InputError& e) {
          throw ConfigError("branches", e.what());
        }
      }
      try {
        return IfsSystem::from_branches(cfg.name.empty() ? "explicit" : cfg.name, std::move(table));
      } catch (const InputError& e) {
        throw ConfigError("branches", e.what());
      }
    }
    if (!cfg.branches.empty()) throw ConfigError("branches", "only allowed with family \"explicit\"");
    try {
      return builtin(cfg.family);
    } catch (const InputError& e) {
      throw ConfigError("family", e.what());
    }
  }();
  if (cfg.restrict_to) {
    try {
      sys = restrict_indices(sys, *cfg.restrict_to);
    } catch (const InputError& e) {
      throw ConfigError("restrict_to", e.what());
    }
  }
  if (cfg.decay) {
    const IndexWindow window{sys.indices().min(), sys.indices().is_finite() ? sys.indices().max() : sys.indices().min() + 63};
    DecayCheckReport rep;
    try {
      rep = decay_check(sys, cfg.decay->c, cfg.decay->d, window);
    } catch (const InputError& e) {
      throw ConfigError("decay", e.what());
    }
    if (!rep.holds) throw ConfigError("decay", "claimed (c, d) does not bound min|phi_i'| from below");
    sys = sys.with_decay(cfg.decay);
  }
  if (!cfg.name.empty() && sys.name() != cfg.name) sys = sys.with_indices(sys.indices(), cfg.name, {});
  return sys;
}

IfsSystem load_system(const std::string& spec) {
  if (spec == "regular_cf" || spec == "backward_cf" || spec == "even_cf") return builtin(spec);
  return build_system(read_system_config(spec));
}

}  // namespace parifs
