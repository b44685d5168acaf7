#include "parifs/index_set.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "parifs/errors.hpp"

namespace parifs {

namespace {

bool parity_ok(Digit i, Parity p) {
  switch (p) {
    case Parity::any:
      return true;
    case Parity::even:
      return i % 2 == 0;
    case Parity::odd:
      return i % 2 == 1;
  }
  return false;
}

Digit parse_digit(std::string_view s, const std::string& whole) {
  Digit v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw InputError("bad index '" + std::string(s) + "' in '" + whole + "'");
  }
  return v;
}

}  // namespace

IndexSet IndexSet::finite(std::vector<Digit> indices) {
  std::sort(indices.begin(), indices.end());
  if (std::adjacent_find(indices.begin(), indices.end()) != indices.end()) {
    throw InputError("duplicate index in index set");
  }
  if (!indices.empty() && indices.front() == 0) throw InputError("indices are positive integers");
  IndexSet s;
  s.finite_ = true;
  s.explicit_ = std::move(indices);
  return s;
}

IndexSet IndexSet::tail(Digit min, Parity parity) {
  if (min == 0) throw InputError("indices are positive integers");
  IndexSet s;
  s.finite_ = false;
  s.parity_ = parity;
  s.min_ = min;
  while (!parity_ok(s.min_, parity)) ++s.min_;
  return s;
}

bool IndexSet::contains(Digit i) const {
  if (finite_) return std::binary_search(explicit_.begin(), explicit_.end(), i);
  return i >= min_ && parity_ok(i, parity_);
}

std::optional<std::size_t> IndexSet::size() const {
  if (finite_) return explicit_.size();
  return std::nullopt;
}

Digit IndexSet::min() const {
  if (finite_) {
    if (explicit_.empty()) throw InputError("empty index set has no minimum");
    return explicit_.front();
  }
  return min_;
}

Digit IndexSet::max() const {
  if (!finite_) throw InputError("schematic index set has no maximum");
  if (explicit_.empty()) throw InputError("empty index set has no maximum");
  return explicit_.back();
}

std::vector<Digit> IndexSet::within(const IndexWindow& window) const {
  std::vector<Digit> out;
  if (finite_) {
    for (Digit i : explicit_) {
      if (window.contains(i)) out.push_back(i);
    }
    return out;
  }
  for (Digit i = std::max(window.lo, min_); i <= window.hi; ++i) {
    if (parity_ok(i, parity_)) out.push_back(i);
    if (i == UINT64_MAX) break;
  }
  return out;
}

bool IndexSet::is_subset_of(const IndexSet& other) const {
  if (finite_) {
    return std::all_of(explicit_.begin(), explicit_.end(), [&](Digit i) { return other.contains(i); });
  }
  if (other.finite_) return false;
  if (min_ < other.min_) return false;
  return other.parity_ == Parity::any || other.parity_ == parity_;
}

std::string IndexSet::describe() const {
  if (finite_) return "{" + to_string(explicit_) + "}";
  std::string out = "{i >= " + std::to_string(min_);
  if (parity_ == Parity::even) out += ", even";
  if (parity_ == Parity::odd) out += ", odd";
  return out + "}";
}

std::string to_string(const Word& w) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(w[i]);
  }
  return out;
}

Word parse_word(const std::string& text) {
  Word out;
  std::string token;
  for (char ch : text + ",") {
    if (ch == ',' || ch == ' ' || ch == ';') {
      if (!token.empty()) out.push_back(parse_digit(token, text));
      token.clear();
    } else {
      token += ch;
    }
  }
  return out;
}

IndexWindow parse_window(const std::string& text) {
  auto dots = text.find("..");
  if (dots == std::string::npos) {
    Digit i = parse_digit(text, text);
    return {i, i};
  }
  IndexWindow w{parse_digit(std::string_view(text).substr(0, dots), text),
                parse_digit(std::string_view(text).substr(dots + 2), text)};
  if (w.lo == 0 || w.lo > w.hi) throw InputError("bad index window '" + text + "'");
  return w;
}

}  // namespace parifs
