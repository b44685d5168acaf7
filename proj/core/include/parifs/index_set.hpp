#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace parifs {

using Digit = std::uint64_t;
/// A finite word ω_1⋯ω_n over an index set; ω_1 is the outermost map.
using Word = std::vector<Digit>;

/// Inclusive range of indices [lo, hi] used to truncate infinite index sets.
struct IndexWindow {
  Digit lo = 1;
  Digit hi = 1;

  bool contains(Digit i) const { return lo <= i && i <= hi; }
};

enum class Parity { any, even, odd };

/// Either an explicit finite list of indices or the schematic infinite set
/// {i >= min : i has the given parity}.
class IndexSet {
 public:
  static IndexSet finite(std::vector<Digit> indices);
  static IndexSet tail(Digit min, Parity parity = Parity::any);

  bool contains(Digit i) const;
  bool is_finite() const { return finite_; }
  /// Number of indices, or nullopt for a schematic infinite set.
  std::optional<std::size_t> size() const;
  Digit min() const;
  /// Largest index of a finite set.
  Digit max() const;
  Parity parity() const { return parity_; }
  const std::vector<Digit>& explicit_indices() const { return explicit_; }

  /// All members inside the window, ascending.
  std::vector<Digit> within(const IndexWindow& window) const;
  bool is_subset_of(const IndexSet& other) const;

  std::string describe() const;

 private:
  IndexSet() = default;

  bool finite_ = true;
  std::vector<Digit> explicit_;
  Digit min_ = 1;
  Parity parity_ = Parity::any;
};

std::string to_string(const Word& w);
/// Parses "1,2,2" (commas or spaces); empty string is the empty word.
Word parse_word(const std::string& text);
/// Parses "lo..hi" or a single index.
IndexWindow parse_window(const std::string& text);

}  // namespace parifs
