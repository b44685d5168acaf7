#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "parifs/ifs.hpp"

namespace parifs {

/// regular_cf, backward_cf or even_cf with validated parabolic set and decay constants
/// (1/4, 2), (1, 2) and (1/9, 2) attached.
IfsSystem builtin(const std::string& name);

struct OscReport {
  bool holds = true;
  /// Violating pair and the open overlap interval, when `holds` is false.
  Digit first = 0;
  Digit second = 0;
  Rational overlap_lo;
  Rational overlap_hi;
  /// For schematic families: the closed-form layout was checked against the matrices on the window.
  bool closed_form_layout = false;
};

/// Pairwise exact disjointness of the open images φ_i((0,1)) over the window.
OscReport osc_check(const IfsSystem& sys, const IndexWindow& window);

/// Schematic restriction {i >= min : parity}.
struct TailRestriction {
  Digit min = 1;
  Parity parity = Parity::any;
};

using Restriction = std::variant<std::vector<Digit>, TailRestriction>;

/// Sub-IFS on a subset of the index set. Needs >= 2 surviving indices;
/// dropping a parabolic index is allowed but attaches a warning.
IfsSystem restrict_indices(const IfsSystem& sys, const Restriction& subset);

/// (b, ε) digit of the even-integer continued fraction.
struct EvenCfDigitPair {
  Digit b = 2;
  int eps = -1;

  friend bool operator==(const EvenCfDigitPair&, const EvenCfDigitPair&) = default;
};

/// a even -> (a, -1); a odd -> (a + 1, +1).
std::vector<EvenCfDigitPair> even_cf_convert(const std::vector<Digit>& digits);
std::vector<Digit> even_cf_unconvert(const std::vector<EvenCfDigitPair>& pairs);

/// Parsed system configuration file (JSON).
struct SystemConfig {
  std::string name;
  std::string family;  // regular_cf | backward_cf | even_cf | explicit
  struct Branch {
    Digit index;
    BigInt a, b, c, d;
  };
  std::vector<Branch> branches;
  std::optional<Restriction> restrict_to;
  std::optional<DecayConstants> decay;
};

/// Thrown by config parsing/validation; `field` names the offending JSON field.
class ConfigError : public InputError {
 public:
  ConfigError(std::string field, const std::string& what)
      : InputError(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

SystemConfig parse_system_config(const std::string& json_text);
SystemConfig read_system_config(const std::filesystem::path& path);
IfsSystem build_system(const SystemConfig& cfg);

/// `spec` is a builtin name or a path to a JSON config.
IfsSystem load_system(const std::string& spec);

}  // namespace parifs
