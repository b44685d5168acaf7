#include <fstream>
#include <sstream>

#include "json.hpp"
#include "parifs/errors.hpp"
#include "parifs/systems.hpp"

namespace parifs {

namespace {

using nlohmann::json;

BigInt integer_field(const json& v, const std::string& field) {
  if (v.is_number_integer()) {
    return v.is_number_unsigned() ? BigInt(std::to_string(v.get<std::uint64_t>()))
                                  : BigInt(std::to_string(v.get<std::int64_t>()));
  }
  if (v.is_string()) {
    const auto& s = v.get_ref<const std::string&>();
    Rational r;
    try {
      r = parse_rational(s);
    } catch (const InputError&) {
      throw ConfigError(field, "expected an integer, got \"" + s + "\"");
    }
    if (r.get_den() != 1) throw ConfigError(field, "expected an integer, got \"" + s + "\"");
    return r.get_num();
  }
  throw ConfigError(field, "expected an integer, got " + v.dump());
}

Digit index_field(const json& v, const std::string& field) {
  if (!v.is_number_integer() || v.get<std::int64_t>() <= 0) {
    throw ConfigError(field, "expected a positive integer index, got " + v.dump());
  }
  return v.get<std::uint64_t>();
}

Rational rational_field(const json& v, const std::string& field) {
  try {
    if (v.is_string()) return parse_rational(v.get_ref<const std::string&>());
    if (v.is_number_integer()) return Rational(integer_field(v, field));
  } catch (const ConfigError&) {
    throw;
  } catch (const InputError& e) {
    throw ConfigError(field, e.what());
  }
  throw ConfigError(field, "expected a rational \"p/q\", got " + v.dump());
}

}  // namespace

SystemConfig parse_system_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<document>", std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("<document>", "top level must be an object");

  static const char* known[] = {"name", "family", "branches", "restrict_to", "decay"};
  for (const auto& [key, _] : root.items()) {
    if (std::find(std::begin(known), std::end(known), key) == std::end(known)) {
      throw ConfigError(key, "unknown field");
    }
  }

  SystemConfig cfg;
  if (root.contains("name")) {
    if (!root["name"].is_string()) throw ConfigError("name", "expected a string");
    cfg.name = root["name"].get<std::string>();
  }
  if (!root.contains("family") || !root["family"].is_string()) throw ConfigError("family", "required string");
  cfg.family = root["family"].get<std::string>();
  if (cfg.family != "regular_cf" && cfg.family != "backward_cf" && cfg.family != "even_cf" &&
      cfg.family != "explicit") {
    throw ConfigError("family", "unknown family \"" + cfg.family + "\"");
  }

  if (root.contains("branches")) {
    const json& br = root["branches"];
    if (!br.is_array()) throw ConfigError("branches", "expected an array");
    for (std::size_t k = 0; k < br.size(); ++k) {
      const std::string where = "branches[" + std::to_string(k) + "]";
      const json& item = br[k];
      if (!item.is_object() || !item.contains("index") || !item.contains("matrix")) {
        throw ConfigError(where, "expected {\"index\": int, \"matrix\": [a,b,c,d]}");
      }
      const json& mat = item["matrix"];
      if (!mat.is_array() || mat.size() != 4) throw ConfigError(where + ".matrix", "expected 4 integers");
      cfg.branches.push_back({index_field(item["index"], where + ".index"), integer_field(mat[0], where + ".matrix"),
                              integer_field(mat[1], where + ".matrix"), integer_field(mat[2], where + ".matrix"),
                              integer_field(mat[3], where + ".matrix")});
    }
  }
  if (cfg.family == "explicit" && cfg.branches.empty()) {
    throw ConfigError("branches", "family \"explicit\" needs a non-empty branch list");
  }

  if (root.contains("restrict_to")) {
    const json& r = root["restrict_to"];
    if (r.is_array()) {
      std::vector<Digit> list;
      for (const auto& v : r) list.push_back(index_field(v, "restrict_to"));
      cfg.restrict_to = Restriction{std::move(list)};
    } else if (r.is_object()) {
      TailRestriction t;
      if (r.contains("min")) t.min = index_field(r["min"], "restrict_to.min");
      if (r.contains("parity")) {
        const json& p = r["parity"];
        std::string s = p.is_string() ? p.get<std::string>() : "";
        if (s == "even") {
          t.parity = Parity::even;
        } else if (s == "odd") {
          t.parity = Parity::odd;
        } else if (s == "any") {
          t.parity = Parity::any;
        } else {
          throw ConfigError("restrict_to.parity", "expected \"even\", \"odd\" or \"any\"");
        }
      }
      cfg.restrict_to = Restriction{t};
    } else {
      throw ConfigError("restrict_to", "expected an index list or {\"min\", \"parity\"}");
    }
  }

  if (root.contains("decay")) {
    const json& d = root["decay"];
    if (!d.is_object() || !d.contains("c") || !d.contains("d")) throw ConfigError("decay", "expected {\"c\", \"d\"}");
    cfg.decay = DecayConstants{rational_field(d["c"], "decay.c"), rational_field(d["d"], "decay.d")};
    if (cfg.decay->c <= 0) throw ConfigError("decay.c", "must be positive");
    if (cfg.decay->d <= 1) throw ConfigError("decay.d", "must exceed 1");
  }
  return cfg;
}

SystemConfig read_system_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_system_config(buf.str());
}

}  // namespace parifs
