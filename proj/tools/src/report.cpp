#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "parifs/errors.hpp"

namespace parifs::cli {

namespace {

std::string fmt15(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

std::string cell(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_number_float()) return fmt15(v.get<double>());
  if (v.is_string()) {
    const std::string& s = v.get_ref<const std::string&>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  }
  return v.dump();
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw InputError("cannot write " + p.string());
  f << text;
  if (!f) throw InputError("write failed: " + p.string());
}

Json combined(const Report& r) {
  Json j = r.summary;
  Json tables = Json::object();
  for (const Table& t : r.tables) tables[t.name] = rows_json(t);
  j["tables"] = tables;
  return j;
}

}  // namespace

Json real(double v) {
  if (!std::isfinite(v)) return nullptr;
  return std::stod(fmt15(v));
}

Json rational(const Rational& r) { return to_string(r); }

Json interval(const OutwardInterval& x) { return Json::array({real(x.lo_double()), real(x.hi_double())}); }

std::string csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.header.size(); ++i) out += (i ? "," : "") + t.header[i];
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + cell(row[i]);
    out += '\n';
  }
  return out;
}

Json rows_json(const Table& t) {
  Json rows = Json::array();
  for (const auto& row : t.rows) {
    Json obj = Json::object();
    for (std::size_t i = 0; i < t.header.size(); ++i) obj[t.header[i]] = row[i];
    rows.push_back(std::move(obj));
  }
  return rows;
}

std::vector<std::string> output_names(const std::string& command, const std::vector<std::string>& tables, Format f) {
  if (f == Format::json) return {command + ".json"};
  std::vector<std::string> names;
  for (const std::string& t : tables) names.push_back(t + ".csv");
  names.push_back(command + "_summary.json");
  return names;
}

std::vector<std::string> write_outputs(const std::filesystem::path& dir, const std::string& command,
                                       const Report& r, Format f) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> names;
  if (f == Format::json) {
    names.push_back(command + ".json");
    write_file(dir / names.back(), combined(r).dump(2) + "\n");
    return names;
  }
  for (const Table& t : r.tables) {
    names.push_back(t.name + ".csv");
    write_file(dir / names.back(), csv(t));
  }
  names.push_back(command + "_summary.json");
  write_file(dir / names.back(), r.summary.dump(2) + "\n");
  return names;
}

void print_outputs(std::ostream& out, std::ostream& err, const Report& r, Format f) {
  if (f == Format::json) {
    out << combined(r).dump(2) << "\n";
    return;
  }
  for (const Table& t : r.tables) {
    if (r.tables.size() > 1) out << "# " << t.name << ".csv\n";
    out << csv(t);
  }
  if (!r.summary.empty()) err << r.summary.dump() << "\n";
}

}  // namespace parifs::cli
