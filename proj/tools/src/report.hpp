#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "parifs/outward_interval.hpp"
#include "parifs/rational.hpp"

namespace parifs::cli {

using Json = nlohmann::ordered_json;

// Cells are JSON scalars; CSV renders floats with 15 significant digits.
struct Table {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<Json>> rows;
};

struct Report {
  std::vector<Table> tables;
  Json summary = Json::object();
  // Set by verifiers whose asserted checks failed (exit 3).
  std::string failure;
};

Json real(double v);
Json rational(const Rational& r);
Json interval(const OutwardInterval& x);

std::string csv(const Table& t);
Json rows_json(const Table& t);

enum class Format { csv, json };

// File names a command with these tables produces.
std::vector<std::string> output_names(const std::string& command, const std::vector<std::string>& tables, Format f);

// Writes every output into dir; returns the written names.
std::vector<std::string> write_outputs(const std::filesystem::path& dir, const std::string& command,
                                       const Report& r, Format f);

// No --out: data goes to `out`, the csv-mode summary to `err`.
void print_outputs(std::ostream& out, std::ostream& err, const Report& r, Format f);

}  // namespace parifs::cli
