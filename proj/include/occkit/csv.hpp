#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "occkit/matrix.hpp"

namespace occkit {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// RFC-4180 reader (quoted fields, embedded commas/quotes/newlines). The
// header row is required. Lines starting with '#' are metadata comments and
// are skipped. Throws IoError on unreadable files and ShapeError on ragged rows.
CsvTable read_csv(const std::filesystem::path& path);
CsvTable parse_csv(const std::string& text, const std::string& origin = "<string>");

struct NumericCsv {
  FeatureMatrix features;
  std::vector<std::string> labels;  // empty unless last_column_labels
  std::vector<std::string> feature_names;
};

// Parses all cells as doubles; with last_column_labels the final column is
// kept as a class label. Empty or non-numeric cells are rejected
// (missing values must be filtered out beforehand).
NumericCsv parse_numeric(const CsvTable& table, bool last_column_labels);

// Shortest-round-trip-safe rendering (17 significant digits).
std::string format_g17(double value);

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace occkit
