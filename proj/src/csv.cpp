#include "occkit/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "occkit/errors.hpp"

namespace occkit {

namespace {

// RFC-4180 state machine; also skips '#' comment lines between records.
std::vector<std::vector<std::string>> parse_records(const std::string& text,
                                                    const std::string& origin) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;  // quotes or content seen for the current field

  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(row));
    row.clear();
  };

  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < n && text[i + 1] == '"') {
          field.push_back('"');
          i += 2;
          continue;
        }
        in_quotes = false;
        ++i;
        continue;
      }
      field.push_back(c);
      ++i;
      continue;
    }
    if (c == '#' && row.empty() && field.empty() && !field_started) {
      while (i < n && text[i] != '\n') ++i;
      if (i < n) ++i;  // consume the newline
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty()) {
          throw IoError(origin + ": stray quote inside unquoted field");
        }
        in_quotes = true;
        field_started = true;
        ++i;
        break;
      case ',':
        end_field();
        ++i;
        break;
      case '\r':
        ++i;  // part of CRLF; the '\n' branch ends the record
        break;
      case '\n':
        end_record();
        ++i;
        break;
      default:
        field.push_back(c);
        field_started = true;
        ++i;
        break;
    }
  }
  if (in_quotes) {
    throw IoError(origin + ": unterminated quoted field");
  }
  if (field_started || !field.empty() || !row.empty()) {
    end_record();
  }
  return records;
}

}  // namespace

CsvTable parse_csv(const std::string& text, const std::string& origin) {
  auto records = parse_records(text, origin);
  if (records.empty()) {
    throw IoError(origin + ": missing header row");
  }
  CsvTable table;
  table.header = std::move(records.front());
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != table.header.size()) {
      throw ShapeError(origin + ": row " + std::to_string(r) + " has " +
                       std::to_string(records[r].size()) + " fields, header has " +
                       std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(records[r]));
  }
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  return parse_csv(read_text_file(path), path.string());
}

NumericCsv parse_numeric(const CsvTable& table, bool last_column_labels) {
  const std::size_t width = table.header.size();
  if (width == 0 || (last_column_labels && width < 2)) {
    throw ShapeError("too few columns");
  }
  const std::size_t feature_cols = last_column_labels ? width - 1 : width;

  NumericCsv out;
  out.feature_names.assign(table.header.begin(), table.header.begin() + feature_cols);

  std::vector<double> values;
  values.reserve(table.rows.size() * feature_cols);
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    for (std::size_t c = 0; c < feature_cols; ++c) {
      const std::string& cell = table.rows[r][c];
      if (cell.empty()) {
        throw ValidationError("missing value at row " + std::to_string(r) + ", column '" +
                              table.header[c] + "'; filter incomplete instances first");
      }
      double parsed = 0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), parsed);
      if (ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw ValidationError("non-numeric cell '" + cell + "' at row " + std::to_string(r) +
                              ", column '" + table.header[c] + "'");
      }
      values.push_back(parsed);
    }
    if (last_column_labels) {
      out.labels.push_back(table.rows[r][width - 1]);
    }
  }
  if (!table.rows.empty()) {
    out.features = FeatureMatrix(table.rows.size(), feature_cols, std::move(values));
  }
  return out;
}

std::string format_g17(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open '" + path.string() + "' for writing");
  }
  out << text;
  if (!out) {
    throw IoError("failed writing '" + path.string() + "'");
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path.string() + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) {
    throw IoError("failed reading '" + path.string() + "'");
  }
  return buffer.str();
}

}  // namespace occkit
