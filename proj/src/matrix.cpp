#include "occkit/matrix.hpp"

#include <cmath>
#include <cstring>
#include <string>

#include "occkit/errors.hpp"

namespace occkit {

namespace {

void validate_values(std::size_t rows, std::size_t cols, const std::vector<double>& values) {
  if (rows == 0 || cols == 0) {
    throw ShapeError("matrix must have at least one row and one column");
  }
  if (values.size() != rows * cols) {
    throw ShapeError("matrix payload has " + std::to_string(values.size()) +
                     " values, expected " + std::to_string(rows * cols));
  }
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const double v = values[i * cols + j];
      if (!std::isfinite(v)) {
        throw ValidationError("non-finite value at row " + std::to_string(i) +
                              ", column " + std::to_string(j));
      }
    }
  }
}

}  // namespace

FeatureMatrix::FeatureMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  validate_values(rows_, cols_, values_);
}

FeatureMatrix FeatureMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) {
    throw ShapeError("matrix must have at least one row and one column");
  }
  const std::size_t cols = rows.front().size();
  std::vector<double> values;
  values.reserve(rows.size() * cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) {
      throw ShapeError("ragged row " + std::to_string(i) + ": has " +
                       std::to_string(rows[i].size()) + " values, expected " +
                       std::to_string(cols));
    }
    values.insert(values.end(), rows[i].begin(), rows[i].end());
  }
  return FeatureMatrix(rows.size(), cols, std::move(values));
}

FeatureMatrix FeatureMatrix::select_rows(std::span<const std::size_t> ids) const {
  std::vector<double> values;
  values.reserve(ids.size() * cols_);
  for (const std::size_t id : ids) {
    const auto r = row(id);
    values.insert(values.end(), r.begin(), r.end());
  }
  return FeatureMatrix(ids.size(), cols_, std::move(values));
}

std::uint64_t FeatureMatrix::fingerprint() const noexcept {
  std::uint64_t h = 1469598103934665603ULL;  // FNV offset basis
  auto mix_bytes = [&h](const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= p[i];
      h *= 1099511628211ULL;
    }
  };
  const std::uint64_t r = rows_, c = cols_;
  mix_bytes(&r, sizeof r);
  mix_bytes(&c, sizeof c);
  mix_bytes(values_.data(), values_.size() * sizeof(double));
  return h;
}

}  // namespace occkit
