#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace occkit {

/// Dense row-major table of real attribute values. Every stored value is
/// finite; construction rejects NaN/inf cells and empty shapes. Immutable
/// after construction and safe to share across threads.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;

  // Takes ownership of `values` (row-major, rows*cols entries) and validates.
  FeatureMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  static FeatureMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * cols_, cols_};
  }
  double at(std::size_t i, std::size_t j) const { return values_[i * cols_ + j]; }
  const double* data() const noexcept { return values_.data(); }
  const std::vector<double>& values() const noexcept { return values_; }

  FeatureMatrix select_rows(std::span<const std::size_t> ids) const;

  // FNV-1a over the raw payload bytes plus the shape; used as the data
  // fingerprint in reports and model files.
  std::uint64_t fingerprint() const noexcept;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

}  // namespace occkit
