#include "occkit/preprocessing.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "occkit/errors.hpp"

namespace occkit {

double percentile(std::span<const double> values, double p) {
  if (values.empty()) {
    throw ValidationError("percentile of an empty sample");
  }
  if (std::isnan(p) || p < 0 || p > 100) {
    throw ValidationError("percentile rank must lie in [0, 100]");
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double pos = p / 100.0 * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = static_cast<std::size_t>(std::ceil(pos));
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

IqrScaler IqrScaler::fit(const FeatureMatrix& train) {
  const std::size_t m = train.cols();
  std::vector<double> divisors(m, 1.0);
  std::vector<double> column(train.rows());
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < train.rows(); ++i) {
      column[i] = train.at(i, j);
    }
    const double iqr = percentile(column, 75.0) - percentile(column, 25.0);
    divisors[j] = iqr > 0 ? iqr : 1.0;
  }
  IqrScaler scaler;
  scaler.divisors_ = std::move(divisors);
  return scaler;
}

IqrScaler IqrScaler::from_divisors(std::vector<double> divisors) {
  for (const double d : divisors) {
    if (!(d > 0) || !std::isfinite(d)) {
      throw ValidationError("scaler divisors must be positive and finite");
    }
  }
  IqrScaler scaler;
  scaler.divisors_ = std::move(divisors);
  return scaler;
}

FeatureMatrix IqrScaler::apply(const FeatureMatrix& x) const {
  if (x.cols() != divisors_.size()) {
    throw ShapeError("matrix has " + std::to_string(x.cols()) +
                     " columns, scaler expects " + std::to_string(divisors_.size()));
  }
  std::vector<double> values(x.values());
  const std::size_t m = x.cols();
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      values[i * m + j] /= divisors_[j];
    }
  }
  return FeatureMatrix(x.rows(), m, std::move(values));
}

std::vector<double> IqrScaler::apply_row(std::span<const double> row) const {
  if (row.size() != divisors_.size()) {
    throw ShapeError("row has " + std::to_string(row.size()) + " values, scaler expects " +
                     std::to_string(divisors_.size()));
  }
  std::vector<double> out(row.begin(), row.end());
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] /= divisors_[j];
  }
  return out;
}

double sparsity(const FeatureMatrix& x) {
  std::size_t modal_cells = 0;
  std::map<double, std::size_t> counts;
  for (std::size_t j = 0; j < x.cols(); ++j) {
    counts.clear();
    for (std::size_t i = 0; i < x.rows(); ++i) {
      ++counts[x.at(i, j)];
    }
    // Mode ties resolve to the smallest value; std::map iterates ascending.
    std::size_t best = 0;
    for (const auto& [value, count] : counts) {
      if (count > best) best = count;
    }
    modal_cells += best;
  }
  return static_cast<double>(modal_cells) / static_cast<double>(x.rows() * x.cols());
}

}  // namespace occkit
