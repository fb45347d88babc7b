#pragma once

#include <span>
#include <vector>

#include "occkit/matrix.hpp"

namespace occkit {

/// Robust per-attribute rescaling: each attribute is divided by its
/// interquartile range measured on the training data. Attributes whose IQR
/// is zero pass through unscaled (divisor 1). Immutable after fitting.
class IqrScaler {
 public:
  static IqrScaler fit(const FeatureMatrix& train);

  FeatureMatrix apply(const FeatureMatrix& x) const;
  std::vector<double> apply_row(std::span<const double> row) const;

  const std::vector<double>& divisors() const noexcept { return divisors_; }
  std::size_t cols() const noexcept { return divisors_.size(); }

  // Reconstructs a scaler from stored divisors (model deserialization).
  static IqrScaler from_divisors(std::vector<double> divisors);

 private:
  std::vector<double> divisors_;
};

// Interpolated percentile (the common "linear" definition) of a sample;
// p in [0, 100]. The input need not be sorted.
double percentile(std::span<const double> values, double p);

// Fraction of cells equal to the mode of their column; ties between equally
// frequent values resolve to the smallest value.
double sparsity(const FeatureMatrix& x);

}  // namespace occkit
