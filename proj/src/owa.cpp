#include "occkit/owa.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "occkit/errors.hpp"

namespace occkit {

WeightVector::WeightVector(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) {
    throw ValidationError("weight vector must not be empty");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    const double w = weights_[i];
    if (!std::isfinite(w) || w < 0 || w > 1) {
      throw ValidationError("weight " + std::to_string(i) + " outside [0, 1]");
    }
    if (i > 0 && w > weights_[i - 1]) {
      throw ValidationError("weights must be monotonically nonincreasing");
    }
    sum += w;
  }
  if (std::fabs(sum - 1.0) > 1e-12) {
    throw ValidationError("weights must sum to 1 (got " + std::to_string(sum) + ")");
  }
}

WeightVector WeightVector::linear(std::size_t p) {
  if (p == 0) {
    throw ValidationError("weight vector length must be positive");
  }
  const double triangular = static_cast<double>(p) * static_cast<double>(p + 1) / 2.0;
  std::vector<double> weights(p);
  for (std::size_t i = 0; i < p; ++i) {
    weights[i] = static_cast<double>(p - i) / triangular;
  }
  return WeightVector(std::move(weights));
}

WeightVector WeightVector::uniform(std::size_t p) {
  if (p == 0) {
    throw ValidationError("weight vector length must be positive");
  }
  return WeightVector(std::vector<double>(p, 1.0 / static_cast<double>(p)));
}

double owa_apply(const WeightVector& w, std::span<const double> values) {
  if (values.size() != w.size()) {
    throw ShapeError("owa got " + std::to_string(values.size()) + " values for " +
                     std::to_string(w.size()) + " weights");
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double sum = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    sum += w[i] * sorted[i];
  }
  return sum;
}

}  // namespace occkit
