#pragma once

#include <span>
#include <vector>

namespace occkit {

/// Weight vector for ordered weighted averaging: nonnegative, monotonically
/// nonincreasing values that sum to 1 (within 1e-12).
class WeightVector {
 public:
  explicit WeightVector(std::vector<double> weights);

  // Linearly decreasing weights (p, p-1, ..., 1) / T_p with T_p the p-th
  // triangular number. Throws on p = 0.
  static WeightVector linear(std::size_t p);

  static WeightVector uniform(std::size_t p);

  std::size_t size() const noexcept { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }
  std::span<const double> weights() const noexcept { return weights_; }

 private:
  std::vector<double> weights_;
};

// Sorts `values` descending and returns the dot product with w. The result
// lies in [min(values), max(values)]. Throws ShapeError if lengths differ.
double owa_apply(const WeightVector& w, std::span<const double> values);

}  // namespace occkit
