#pragma once

#include <memory>
#include <span>
#include <vector>

#include "occkit/matrix.hpp"

namespace occkit {

/// Maps a nonnegative distance (or distance-like value) onto [0, 1] via
/// z -> 1/(1+z). Strictly decreasing; +inf maps to 0. Negative or NaN input
/// throws ValidationError.
double distance_to_score(double z);

/// A fitted scorer: attribute space -> [0, 1]. Higher scores mean greater
/// confidence of target-class membership. Implementations are immutable
/// after construction; scoring concurrently from many threads is permitted.
class DataDescription {
 public:
  virtual ~DataDescription() = default;

  // Expected query dimensionality.
  virtual std::size_t dim() const noexcept = 0;

  // Scores one query of length dim(). Throws ShapeError on a length
  // mismatch and ValidationError on non-finite values.
  virtual double score(std::span<const double> query) const = 0;

  std::vector<double> score_rows(const FeatureMatrix& queries) const;

 protected:
  // Shared precondition check for implementations.
  void check_query(std::span<const double> query) const;
};

}  // namespace occkit
