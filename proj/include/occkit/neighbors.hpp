#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "occkit/matrix.hpp"

namespace occkit {

enum class Metric { kManhattan, kEuclidean };

Metric metric_from_string(const std::string& name);
const char* to_string(Metric metric);

// Pairwise distance; throws ShapeError on a length mismatch.
double distance(Metric metric, std::span<const double> x, std::span<const double> y);

struct KnnResult {
  std::vector<std::size_t> ids;
  std::vector<double> dists;
};

/// Exact brute-force k-nearest-neighbour search over a training matrix.
/// Results are sorted by nondecreasing distance; exact ties resolve to the
/// smaller training-row index. Immutable after construction; queries may run
/// concurrently.
class NeighborIndex {
 public:
  NeighborIndex(FeatureMatrix train, Metric metric);

  std::size_t size() const noexcept { return train_.rows(); }
  std::size_t dim() const noexcept { return train_.cols(); }
  Metric metric() const noexcept { return metric_; }
  const FeatureMatrix& data() const noexcept { return train_; }

  // The k nearest training rows to y. `exclude` skips one training row by
  // identity (used when y itself is drawn from the training set).
  KnnResult query_knn(std::span<const double> y, std::size_t k,
                      std::optional<std::size_t> exclude = std::nullopt) const;

  // d_1(y) ... d_k(y) in one call.
  std::vector<double> kth_distance_profile(std::span<const double> y, std::size_t k,
                                           std::optional<std::size_t> exclude = std::nullopt) const;

  // Distances from y to every training row, in row order (no sorting).
  void all_distances(std::span<const double> y, std::vector<double>& out) const;

 private:
  FeatureMatrix train_;
  Metric metric_;
};

}  // namespace occkit
