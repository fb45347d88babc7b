#include "occkit/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "occkit/errors.hpp"
#include "occkit/kernels.hpp"

namespace occkit {

Metric metric_from_string(const std::string& name) {
  if (name == "manhattan") return Metric::kManhattan;
  if (name == "euclidean") return Metric::kEuclidean;
  throw ValidationError("unknown metric '" + name + "'");
}

const char* to_string(Metric metric) {
  return metric == Metric::kManhattan ? "manhattan" : "euclidean";
}

double distance(Metric metric, std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw ShapeError("distance between vectors of length " + std::to_string(x.size()) +
                     " and " + std::to_string(y.size()));
  }
  const auto& backend = kernels::active();
  if (metric == Metric::kManhattan) {
    return backend.manhattan(x.data(), y.data(), x.size());
  }
  return std::sqrt(backend.sqeuclidean(x.data(), y.data(), x.size()));
}

NeighborIndex::NeighborIndex(FeatureMatrix train, Metric metric)
    : train_(std::move(train)), metric_(metric) {}

void NeighborIndex::all_distances(std::span<const double> y, std::vector<double>& out) const {
  if (y.size() != train_.cols()) {
    throw ShapeError("query has " + std::to_string(y.size()) + " attributes, expected " +
                     std::to_string(train_.cols()));
  }
  out.resize(train_.rows());
  const auto& backend = kernels::active();
  if (metric_ == Metric::kManhattan) {
    backend.manhattan_batch(y.data(), train_.data(), train_.rows(), train_.cols(), out.data());
  } else {
    backend.sqeuclidean_batch(y.data(), train_.data(), train_.rows(), train_.cols(), out.data());
    for (double& d : out) d = std::sqrt(d);
  }
}

KnnResult NeighborIndex::query_knn(std::span<const double> y, std::size_t k,
                                   std::optional<std::size_t> exclude) const {
  const std::size_t available = train_.rows() - (exclude.has_value() ? 1 : 0);
  if (k < 1 || k > available) {
    throw ValidationError("k = " + std::to_string(k) + " outside [1, " +
                          std::to_string(available) + "]");
  }
  std::vector<double> dists;
  all_distances(y, dists);

  std::vector<std::size_t> order;
  order.reserve(train_.rows());
  for (std::size_t i = 0; i < train_.rows(); ++i) {
    if (exclude && *exclude == i) continue;
    order.push_back(i);
  }
  const auto cmp = [&dists](std::size_t a, std::size_t b) {
    if (dists[a] != dists[b]) return dists[a] < dists[b];
    return a < b;  // deterministic tie-break by training-row index
  };
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k),
                    order.end(), cmp);
  order.resize(k);

  KnnResult result;
  result.ids = std::move(order);
  result.dists.reserve(k);
  for (const std::size_t id : result.ids) {
    result.dists.push_back(dists[id]);
  }
  return result;
}

std::vector<double> NeighborIndex::kth_distance_profile(std::span<const double> y, std::size_t k,
                                                        std::optional<std::size_t> exclude) const {
  return query_knn(y, k, exclude).dists;
}

}  // namespace occkit
