#include "occkit/nn_descriptors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "occkit/errors.hpp"

namespace occkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t clamp_count(std::size_t value, std::size_t lo, std::size_t hi) {
  return std::min(std::max(value, lo), hi);
}

void require_rows(const FeatureMatrix& train, const char* what) {
  if (train.rows() < 2) {
    throw InsufficientDataError(std::string(what) + " requires at least 2 training rows");
  }
}

}  // namespace

NeighborTable::NeighborTable(const NeighborIndex& index, std::size_t depth)
    : rows_(index.size()), depth_(depth) {
  if (depth_ < 1 || depth_ > rows_ - 1) {
    throw ValidationError("neighbour table depth " + std::to_string(depth_) +
                          " outside [1, " + std::to_string(rows_ - 1) + "]");
  }
  dists_.resize(rows_ * depth_);
  ids_.resize(rows_ * depth_);
  for (std::size_t i = 0; i < rows_; ++i) {
    const KnnResult res = index.query_knn(index.data().row(i), depth_, i);
    std::copy(res.dists.begin(), res.dists.end(), dists_.begin() + i * depth_);
    std::copy(res.ids.begin(), res.ids.end(), ids_.begin() + i * depth_);
  }
}

double lnnd_score_from(double d_k, double local_d_k) {
  if (d_k == 0) return 1.0;
  if (local_d_k == 0) return 0.0;  // localised distance is +inf
  return distance_to_score(d_k / local_d_k);
}

double lrd_from(std::span<const std::size_t> nn_ids, std::span<const double> nn_dists,
                std::span<const double> train_dk, std::size_t k) {
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    sum += std::max(nn_dists[i], train_dk[nn_ids[i]]);
  }
  const double mean_reach = sum / static_cast<double>(k);
  return mean_reach == 0 ? kInf : 1.0 / mean_reach;
}

double lof_from(std::span<const std::size_t> nn_ids, std::span<const double> nn_dists,
                std::span<const double> train_dk, std::span<const double> train_lrd,
                std::size_t k) {
  const double lrd_query = lrd_from(nn_ids, nn_dists, train_dk, k);
  double sum = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    const double lrd_neighbor = train_lrd[nn_ids[j]];
    if (std::isinf(lrd_neighbor) && std::isinf(lrd_query)) {
      sum += 1.0;  // duplicate collapse: inf/inf counts as 1
    } else {
      sum += lrd_neighbor / lrd_query;
    }
  }
  return sum / static_cast<double>(k);
}

std::vector<double> train_kth_distances(const NeighborTable& table, std::size_t k) {
  std::vector<double> dk(table.rows());
  for (std::size_t i = 0; i < table.rows(); ++i) {
    dk[i] = table.dist(i, k - 1);
  }
  return dk;
}

std::vector<double> train_lrds(const NeighborTable& table, std::size_t k,
                               std::span<const double> train_dk) {
  std::vector<double> lrd(table.rows());
  for (std::size_t i = 0; i < table.rows(); ++i) {
    lrd[i] = lrd_from(table.ids(i).first(k), table.dists(i).first(k), train_dk, k);
  }
  return lrd;
}

AlpBreakdown alp_from_profiles(std::span<const double> query_dists,
                               std::span<const std::span<const double>> neighbor_profiles,
                               const WeightVector& wk, const WeightVector& wl) {
  const std::size_t k = wk.size();
  const std::size_t l = wl.size();
  if (query_dists.size() != k) {
    throw ShapeError("expected " + std::to_string(k) + " query distances, got " +
                     std::to_string(query_dists.size()));
  }
  if (neighbor_profiles.size() != l) {
    throw ShapeError("expected " + std::to_string(l) + " neighbour profiles, got " +
                     std::to_string(neighbor_profiles.size()));
  }
  for (const auto& profile : neighbor_profiles) {
    if (profile.size() < k) {
      throw ShapeError("neighbour profile shorter than k");
    }
  }

  AlpBreakdown out;
  out.local_dists.resize(k);
  out.local_proximities.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    double local = 0.0;
    for (std::size_t j = 0; j < l; ++j) {
      local += wl[j] * neighbor_profiles[j][i];
    }
    out.local_dists[i] = local;
    const double denom = local + query_dists[i];
    out.local_proximities[i] = denom == 0 ? 1.0 : local / denom;
  }
  out.score = owa_apply(wk, out.local_proximities);
  return out;
}

// ---- NND ----

NndModel NndModel::fit(FeatureMatrix train, Metric metric, std::size_t k) {
  require_rows(train, "NND");
  const std::size_t n = train.rows();
  return NndModel(NeighborIndex(std::move(train), metric), clamp_count(k, 1, n - 1));
}

double NndModel::score(std::span<const double> query) const {
  check_query(query);
  const KnnResult res = index_.query_knn(query, k_);
  return distance_to_score(res.dists[k_ - 1]);
}

// ---- LNND ----

LnndModel LnndModel::fit(FeatureMatrix train, Metric metric, std::size_t k) {
  require_rows(train, "LNND");
  const std::size_t n = train.rows();
  k = clamp_count(k, 1, n - 1);
  NeighborIndex index(std::move(train), metric);
  const NeighborTable table(index, k);
  return LnndModel(std::move(index), k, train_kth_distances(table, k));
}

double LnndModel::score(std::span<const double> query) const {
  check_query(query);
  const KnnResult res = index_.query_knn(query, k_);
  const double d_k = res.dists[k_ - 1];
  const double local = local_kth_[res.ids[k_ - 1]];
  return lnnd_score_from(d_k, local);
}

// ---- LOF ----

LofModel LofModel::fit(FeatureMatrix train, Metric metric, std::size_t k) {
  require_rows(train, "LOF");
  const std::size_t n = train.rows();
  k = clamp_count(k, 1, n - 1);
  NeighborIndex index(std::move(train), metric);
  const NeighborTable table(index, k);
  std::vector<double> dk = train_kth_distances(table, k);
  std::vector<double> lrd = train_lrds(table, k, dk);
  return LofModel(std::move(index), k, std::move(dk), std::move(lrd));
}

double LofModel::score(std::span<const double> query) const {
  check_query(query);
  const KnnResult res = index_.query_knn(query, k_);
  const double factor = lof_from(res.ids, res.dists, train_dk_, train_lrd_, k_);
  return distance_to_score(factor);
}

// ---- ALP ----

AlpModel AlpModel::fit(FeatureMatrix train, Metric metric, std::size_t k, std::size_t l) {
  require_rows(train, "ALP");
  const std::size_t n = train.rows();
  k = clamp_count(k, 1, n - 1);
  l = clamp_count(l, 1, n);
  return fit_weighted(std::move(train), metric, k, l, WeightVector::linear(k),
                      WeightVector::linear(l));
}

AlpModel AlpModel::fit_weighted(FeatureMatrix train, Metric metric, std::size_t k,
                                std::size_t l, WeightVector wk, WeightVector wl) {
  require_rows(train, "ALP");
  const std::size_t n = train.rows();
  if (k < 1 || k > n - 1 || l < 1 || l > n) {
    throw ValidationError("ALP needs k in [1, n-1] and l in [1, n]");
  }
  if (wk.size() != k || wl.size() != l) {
    throw ShapeError("weight vector lengths must equal k and l");
  }
  NeighborIndex index(std::move(train), metric);
  NeighborTable profiles(index, k);
  return AlpModel(std::move(index), k, l, std::move(wk), std::move(wl), std::move(profiles));
}

double AlpModel::score(std::span<const double> query) const {
  return score_breakdown(query).score;
}

AlpBreakdown AlpModel::score_breakdown(std::span<const double> query) const {
  check_query(query);
  const KnnResult res = index_.query_knn(query, std::max(k_, l_));
  std::vector<std::span<const double>> profiles(l_);
  for (std::size_t j = 0; j < l_; ++j) {
    profiles[j] = profiles_.dists(res.ids[j]);
  }
  return alp_from_profiles(std::span(res.dists).first(k_), profiles, wk_, wl_);
}

}  // namespace occkit
