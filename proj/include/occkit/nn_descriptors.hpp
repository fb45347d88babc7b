#pragma once

#include <span>
#include <vector>

#include "occkit/core.hpp"
#include "occkit/neighbors.hpp"
#include "occkit/owa.hpp"

namespace occkit {

/// Sorted self-excluded neighbour lists for every training row, truncated at
/// a fixed depth (at most n-1). Row x holds d_1(x) <= ... <= d_depth(x) and
/// the matching training-row ids.
class NeighborTable {
 public:
  NeighborTable(const NeighborIndex& index, std::size_t depth);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t depth() const noexcept { return depth_; }

  std::span<const double> dists(std::size_t row) const {
    return {dists_.data() + row * depth_, depth_};
  }
  std::span<const std::size_t> ids(std::size_t row) const {
    return {ids_.data() + row * depth_, depth_};
  }
  // d_{i+1}(row), zero-based i.
  double dist(std::size_t row, std::size_t i) const { return dists_[row * depth_ + i]; }

 private:
  std::size_t rows_ = 0;
  std::size_t depth_ = 0;
  std::vector<double> dists_;
  std::vector<std::size_t> ids_;
};

// ---- formula helpers, shared by the models and the evaluation harness ----

// Localised-distance score with the degenerate rules: d_k = 0 -> 1;
// d_k > 0 and local = 0 -> 0 (localised distance +inf).
double lnnd_score_from(double d_k, double local_d_k);

// Local reachability density of a query from its k nearest neighbours;
// +inf when every reachability distance is zero (duplicate collapse).
double lrd_from(std::span<const std::size_t> nn_ids, std::span<const double> nn_dists,
                std::span<const double> train_dk, std::size_t k);

// Outlier factor of a query; ratios inf/inf count as 1.
double lof_from(std::span<const std::size_t> nn_ids, std::span<const double> nn_dists,
                std::span<const double> train_dk, std::span<const double> train_lrd,
                std::size_t k);

// Training-side caches for a given k (k <= table depth).
std::vector<double> train_kth_distances(const NeighborTable& table, std::size_t k);
std::vector<double> train_lrds(const NeighborTable& table, std::size_t k,
                               std::span<const double> train_dk);

struct AlpBreakdown {
  std::vector<double> local_dists;        // D_1..D_k
  std::vector<double> local_proximities;  // lp_1..lp_k
  double score = 0;
};

// Core of the ALP computation on raw neighbour-distance profiles.
// `query_dists` holds d_1(y)..d_k(y); `neighbor_profiles[j]` holds the
// profile d_1..d_k of the (j+1)-th nearest training row to y, for j < l.
// lp_i with D_i + d_i = 0 is defined as 1.
AlpBreakdown alp_from_profiles(std::span<const double> query_dists,
                               std::span<const std::span<const double>> neighbor_profiles,
                               const WeightVector& wk, const WeightVector& wl);

// ---- the four nearest-neighbour data descriptors ----

/// Score 1/(1 + d_k(y)).
class NndModel final : public DataDescription {
 public:
  static NndModel fit(FeatureMatrix train, Metric metric, std::size_t k = 1);

  std::size_t k() const noexcept { return k_; }
  const NeighborIndex& index() const noexcept { return index_; }

  std::size_t dim() const noexcept override { return index_.dim(); }
  double score(std::span<const double> query) const override;

 private:
  NndModel(NeighborIndex index, std::size_t k) : index_(std::move(index)), k_(k) {}
  NeighborIndex index_;
  std::size_t k_;
};

/// Score 1/(1 + d_k(y)/d_k(NN_k(y))).
class LnndModel final : public DataDescription {
 public:
  static LnndModel fit(FeatureMatrix train, Metric metric, std::size_t k);

  std::size_t k() const noexcept { return k_; }
  const NeighborIndex& index() const noexcept { return index_; }
  // d_k(x) for every training row, computed with self-exclusion.
  const std::vector<double>& local_kth() const noexcept { return local_kth_; }

  std::size_t dim() const noexcept override { return index_.dim(); }
  double score(std::span<const double> query) const override;

 private:
  LnndModel(NeighborIndex index, std::size_t k, std::vector<double> local_kth)
      : index_(std::move(index)), k_(k), local_kth_(std::move(local_kth)) {}
  NeighborIndex index_;
  std::size_t k_;
  std::vector<double> local_kth_;
};

/// Score 1/(1 + lof_k(y)) with the reachability / local-reachability-density
/// construction; training-side densities are cached at fit time.
class LofModel final : public DataDescription {
 public:
  static LofModel fit(FeatureMatrix train, Metric metric, std::size_t k);

  std::size_t k() const noexcept { return k_; }
  const NeighborIndex& index() const noexcept { return index_; }
  const std::vector<double>& train_dk() const noexcept { return train_dk_; }
  const std::vector<double>& train_lrd() const noexcept { return train_lrd_; }

  std::size_t dim() const noexcept override { return index_.dim(); }
  double score(std::span<const double> query) const override;

 private:
  LofModel(NeighborIndex index, std::size_t k, std::vector<double> dk,
           std::vector<double> lrd)
      : index_(std::move(index)), k_(k), train_dk_(std::move(dk)), train_lrd_(std::move(lrd)) {}
  NeighborIndex index_;
  std::size_t k_;
  std::vector<double> train_dk_;
  std::vector<double> train_lrd_;
};

/// Average localised proximity: localise the query's k neighbour distances
/// against linearly weighted neighbour profiles of its l nearest training
/// rows, then take the ordered weighted average of the proximities.
class AlpModel final : public DataDescription {
 public:
  // k is clamped to [1, n-1]; l to [1, n] (an external query has n
  // neighbours, and l = n is what makes the uniform-weight limit coincide
  // with plain nearest-neighbour ranking).
  static AlpModel fit(FeatureMatrix train, Metric metric, std::size_t k, std::size_t l);

  // Same fit with explicit weight vectors of lengths k and l.
  static AlpModel fit_weighted(FeatureMatrix train, Metric metric, std::size_t k,
                               std::size_t l, WeightVector wk, WeightVector wl);

  std::size_t k() const noexcept { return k_; }
  std::size_t l() const noexcept { return l_; }
  const WeightVector& wk() const noexcept { return wk_; }
  const WeightVector& wl() const noexcept { return wl_; }
  const NeighborIndex& index() const noexcept { return index_; }
  const NeighborTable& profiles() const noexcept { return profiles_; }

  std::size_t dim() const noexcept override { return index_.dim(); }
  double score(std::span<const double> query) const override;
  AlpBreakdown score_breakdown(std::span<const double> query) const;

 private:
  AlpModel(NeighborIndex index, std::size_t k, std::size_t l, WeightVector wk,
           WeightVector wl, NeighborTable profiles)
      : index_(std::move(index)), k_(k), l_(l), wk_(std::move(wk)), wl_(std::move(wl)),
        profiles_(std::move(profiles)) {}
  NeighborIndex index_;
  std::size_t k_;
  std::size_t l_;
  WeightVector wk_;
  WeightVector wl_;
  NeighborTable profiles_;  // n x k self-excluded distance table
};

}  // namespace occkit
