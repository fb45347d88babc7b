#pragma once

#include <span>
#include <vector>

#include "occkit/core.hpp"

namespace occkit {

/// Gaussian-model descriptor: distance from the training mean measured in
/// the metric of the sample covariance, scored as 1/(1+D). Singular
/// covariance is handled with a Moore-Penrose pseudo-inverse.
class MdModel final : public DataDescription {
 public:
  static MdModel fit(const FeatureMatrix& train);

  std::span<const double> mean() const noexcept { return mean_; }
  // Row-major m x m pseudo-inverse of the sample covariance.
  std::span<const double> precision() const noexcept { return precision_; }

  double mahalanobis(std::span<const double> query) const;

  std::size_t dim() const noexcept override { return mean_.size(); }
  double score(std::span<const double> query) const override;

  static MdModel from_parts(std::vector<double> mean, std::vector<double> precision);

 private:
  MdModel(std::vector<double> mean, std::vector<double> precision)
      : mean_(std::move(mean)), precision_(std::move(precision)) {}
  std::vector<double> mean_;
  std::vector<double> precision_;
};

}  // namespace occkit
