#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "occkit/core.hpp"

namespace occkit {

// Expected average path length c(i) of an unsuccessful search in a binary
// tree over i instances; c(1) = 0, c(2) = 1. Exact harmonic summation for
// i <= 10^4, Euler-Mascheroni approximation above.
double expected_path_length(std::size_t i);

enum class SplitMode : std::uint8_t { kAxis = 0, kExtended = 1 };

/// One randomised isolation tree stored as a flat node array. Axis nodes
/// split on attribute < threshold; extended nodes split on normal . x < offset.
class IsolationTree {
 public:
  struct Node {
    std::int32_t left = -1;   // -1 marks a leaf
    std::int32_t right = -1;
    std::uint32_t leaf_count = 0;
    std::uint32_t axis = 0;
    double threshold = 0.0;
    std::vector<double> normal;  // empty for axis splits
    double offset = 0.0;
    bool is_leaf() const noexcept { return left < 0; }
  };

  explicit IsolationTree(std::vector<Node> nodes) : nodes_(std::move(nodes)) {}

  // Edge count to the leaf, plus c(j) for leaves holding j >= 2 instances.
  double path_length(std::span<const double> y) const;

  const std::vector<Node>& nodes() const noexcept { return nodes_; }

 private:
  std::vector<Node> nodes_;
};

struct IsolationForestParams {
  std::size_t trees = 100;
  std::size_t subsample = 0;  // 0 resolves to min(256, n)
  SplitMode mode = SplitMode::kAxis;
  std::uint64_t seed = 0;
};

/// Isolation forest over random subsamples; scores 1 - 2^(-mean path / c(psi))
/// so that, like every other descriptor here, higher means more target-like.
class IsolationForestModel final : public DataDescription {
 public:
  static IsolationForestModel fit(const FeatureMatrix& train, IsolationForestParams params);

  double mean_path_length(std::span<const double> y) const;

  std::size_t dim() const noexcept override { return dim_; }
  double score(std::span<const double> query) const override;

  const std::vector<IsolationTree>& trees() const noexcept { return trees_; }
  std::size_t subsample_size() const noexcept { return psi_; }
  SplitMode mode() const noexcept { return mode_; }
  std::uint64_t seed() const noexcept { return seed_; }

  static IsolationForestModel from_parts(std::size_t dim, std::size_t psi, SplitMode mode,
                                         std::uint64_t seed, std::vector<IsolationTree> trees);

 private:
  IsolationForestModel(std::size_t dim, std::size_t psi, SplitMode mode, std::uint64_t seed,
                       std::vector<IsolationTree> trees)
      : dim_(dim), psi_(psi), mode_(mode), seed_(seed), trees_(std::move(trees)) {}
  std::size_t dim_;
  std::size_t psi_;
  SplitMode mode_;
  std::uint64_t seed_;
  std::vector<IsolationTree> trees_;
};

}  // namespace occkit
