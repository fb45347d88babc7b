#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "occkit/descriptors.hpp"
#include "occkit/matrix.hpp"
#include "occkit/neighbors.hpp"

namespace occkit {

// Probability that a random target score exceeds a random other score,
// ties counting half; computed from ranks in O(N log N). Throws on an
// empty side.
double auroc(std::span<const double> target_scores, std::span<const double> other_scores);

struct LabeledDataset {
  std::string id;
  FeatureMatrix features;
  std::vector<std::string> labels;  // one per row
};

/// One one-class classification problem: a dataset, a target class, and the
/// row partition induced by the class label.
struct OccTask {
  const LabeledDataset* dataset = nullptr;
  std::string target_label;
  std::vector<std::size_t> target_rows;
  std::vector<std::size_t> other_rows;
};

// One task per requested target label (all labels when `targets` is empty).
// Classes with fewer than `min_target` rows are skipped and recorded in
// `skipped` when given.
std::vector<OccTask> make_tasks(const LabeledDataset& dataset,
                                const std::vector<std::string>& targets = {},
                                std::size_t min_target = 10,
                                std::vector<std::string>* skipped = nullptr);

struct Fold {
  std::vector<std::size_t> target_train;
  std::vector<std::size_t> target_test;
  std::vector<std::size_t> other_test;
};

struct FoldPlan {
  std::uint64_t seed = 0;  // derived plan seed (master + dataset + class)
  std::vector<Fold> folds; // 5 folds; training data is target rows only
};

// Stratified 5-fold assignment: seeded shuffle then round-robin, per class.
// Requires at least 10 target rows.
FoldPlan make_folds(const OccTask& task, std::uint64_t master_seed);

struct TaskEvaluation {
  std::vector<double> fold_aurocs;
  double mean = 0;
  double sd = 0;  // sample standard deviation across folds
};

// Per fold: fit the IQR scaler on target-train rows only, rescale train and
// test rows, fit the descriptor on the rescaled target-train matrix, score
// the test rows, and compute the AUROC.
TaskEvaluation evaluate_task(DescriptorKind kind, const Coefficients& coefs,
                             const OccTask& task, const FoldPlan& plan, Metric metric);

// Mean over classes within each dataset, then unweighted mean over datasets.
double aggregate_weighted(std::span<const double> task_means,
                          std::span<const std::string> dataset_ids);

// Centered rolling mean; the window shrinks at the edges. Window must be odd.
std::vector<double> rolling_mean(std::span<const double> values, std::size_t window);

struct GridSurface {
  std::vector<std::size_t> shape;  // per-axis point counts; empty = single point
  std::vector<double> values;      // row-major over axes

  std::size_t points() const noexcept;
  std::vector<std::size_t> unflatten(std::size_t flat) const;
};

// Rolling mean over each axis of a surface (1-D or 2-D).
GridSurface rolling_mean(const GridSurface& surface, std::span<const std::size_t> windows);

struct GridAxis {
  std::string name;            // "k", "a", "b", "nu" or "c"
  std::vector<double> values;  // ascending
  std::size_t window = 1;      // odd
};

struct HyperGrid {
  std::vector<GridAxis> axes;  // empty for descriptors without tunables
  std::size_t points() const noexcept;
};

// Grid geometry shipped with the library (reparametrised coefficient ranges,
// resolutions and smoothing windows per descriptor).
HyperGrid default_grid(DescriptorKind kind);

// Coefficients encoded by one grid point.
Coefficients coefficients_at(DescriptorKind kind, const HyperGrid& grid, std::size_t flat);

struct GridSearchResult {
  GridSurface raw;
  GridSurface smoothed;
  std::size_t best_index = 0;
  Coefficients best;
};

// Aggregated AUROC over all tasks for every grid point, smoothed with the
// grid's windows; the argmax breaks ties toward lexicographically smaller
// coefficients. Per-task results are memoized by resolved hyperparameters.
GridSearchResult grid_search(DescriptorKind kind, std::span<const OccTask> tasks,
                             const HyperGrid& grid, Metric metric, std::uint64_t seed,
                             unsigned threads = 1);

struct LodoRound {
  std::string held_out_dataset;
  Coefficients chosen;
  std::size_t chosen_index = 0;
  std::vector<TaskEvaluation> held_out_tasks;  // order follows the task list
  std::vector<std::string> held_out_labels;
  double dataset_mean = 0;
};

struct LodoResult {
  std::vector<LodoRound> rounds;
  double overall_mean = 0;  // mean of round dataset means
};

// For each dataset: search the grid on every other dataset's tasks, then
// evaluate the held-out dataset's tasks at the chosen coefficients.
LodoResult leave_one_dataset_out(DescriptorKind kind, std::span<const OccTask> tasks,
                                 const HyperGrid& grid, Metric metric, std::uint64_t seed,
                                 unsigned threads = 1);

}  // namespace occkit
