#include "occkit/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>
#include <utility>

#include "occkit/errors.hpp"
#include "occkit/kernels.hpp"
#include "occkit/nn_descriptors.hpp"
#include "occkit/preprocessing.hpp"
#include "occkit/rng.hpp"
#include "occkit/svm.hpp"

namespace occkit {

double auroc(std::span<const double> target_scores, std::span<const double> other_scores) {
  if (target_scores.empty() || other_scores.empty()) {
    throw ValidationError("auroc requires scores on both sides");
  }
  struct Entry {
    double score;
    bool target;
  };
  std::vector<Entry> pool;
  pool.reserve(target_scores.size() + other_scores.size());
  for (const double s : target_scores) pool.push_back({s, true});
  for (const double s : other_scores) pool.push_back({s, false});
  std::sort(pool.begin(), pool.end(),
            [](const Entry& a, const Entry& b) { return a.score < b.score; });

  // Tie groups share the average of their 1-based ranks, which yields the
  // half-credit convention for tied pairs.
  double target_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < pool.size()) {
    std::size_t j = i;
    while (j < pool.size() && pool[j].score == pool[i].score) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // mean of i+1 .. j
    for (std::size_t t = i; t < j; ++t) {
      if (pool[t].target) target_rank_sum += avg_rank;
    }
    i = j;
  }
  const double nt = static_cast<double>(target_scores.size());
  const double no = static_cast<double>(other_scores.size());
  const double u = target_rank_sum - nt * (nt + 1.0) / 2.0;
  return u / (nt * no);
}

std::vector<OccTask> make_tasks(const LabeledDataset& dataset,
                                const std::vector<std::string>& targets,
                                std::size_t min_target,
                                std::vector<std::string>* skipped) {
  if (dataset.labels.size() != dataset.features.rows()) {
    throw ShapeError("label count does not match row count");
  }
  std::vector<std::string> order;  // labels in first-appearance order
  for (const std::string& label : dataset.labels) {
    if (std::find(order.begin(), order.end(), label) == order.end()) {
      order.push_back(label);
    }
  }
  std::vector<std::string> wanted = targets;
  if (wanted.empty()) {
    wanted = order;
  } else {
    for (const std::string& label : wanted) {
      if (std::find(order.begin(), order.end(), label) == order.end()) {
        throw ValidationError("target class '" + label + "' not present in dataset '" +
                              dataset.id + "'");
      }
    }
  }

  std::vector<OccTask> tasks;
  for (const std::string& label : wanted) {
    OccTask task;
    task.dataset = &dataset;
    task.target_label = label;
    for (std::size_t i = 0; i < dataset.labels.size(); ++i) {
      (dataset.labels[i] == label ? task.target_rows : task.other_rows).push_back(i);
    }
    if (task.target_rows.size() < min_target) {
      if (skipped) {
        skipped->push_back(dataset.id + "/" + label + ": only " +
                           std::to_string(task.target_rows.size()) + " rows");
      }
      continue;
    }
    tasks.push_back(std::move(task));
  }
  return tasks;
}

FoldPlan make_folds(const OccTask& task, std::uint64_t master_seed) {
  constexpr std::size_t kFolds = 5;
  if (task.target_rows.size() < 2 * kFolds) {
    throw InsufficientDataError("class '" + task.target_label + "' has " +
                                std::to_string(task.target_rows.size()) +
                                " rows; need at least " + std::to_string(2 * kFolds));
  }
  FoldPlan plan;
  plan.seed = rng::mix(rng::mix(master_seed, rng::fnv1a(task.dataset->id)),
                       rng::fnv1a(task.target_label));
  plan.folds.resize(kFolds);

  rng::Engine eng(plan.seed);
  std::vector<std::size_t> targets = task.target_rows;
  rng::shuffle(targets, eng);
  std::vector<std::size_t> others = task.other_rows;
  rng::shuffle(others, eng);

  for (std::size_t i = 0; i < targets.size(); ++i) {
    const std::size_t f = i % kFolds;
    plan.folds[f].target_test.push_back(targets[i]);
    for (std::size_t g = 0; g < kFolds; ++g) {
      if (g != f) plan.folds[g].target_train.push_back(targets[i]);
    }
  }
  for (std::size_t i = 0; i < others.size(); ++i) {
    plan.folds[i % kFolds].other_test.push_back(others[i]);
  }
  return plan;
}

namespace {

std::uint64_t fold_seed(const FoldPlan& plan, std::size_t fold, DescriptorKind kind) {
  return rng::mix(rng::mix(plan.seed, fold), static_cast<std::uint64_t>(kind));
}

double mean_of(std::span<const double> values) {
  return std::accumulate(values.begin(), values.end(), 0.0) /
         static_cast<double>(values.size());
}

double sample_sd(std::span<const double> values, double mean) {
  if (values.size() < 2) return 0.0;
  double sum = 0.0;
  for (const double v : values) sum += (v - mean) * (v - mean);
  return std::sqrt(sum / static_cast<double>(values.size() - 1));
}

template <typename Fn>
auto with_context(const std::string& prefix, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ConvergenceError& e) {
    throw ConvergenceError(prefix + e.what(), e.residual());
  } catch (const ShapeError& e) {
    throw ShapeError(prefix + e.what());
  } catch (const InsufficientDataError& e) {
    throw InsufficientDataError(prefix + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(prefix + e.what());
  } catch (const IoError& e) {
    throw IoError(prefix + e.what());
  }
}

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const unsigned workers = static_cast<unsigned>(
      std::min<std::size_t>(threads, count));
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex error_mutex;
  for (unsigned t = 0; t < workers; ++t) {
    pool.emplace_back([&, t] {
      const std::size_t begin = count * t / workers;
      const std::size_t end = count * (t + 1) / workers;
      try {
        for (std::size_t i = begin; i < end; ++i) fn(i);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (std::thread& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace

TaskEvaluation evaluate_task(DescriptorKind kind, const Coefficients& coefs,
                             const OccTask& task, const FoldPlan& plan, Metric metric) {
  const FeatureMatrix& features = task.dataset->features;
  TaskEvaluation result;
  result.fold_aurocs.reserve(plan.folds.size());
  for (std::size_t f = 0; f < plan.folds.size(); ++f) {
    const std::string prefix =
        task.dataset->id + "/" + task.target_label + " fold " + std::to_string(f) + ": ";
    const double value = with_context(prefix, [&] {
      const Fold& fold = plan.folds[f];
      const FeatureMatrix train = features.select_rows(fold.target_train);
      const IqrScaler scaler = IqrScaler::fit(train);
      const FeatureMatrix scaled_train = scaler.apply(train);
      const auto description =
          fit_description(kind, coefs, scaled_train, metric, fold_seed(plan, f, kind));
      auto score_rows = [&](const std::vector<std::size_t>& ids) {
        std::vector<double> scores;
        scores.reserve(ids.size());
        for (const std::size_t id : ids) {
          scores.push_back(description->score(scaler.apply_row(features.row(id))));
        }
        return scores;
      };
      const std::vector<double> target_scores = score_rows(fold.target_test);
      const std::vector<double> other_scores = score_rows(fold.other_test);
      return auroc(target_scores, other_scores);
    });
    result.fold_aurocs.push_back(value);
  }
  result.mean = mean_of(result.fold_aurocs);
  result.sd = sample_sd(result.fold_aurocs, result.mean);
  return result;
}

double aggregate_weighted(std::span<const double> task_means,
                          std::span<const std::string> dataset_ids) {
  if (task_means.size() != dataset_ids.size()) {
    throw ShapeError("task means and dataset ids differ in length");
  }
  if (task_means.empty()) {
    throw ValidationError("nothing to aggregate");
  }
  std::map<std::string, std::pair<double, std::size_t>> groups;
  for (std::size_t i = 0; i < task_means.size(); ++i) {
    auto& [sum, count] = groups[std::string(dataset_ids[i])];
    sum += task_means[i];
    ++count;
  }
  double total = 0.0;
  for (const auto& [id, group] : groups) {
    total += group.first / static_cast<double>(group.second);
  }
  return total / static_cast<double>(groups.size());
}

std::vector<double> rolling_mean(std::span<const double> values, std::size_t window) {
  if (window % 2 == 0 || window == 0) {
    throw ValidationError("rolling-mean window must be odd");
  }
  const std::size_t n = values.size();
  const std::size_t half = window / 2;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= half ? i - half : 0;                 // window shrinks
    const std::size_t hi = std::min(n - 1, i + half);                // at the edges
    double sum = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) sum += values[j];
    out[i] = sum / static_cast<double>(hi - lo + 1);
  }
  return out;
}

std::size_t GridSurface::points() const noexcept {
  std::size_t p = 1;
  for (const std::size_t s : shape) p *= s;
  return p;
}

std::vector<std::size_t> GridSurface::unflatten(std::size_t flat) const {
  std::vector<std::size_t> idx(shape.size());
  for (std::size_t axis = shape.size(); axis-- > 0;) {
    idx[axis] = flat % shape[axis];
    flat /= shape[axis];
  }
  return idx;
}

GridSurface rolling_mean(const GridSurface& surface, std::span<const std::size_t> windows) {
  if (windows.size() != surface.shape.size()) {
    throw ShapeError("one window per axis required");
  }
  GridSurface out = surface;
  if (surface.shape.empty()) return out;
  if (surface.shape.size() == 1) {
    out.values = rolling_mean(out.values, windows[0]);
    return out;
  }
  if (surface.shape.size() != 2) {
    throw ValidationError("rolling mean supports 1-D and 2-D surfaces");
  }
  // A rectangle mean with per-axis edge shrink factorises into sequential
  // per-axis passes, because the shrink along one axis does not depend on
  // the position along the other.
  const std::size_t rows = surface.shape[0], cols = surface.shape[1];
  std::vector<double> line;
  line.reserve(std::max(rows, cols));
  for (std::size_t r = 0; r < rows; ++r) {
    line.assign(out.values.begin() + r * cols, out.values.begin() + (r + 1) * cols);
    const std::vector<double> smoothed = rolling_mean(line, windows[1]);
    std::copy(smoothed.begin(), smoothed.end(), out.values.begin() + r * cols);
  }
  for (std::size_t c = 0; c < cols; ++c) {
    line.resize(rows);
    for (std::size_t r = 0; r < rows; ++r) line[r] = out.values[r * cols + c];
    const std::vector<double> smoothed = rolling_mean(line, windows[0]);
    for (std::size_t r = 0; r < rows; ++r) out.values[r * cols + c] = smoothed[r];
  }
  return out;
}

namespace {

std::vector<double> axis_values(double lo, double hi, double step) {
  const std::size_t count =
      static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i) {
    // Snap to the step lattice so printed grids carry exact coefficients.
    values[i] = std::round((lo + static_cast<double>(i) * step) / step) * step;
  }
  return values;
}

}  // namespace

HyperGrid default_grid(DescriptorKind kind) {
  HyperGrid grid;
  switch (kind) {
    case DescriptorKind::kNnd:
      grid.axes.push_back({"k", axis_values(1, 50, 1), 3});
      break;
    case DescriptorKind::kLnnd:
    case DescriptorKind::kLof:
      grid.axes.push_back({"a", axis_values(0.5, 12.0, 0.01), 101});
      break;
    case DescriptorKind::kAlp:
      grid.axes.push_back({"a", axis_values(0.5, 12.0, 0.1), 11});
      grid.axes.push_back({"b", axis_values(0.5, 12.0, 0.1), 11});
      break;
    case DescriptorKind::kSvm:
      grid.axes.push_back({"nu", axis_values(0.05, 0.95, 0.1), 11});
      grid.axes.push_back({"c", axis_values(0.05, 2.0, 0.1), 11});
      break;
    case DescriptorKind::kMd:
    case DescriptorKind::kIf:
    case DescriptorKind::kEif:
      break;
  }
  return grid;
}

std::size_t HyperGrid::points() const noexcept {
  std::size_t p = 1;
  for (const GridAxis& axis : axes) p *= axis.values.size();
  return p;
}

Coefficients coefficients_at(DescriptorKind kind, const HyperGrid& grid, std::size_t flat) {
  Coefficients coefs = default_coefficients(kind);
  std::vector<std::size_t> idx(grid.axes.size());
  for (std::size_t axis = grid.axes.size(); axis-- > 0;) {
    idx[axis] = flat % grid.axes[axis].values.size();
    flat /= grid.axes[axis].values.size();
  }
  for (std::size_t axis = 0; axis < grid.axes.size(); ++axis) {
    const double value = grid.axes[axis].values[idx[axis]];
    const std::string& name = grid.axes[axis].name;
    if (name == "k") {
      coefs.nnd_k = static_cast<std::size_t>(std::llround(value));
    } else if (name == "a") {
      coefs.a = value;
    } else if (name == "b") {
      coefs.b = value;
    } else if (name == "nu") {
      coefs.nu = value;
    } else if (name == "c") {
      coefs.c_coef = value;
    } else {
      throw ValidationError("unknown grid axis '" + name + "'");
    }
  }
  return coefs;
}

namespace {

// Per-fold caches that let one task evaluate every grid point without
// repeating neighbour searches or kernel evaluations (the per-point work
// reduces to aggregation).
class TaskGridEvaluator {
 public:
  TaskGridEvaluator(DescriptorKind kind, const OccTask& task, const FoldPlan& plan,
                    Metric metric)
      : kind_(kind), task_(task), plan_(plan), metric_(metric) {
    const bool nn_kind = kind == DescriptorKind::kNnd || kind == DescriptorKind::kLnnd ||
                         kind == DescriptorKind::kLof || kind == DescriptorKind::kAlp;
    const bool svm_kind = kind == DescriptorKind::kSvm;
    const FeatureMatrix& features = task.dataset->features;
    folds_.reserve(plan.folds.size());
    for (std::size_t f = 0; f < plan.folds.size(); ++f) {
      const Fold& fold = plan.folds[f];
      FoldCache cache;
      cache.seed = fold_seed(plan, f, kind);
      const FeatureMatrix train = features.select_rows(fold.target_train);
      cache.scaler = IqrScaler::fit(train);
      cache.scaled_train = cache.scaler.apply(train);
      for (const std::size_t id : fold.target_test) {
        cache.target_queries.push_back(cache.scaler.apply_row(features.row(id)));
      }
      for (const std::size_t id : fold.other_test) {
        cache.other_queries.push_back(cache.scaler.apply_row(features.row(id)));
      }
      const std::size_t n = cache.scaled_train.rows();
      if (nn_kind) {
        cache.index = std::make_unique<NeighborIndex>(cache.scaled_train, metric);
        cache.table = std::make_unique<NeighborTable>(*cache.index, n - 1);
        auto sort_queries = [&](const std::vector<std::vector<double>>& queries,
                                std::vector<KnnResult>& out) {
          out.reserve(queries.size());
          for (const auto& q : queries) {
            out.push_back(cache.index->query_knn(q, n));
          }
        };
        sort_queries(cache.target_queries, cache.target_knn);
        sort_queries(cache.other_queries, cache.other_knn);
      }
      if (svm_kind) {
        const auto& backend = kernels::active();
        const std::size_t m = cache.scaled_train.cols();
        cache.train_sq.resize(n * n);
        for (std::size_t i = 0; i < n; ++i) {
          backend.sqeuclidean_batch(cache.scaled_train.row(i).data(),
                                    cache.scaled_train.data(), n, m,
                                    cache.train_sq.data() + i * n);
        }
        auto query_sq = [&](const std::vector<std::vector<double>>& queries,
                            std::vector<std::vector<double>>& out) {
          out.reserve(queries.size());
          for (const auto& q : queries) {
            std::vector<double> sq(n);
            backend.sqeuclidean_batch(q.data(), cache.scaled_train.data(), n, m, sq.data());
            out.push_back(std::move(sq));
          }
        };
        query_sq(cache.target_queries, cache.target_sq);
        query_sq(cache.other_queries, cache.other_sq);
      }
      folds_.push_back(std::move(cache));
    }
  }

  // Mean AUROC across folds at one grid point; memoized by resolved
  // hyperparameters so reparametrised coefficients that round to the same
  // values are evaluated once.
  double point_mean(const Coefficients& coefs) {
    const std::size_t n = folds_.front().scaled_train.rows();
    const std::size_t m = folds_.front().scaled_train.cols();
    const Hyperparameters hp = resolve_hyperparameters(kind_, coefs, n, m);
    const std::array<double, 4> key{static_cast<double>(hp.k), static_cast<double>(hp.l),
                                    hp.nu, hp.width};
    if (const auto it = memo_.find(key); it != memo_.end()) {
      return it->second;
    }
    std::vector<double> fold_values;
    fold_values.reserve(folds_.size());
    for (std::size_t f = 0; f < folds_.size(); ++f) {
      fold_values.push_back(fold_auroc(folds_[f], coefs, f));
    }
    const double mean = mean_of(fold_values);
    memo_.emplace(key, mean);
    return mean;
  }

 private:
  struct FoldCache {
    IqrScaler scaler;
    FeatureMatrix scaled_train;
    std::vector<std::vector<double>> target_queries, other_queries;
    std::unique_ptr<NeighborIndex> index;
    std::unique_ptr<NeighborTable> table;
    std::vector<KnnResult> target_knn, other_knn;
    std::vector<double> train_sq;
    std::vector<std::vector<double>> target_sq, other_sq;
    std::uint64_t seed = 0;
  };

  double fold_auroc(const FoldCache& cache, const Coefficients& coefs, std::size_t f) {
    const std::size_t n = cache.scaled_train.rows();
    const std::size_t m = cache.scaled_train.cols();
    const Hyperparameters hp = resolve_hyperparameters(kind_, coefs, n, m);
    switch (kind_) {
      case DescriptorKind::kNnd: {
        auto score = [&](const KnnResult& q) { return distance_to_score(q.dists[hp.k - 1]); };
        return auroc_from(cache, score);
      }
      case DescriptorKind::kLnnd: {
        const std::vector<double> train_dk = train_kth_distances(*cache.table, hp.k);
        auto score = [&](const KnnResult& q) {
          return lnnd_score_from(q.dists[hp.k - 1], train_dk[q.ids[hp.k - 1]]);
        };
        return auroc_from(cache, score);
      }
      case DescriptorKind::kLof: {
        const std::vector<double> train_dk = train_kth_distances(*cache.table, hp.k);
        const std::vector<double> train_lrd = train_lrds(*cache.table, hp.k, train_dk);
        auto score = [&](const KnnResult& q) {
          return distance_to_score(lof_from(q.ids, q.dists, train_dk, train_lrd, hp.k));
        };
        return auroc_from(cache, score);
      }
      case DescriptorKind::kAlp: {
        const WeightVector wk = WeightVector::linear(hp.k);
        const WeightVector wl = WeightVector::linear(hp.l);
        std::vector<std::span<const double>> profiles(hp.l);
        auto score = [&](const KnnResult& q) {
          for (std::size_t j = 0; j < hp.l; ++j) {
            profiles[j] = cache.table->dists(q.ids[j]);
          }
          return alp_from_profiles(std::span(q.dists).first(hp.k), profiles, wk, wl).score;
        };
        return auroc_from(cache, score);
      }
      case DescriptorKind::kSvm: {
        std::vector<double> gram(n * n);
        for (std::size_t i = 0; i < n * n; ++i) {
          gram[i] = std::exp(-cache.train_sq[i] / hp.width);
        }
        const SvmDualSolution sol = solve_ocsvm_dual(gram, n, hp.nu, 1e-4, 1'000'000);
        auto decision = [&](const std::vector<double>& sq) {
          double sum = 0.0;
          for (std::size_t i = 0; i < n; ++i) {
            if (sol.alpha[i] > 0) {
              sum += sol.alpha[i] * std::exp(-sq[i] / hp.width);
            }
          }
          const double d = sum - sol.rho;
          return 0.5 * (d / (std::fabs(d) + 1.0) + 1.0);
        };
        std::vector<double> target_scores, other_scores;
        for (const auto& sq : cache.target_sq) target_scores.push_back(decision(sq));
        for (const auto& sq : cache.other_sq) other_scores.push_back(decision(sq));
        return auroc(target_scores, other_scores);
      }
      case DescriptorKind::kMd:
      case DescriptorKind::kIf:
      case DescriptorKind::kEif: {
        const auto description =
            fit_description(kind_, coefs, cache.scaled_train, metric_, cache.seed);
        std::vector<double> target_scores, other_scores;
        for (const auto& q : cache.target_queries) target_scores.push_back(description->score(q));
        for (const auto& q : cache.other_queries) other_scores.push_back(description->score(q));
        return auroc(target_scores, other_scores);
      }
    }
    throw ValidationError("unknown descriptor kind");
  }

  template <typename ScoreFn>
  double auroc_from(const FoldCache& cache, ScoreFn&& score) {
    std::vector<double> target_scores, other_scores;
    target_scores.reserve(cache.target_knn.size());
    other_scores.reserve(cache.other_knn.size());
    for (const KnnResult& q : cache.target_knn) target_scores.push_back(score(q));
    for (const KnnResult& q : cache.other_knn) other_scores.push_back(score(q));
    return auroc(target_scores, other_scores);
  }

  DescriptorKind kind_;
  const OccTask& task_;
  const FoldPlan& plan_;
  Metric metric_;
  std::vector<FoldCache> folds_;
  std::map<std::array<double, 4>, double> memo_;
};

// Mean AUROC per task for every grid point; the outer vector follows the
// task order, each inner vector the flattened grid order.
std::vector<std::vector<double>> per_task_point_means(DescriptorKind kind,
                                                      std::span<const OccTask> tasks,
                                                      const HyperGrid& grid, Metric metric,
                                                      std::uint64_t seed, unsigned threads) {
  const std::size_t points = grid.points();
  std::vector<std::vector<double>> result(tasks.size());
  parallel_for(tasks.size(), threads, [&](std::size_t t) {
    const OccTask& task = tasks[t];
    with_context(task.dataset->id + "/" + task.target_label + ": ", [&] {
      const FoldPlan plan = make_folds(task, seed);
      TaskGridEvaluator evaluator(kind, task, plan, metric);
      std::vector<double> means(points);
      for (std::size_t p = 0; p < points; ++p) {
        means[p] = evaluator.point_mean(coefficients_at(kind, grid, p));
      }
      result[t] = std::move(means);
      return 0;
    });
  });
  return result;
}

GridSearchResult search_from_point_means(DescriptorKind kind, const HyperGrid& grid,
                                         std::span<const OccTask> tasks,
                                         const std::vector<std::vector<double>>& point_means,
                                         std::span<const std::size_t> include) {
  const std::size_t points = grid.points();
  GridSearchResult result;
  for (const GridAxis& axis : grid.axes) {
    result.raw.shape.push_back(axis.values.size());
  }
  result.raw.values.resize(points);

  std::vector<std::string> dataset_ids;
  dataset_ids.reserve(include.size());
  for (const std::size_t t : include) dataset_ids.push_back(tasks[t].dataset->id);

  std::vector<double> task_means(include.size());
  for (std::size_t p = 0; p < points; ++p) {
    for (std::size_t i = 0; i < include.size(); ++i) {
      task_means[i] = point_means[include[i]][p];
    }
    result.raw.values[p] = aggregate_weighted(task_means, dataset_ids);
  }

  std::vector<std::size_t> windows;
  for (const GridAxis& axis : grid.axes) windows.push_back(axis.window);
  result.smoothed = rolling_mean(result.raw, windows);

  // First strict maximum in flat (row-major) order = lexicographically
  // smallest coefficients, since axis values ascend.
  std::size_t best = 0;
  for (std::size_t p = 1; p < points; ++p) {
    if (result.smoothed.values[p] > result.smoothed.values[best]) best = p;
  }
  result.best_index = best;
  result.best = coefficients_at(kind, grid, best);
  return result;
}

}  // namespace

GridSearchResult grid_search(DescriptorKind kind, std::span<const OccTask> tasks,
                             const HyperGrid& grid, Metric metric, std::uint64_t seed,
                             unsigned threads) {
  if (tasks.empty()) {
    throw ValidationError("grid search requires at least one task");
  }
  const auto point_means = per_task_point_means(kind, tasks, grid, metric, seed, threads);
  std::vector<std::size_t> include(tasks.size());
  std::iota(include.begin(), include.end(), 0);
  return search_from_point_means(kind, grid, tasks, point_means, include);
}

LodoResult leave_one_dataset_out(DescriptorKind kind, std::span<const OccTask> tasks,
                                 const HyperGrid& grid, Metric metric, std::uint64_t seed,
                                 unsigned threads) {
  std::vector<std::string> dataset_order;
  for (const OccTask& task : tasks) {
    if (std::find(dataset_order.begin(), dataset_order.end(), task.dataset->id) ==
        dataset_order.end()) {
      dataset_order.push_back(task.dataset->id);
    }
  }
  if (dataset_order.size() < 2) {
    throw ValidationError("leave-one-dataset-out requires at least 2 datasets");
  }

  const auto point_means = per_task_point_means(kind, tasks, grid, metric, seed, threads);

  LodoResult result;
  for (const std::string& held_out : dataset_order) {
    std::vector<std::size_t> rest, mine;
    for (std::size_t t = 0; t < tasks.size(); ++t) {
      (tasks[t].dataset->id == held_out ? mine : rest).push_back(t);
    }
    const GridSearchResult search =
        search_from_point_means(kind, grid, tasks, point_means, rest);

    LodoRound round;
    round.held_out_dataset = held_out;
    round.chosen = search.best;
    round.chosen_index = search.best_index;
    double sum = 0.0;
    for (const std::size_t t : mine) {
      const FoldPlan plan = make_folds(tasks[t], seed);
      TaskEvaluation eval = evaluate_task(kind, round.chosen, tasks[t], plan, metric);
      sum += eval.mean;
      round.held_out_labels.push_back(tasks[t].target_label);
      round.held_out_tasks.push_back(std::move(eval));
    }
    round.dataset_mean = sum / static_cast<double>(mine.size());
    result.rounds.push_back(std::move(round));
  }

  double total = 0.0;
  for (const LodoRound& round : result.rounds) total += round.dataset_mean;
  result.overall_mean = total / static_cast<double>(result.rounds.size());
  return result;
}

}  // namespace occkit
