#include "occkit/isolation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "occkit/errors.hpp"
#include "occkit/rng.hpp"

namespace occkit {

double expected_path_length(std::size_t i) {
  if (i == 0) {
    throw ValidationError("expected_path_length requires i >= 1");
  }
  if (i == 1) return 0.0;  // an isolated instance needs no further splits
  const std::size_t j = i - 1;
  double harmonic;
  if (j <= 10'000) {
    harmonic = 0.0;
    for (std::size_t t = 1; t <= j; ++t) {
      harmonic += 1.0 / static_cast<double>(t);
    }
  } else {
    const double x = static_cast<double>(j);
    harmonic = std::log(x) + std::numbers::egamma + 1.0 / (2.0 * x);
  }
  return 2.0 * harmonic - 2.0 * static_cast<double>(i - 1) / static_cast<double>(i);
}

namespace {

struct TreeBuilder {
  const FeatureMatrix& data;
  SplitMode mode;
  std::size_t depth_limit;
  rng::Engine& eng;
  std::vector<IsolationTree::Node> nodes;

  std::size_t build(std::vector<std::size_t>& ids, std::size_t depth) {
    if (ids.size() <= 1 || depth >= depth_limit) {
      return make_leaf(ids.size());
    }
    return mode == SplitMode::kAxis ? split_axis(ids, depth) : split_extended(ids, depth);
  }

  std::size_t make_leaf(std::size_t count) {
    IsolationTree::Node node;
    node.leaf_count = static_cast<std::uint32_t>(count);
    nodes.push_back(std::move(node));
    return nodes.size() - 1;
  }

  void bounds(const std::vector<std::size_t>& ids, std::vector<double>& lo,
              std::vector<double>& hi) const {
    const std::size_t m = data.cols();
    lo.assign(m, std::numeric_limits<double>::infinity());
    hi.assign(m, -std::numeric_limits<double>::infinity());
    for (const std::size_t id : ids) {
      const auto row = data.row(id);
      for (std::size_t j = 0; j < m; ++j) {
        lo[j] = std::min(lo[j], row[j]);
        hi[j] = std::max(hi[j], row[j]);
      }
    }
  }

  std::size_t split_axis(std::vector<std::size_t>& ids, std::size_t depth) {
    std::vector<double> lo, hi;
    bounds(ids, lo, hi);
    std::vector<std::size_t> eligible;
    for (std::size_t j = 0; j < data.cols(); ++j) {
      if (hi[j] > lo[j]) eligible.push_back(j);
    }
    if (eligible.empty()) {
      return make_leaf(ids.size());  // all remaining rows identical
    }
    const std::size_t axis = eligible[rng::uniform_index(eng, eligible.size())];
    // Draw strictly inside (min, max) so both children stay nonempty.
    double threshold = rng::uniform(eng, lo[axis], hi[axis]);
    for (int attempt = 0; attempt < 8 && threshold <= lo[axis]; ++attempt) {
      threshold = rng::uniform(eng, lo[axis], hi[axis]);
    }
    if (threshold <= lo[axis]) {
      threshold = lo[axis] + 0.5 * (hi[axis] - lo[axis]);
    }

    std::vector<std::size_t> left, right;
    for (const std::size_t id : ids) {
      (data.at(id, axis) < threshold ? left : right).push_back(id);
    }
    IsolationTree::Node node;
    node.axis = static_cast<std::uint32_t>(axis);
    node.threshold = threshold;
    const std::size_t self = nodes.size();
    nodes.push_back(std::move(node));
    const std::size_t left_id = build(left, depth + 1);
    const std::size_t right_id = build(right, depth + 1);
    nodes[self].left = static_cast<std::int32_t>(left_id);
    nodes[self].right = static_cast<std::int32_t>(right_id);
    return self;
  }

  std::size_t split_extended(std::vector<std::size_t>& ids, std::size_t depth) {
    const std::size_t m = data.cols();
    std::vector<double> lo, hi;
    bounds(ids, lo, hi);

    std::vector<double> normal(m);
    std::vector<std::size_t> left, right;
    double offset = 0.0;
    bool found = false;
    for (int attempt = 0; attempt < 8 && !found; ++attempt) {
      for (std::size_t j = 0; j < m; ++j) {
        normal[j] = rng::normal(eng);
      }
      // Intercept point drawn uniformly from the remaining instances' bounding box.
      offset = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        const double p = hi[j] > lo[j] ? rng::uniform(eng, lo[j], hi[j]) : lo[j];
        offset += normal[j] * p;
      }
      left.clear();
      right.clear();
      for (const std::size_t id : ids) {
        const auto row = data.row(id);
        double dot = 0.0;
        for (std::size_t j = 0; j < m; ++j) dot += normal[j] * row[j];
        (dot < offset ? left : right).push_back(id);
      }
      found = !left.empty() && !right.empty();
    }
    if (!found) {
      return make_leaf(ids.size());
    }
    IsolationTree::Node node;
    node.normal = normal;
    node.offset = offset;
    const std::size_t self = nodes.size();
    nodes.push_back(std::move(node));
    const std::size_t left_id = build(left, depth + 1);
    const std::size_t right_id = build(right, depth + 1);
    nodes[self].left = static_cast<std::int32_t>(left_id);
    nodes[self].right = static_cast<std::int32_t>(right_id);
    return self;
  }
};

}  // namespace

double IsolationTree::path_length(std::span<const double> y) const {
  std::size_t node_id = 0;
  double edges = 0.0;
  while (!nodes_[node_id].is_leaf()) {
    const Node& node = nodes_[node_id];
    bool go_left;
    if (node.normal.empty()) {
      go_left = y[node.axis] < node.threshold;
    } else {
      double dot = 0.0;
      for (std::size_t j = 0; j < node.normal.size(); ++j) dot += node.normal[j] * y[j];
      go_left = dot < node.offset;
    }
    node_id = static_cast<std::size_t>(go_left ? node.left : node.right);
    edges += 1.0;
  }
  const std::uint32_t count = nodes_[node_id].leaf_count;
  return count >= 2 ? edges + expected_path_length(count) : edges;
}

IsolationForestModel IsolationForestModel::fit(const FeatureMatrix& train,
                                               IsolationForestParams params) {
  const std::size_t n = train.rows();
  if (n < 2) {
    throw InsufficientDataError("isolation forest requires at least 2 training rows");
  }
  if (params.trees < 1) {
    throw ValidationError("isolation forest needs at least one tree");
  }
  std::size_t psi = params.subsample == 0 ? std::min<std::size_t>(256, n) : params.subsample;
  psi = std::min(psi, n);

  const std::size_t depth_limit =
      static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(psi))));

  std::vector<IsolationTree> trees;
  trees.reserve(params.trees);
  for (std::size_t t = 0; t < params.trees; ++t) {
    // Documented substream rule: tree t draws from mt19937_64(seed xor t).
    rng::Engine eng(params.seed ^ static_cast<std::uint64_t>(t));
    std::vector<std::size_t> ids = rng::sample_without_replacement(n, psi, eng);
    TreeBuilder builder{train, params.mode, depth_limit, eng, {}};
    builder.build(ids, 0);
    trees.emplace_back(std::move(builder.nodes));
  }
  return IsolationForestModel(train.cols(), psi, params.mode, params.seed, std::move(trees));
}

IsolationForestModel IsolationForestModel::from_parts(std::size_t dim, std::size_t psi,
                                                      SplitMode mode, std::uint64_t seed,
                                                      std::vector<IsolationTree> trees) {
  return IsolationForestModel(dim, psi, mode, seed, std::move(trees));
}

double IsolationForestModel::mean_path_length(std::span<const double> y) const {
  double sum = 0.0;
  for (const IsolationTree& tree : trees_) {
    sum += tree.path_length(y);
  }
  return sum / static_cast<double>(trees_.size());
}

double IsolationForestModel::score(std::span<const double> query) const {
  check_query(query);
  const double mean_h = mean_path_length(query);
  const double norm = expected_path_length(psi_);
  // psi = 1 makes both the mean path and the normaliser zero; the anomaly
  // score degenerates to 0.5 in that limit.
  const double exponent = norm > 0 ? mean_h / norm : 1.0;
  const double anomaly = std::pow(2.0, -exponent);
  return 1.0 - anomaly;
}

}  // namespace occkit
