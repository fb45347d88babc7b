#include "occkit/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "occkit/errors.hpp"
#include "occkit/kernels.hpp"

namespace occkit {

double gaussian_kernel(std::span<const double> x, std::span<const double> y, double width) {
  if (!(width > 0) || !std::isfinite(width)) {
    throw ValidationError("gaussian kernel width must be positive");
  }
  if (x.size() != y.size()) {
    throw ShapeError("kernel arguments of length " + std::to_string(x.size()) + " and " +
                     std::to_string(y.size()));
  }
  const double sq = kernels::active().sqeuclidean(x.data(), y.data(), x.size());
  return std::exp(-sq / width);
}

SvmDualSolution solve_ocsvm_dual(std::span<const double> gram, std::size_t n, double nu,
                                 double tol, std::uint64_t max_updates,
                                 bool record_objective) {
  if (n < 2 || gram.size() != n * n) {
    throw ShapeError("gram matrix does not match the instance count");
  }
  if (!(nu > 0) || nu > 1) {
    throw ValidationError("nu must lie in (0, 1]");
  }
  if (!(tol > 0)) {
    throw ValidationError("solver tolerance must be positive");
  }

  const double box = 1.0 / (nu * static_cast<double>(n));
  std::vector<double> alpha(n, 0.0);
  const std::size_t full = static_cast<std::size_t>(nu * static_cast<double>(n));
  for (std::size_t i = 0; i < std::min(full, n); ++i) alpha[i] = box;
  if (full < n) {
    alpha[full] = std::max(0.0, 1.0 - box * static_cast<double>(full));
  }

  std::vector<double> grad(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) sum += gram[i * n + j] * alpha[j];
    grad[i] = sum;
  }

  double objective = 0.0;
  for (std::size_t i = 0; i < n; ++i) objective += alpha[i] * grad[i];
  objective *= 0.5;

  std::vector<double> trace;
  if (record_objective) trace.push_back(objective);

  // Two-coordinate descent on the maximally violating pair: move mass toward
  // the smallest gradient among increasable coordinates, away from the
  // largest among reducible ones; the direction e_i - e_j keeps sum a = 1
  // and the closed-form step is clipped to the box.
  std::uint64_t updates = 0;
  double violation = 0.0;
  while (true) {
    std::size_t best_up = n, best_down = n;
    double g_up = std::numeric_limits<double>::infinity();
    double g_down = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      if (alpha[i] < box && grad[i] < g_up) {
        g_up = grad[i];
        best_up = i;
      }
      if (alpha[i] > 0 && grad[i] > g_down) {
        g_down = grad[i];
        best_down = i;
      }
    }
    violation = g_down - g_up;
    if (best_up == n || best_down == n || violation <= tol) {
      break;
    }
    if (updates >= max_updates) {
      throw ConvergenceError("one-class SVM did not converge: KKT violation " +
                                 std::to_string(violation) + " after " +
                                 std::to_string(updates) + " updates",
                             violation);
    }
    const std::size_t i = best_up, j = best_down;
    const double denom =
        std::max(gram[i * n + i] + gram[j * n + j] - 2.0 * gram[i * n + j], 1e-12);
    double delta = violation / denom;
    const double room_i = box - alpha[i];
    delta = std::min(delta, std::min(room_i, alpha[j]));
    objective += -delta * violation + 0.5 * delta * delta * denom;
    if (delta == room_i) {
      alpha[i] = box;  // snap to the bound so the working-set filters stay exact
    } else {
      alpha[i] += delta;
    }
    if (delta == alpha[j]) {
      alpha[j] = 0.0;
    } else {
      alpha[j] -= delta;
    }
    for (std::size_t r = 0; r < n; ++r) {
      grad[r] += delta * (gram[r * n + i] - gram[r * n + j]);
    }
    ++updates;
    if (record_objective) trace.push_back(objective);
  }

  // Offset: median decision value over unbounded support vectors; fall back
  // to the midpoint between the bound groups when none exist.
  std::vector<double> unbounded;
  double max_at_box = -std::numeric_limits<double>::infinity();
  double min_at_zero = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    if (alpha[i] > 0 && alpha[i] < box) {
      unbounded.push_back(grad[i]);
    } else if (alpha[i] >= box) {
      max_at_box = std::max(max_at_box, grad[i]);
    } else {
      min_at_zero = std::min(min_at_zero, grad[i]);
    }
  }
  double rho;
  if (!unbounded.empty()) {
    std::sort(unbounded.begin(), unbounded.end());
    const std::size_t mid = unbounded.size() / 2;
    rho = unbounded.size() % 2 == 1 ? unbounded[mid]
                                    : 0.5 * (unbounded[mid - 1] + unbounded[mid]);
  } else if (std::isfinite(max_at_box) && std::isfinite(min_at_zero)) {
    rho = 0.5 * (max_at_box + min_at_zero);
  } else if (std::isfinite(max_at_box)) {
    rho = max_at_box;
  } else {
    rho = min_at_zero;
  }

  SvmDualSolution solution;
  solution.alpha = std::move(alpha);
  solution.grad = std::move(grad);
  solution.rho = rho;
  solution.objective = objective;
  solution.updates = updates;
  solution.violation = violation;
  solution.objective_trace = std::move(trace);
  return solution;
}

OcSvmModel OcSvmModel::fit(const FeatureMatrix& train, OcSvmParams params) {
  const std::size_t n = train.rows();
  const std::size_t m = train.cols();
  if (n < 2) {
    throw InsufficientDataError("SVM requires at least 2 training rows");
  }
  const double width = params.width == 0 ? 0.25 * static_cast<double>(m) : params.width;
  if (!(width > 0) || !std::isfinite(width)) {
    throw ValidationError("gaussian kernel width must be positive");
  }

  // Full Gram matrix; fine at the data sizes this solver targets.
  std::vector<double> gram(n * n);
  {
    std::vector<double> sq(n);
    const auto& backend = kernels::active();
    for (std::size_t i = 0; i < n; ++i) {
      backend.sqeuclidean_batch(train.row(i).data(), train.data(), n, m, sq.data());
      for (std::size_t j = 0; j < n; ++j) {
        gram[i * n + j] = std::exp(-sq[j] / width);
      }
    }
  }

  SvmDualSolution solution = solve_ocsvm_dual(gram, n, params.nu, params.tol,
                                              params.max_updates, params.record_objective);

  std::vector<std::size_t> support_ids;
  std::vector<double> support_alphas;
  for (std::size_t i = 0; i < n; ++i) {
    if (solution.alpha[i] > 0) {
      support_ids.push_back(i);
      support_alphas.push_back(solution.alpha[i]);
    }
  }
  OcSvmModel model(m, params.nu, width, solution.rho, train.select_rows(support_ids),
                   std::move(support_alphas));
  model.updates_ = solution.updates;
  model.final_violation_ = solution.violation;
  model.objective_ = solution.objective;
  model.objective_trace_ = std::move(solution.objective_trace);
  return model;
}

OcSvmModel OcSvmModel::from_parts(std::size_t dim, double nu, double width, double rho,
                                  FeatureMatrix support, std::vector<double> alphas) {
  if (support.rows() != alphas.size() || support.cols() != dim) {
    throw ShapeError("support vectors and coefficients do not line up");
  }
  return OcSvmModel(dim, nu, width, rho, std::move(support), std::move(alphas));
}

double OcSvmModel::decision(std::span<const double> query) const {
  check_query(query);
  const std::size_t n = support_.rows();
  std::vector<double> sq(n);
  kernels::active().sqeuclidean_batch(query.data(), support_.data(), n, support_.cols(),
                                      sq.data());
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sum += alphas_[i] * std::exp(-sq[i] / width_);
  }
  return sum - rho_;
}

double OcSvmModel::score(std::span<const double> query) const {
  const double d = decision(query);
  return 0.5 * (d / (std::fabs(d) + 1.0) + 1.0);
}

}  // namespace occkit
