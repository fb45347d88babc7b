#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "occkit/core.hpp"

namespace occkit {

// exp(-||x - y||^2 / width); width > 0, symmetric, k(x, x) = 1.
double gaussian_kernel(std::span<const double> x, std::span<const double> y, double width);

struct OcSvmParams {
  double nu = 0.20;
  double width = 0;  // 0 resolves to 0.25 * m
  double tol = 1e-4;
  std::uint64_t max_updates = 1'000'000;
  std::uint64_t seed = 0;          // accepted for interface uniformity; the solver is deterministic
  bool record_objective = false;   // keep a per-update objective trace (tests)
};

struct SvmDualSolution {
  std::vector<double> alpha;
  std::vector<double> grad;  // (Q alpha)_i at the solution
  double rho = 0;
  double objective = 0;  // 0.5 a'Qa
  std::uint64_t updates = 0;
  double violation = 0;  // final maximal KKT violation
  std::vector<double> objective_trace;
};

// Solves min 0.5 a'Qa over {0 <= a <= 1/(nu n), sum a = 1} for a prebuilt
// row-major Gram matrix. Throws ConvergenceError when the update cap is hit.
SvmDualSolution solve_ocsvm_dual(std::span<const double> gram, std::size_t n, double nu,
                                 double tol, std::uint64_t max_updates,
                                 bool record_objective = false);

/// One-class SVM fit in the dual with a Gaussian kernel: minimise
/// 0.5 a'Qa over the simplex {sum a = 1} intersected with the box
/// [0, 1/(nu n)]^n, by repeatedly solving the closed-form two-coordinate
/// subproblem for the maximally violating pair.
class OcSvmModel final : public DataDescription {
 public:
  static OcSvmModel fit(const FeatureMatrix& train, OcSvmParams params);

  // Signed distance to the separating hyperplane (negative on the origin side).
  double decision(std::span<const double> query) const;

  std::size_t dim() const noexcept override { return dim_; }
  double score(std::span<const double> query) const override;

  double rho() const noexcept { return rho_; }
  double nu() const noexcept { return nu_; }
  double width() const noexcept { return width_; }
  std::uint64_t updates() const noexcept { return updates_; }
  double final_violation() const noexcept { return final_violation_; }
  // Dual objective value 0.5 a'Qa at the solution.
  double objective() const noexcept { return objective_; }
  const std::vector<double>& objective_trace() const noexcept { return objective_trace_; }

  // Support rows (alpha > 0) and their coefficients.
  const FeatureMatrix& support_vectors() const noexcept { return support_; }
  const std::vector<double>& support_alphas() const noexcept { return alphas_; }

  static OcSvmModel from_parts(std::size_t dim, double nu, double width, double rho,
                               FeatureMatrix support, std::vector<double> alphas);

 private:
  OcSvmModel(std::size_t dim, double nu, double width, double rho, FeatureMatrix support,
             std::vector<double> alphas)
      : dim_(dim), nu_(nu), width_(width), rho_(rho), support_(std::move(support)),
        alphas_(std::move(alphas)) {}
  std::size_t dim_;
  double nu_;
  double width_;
  double rho_;
  FeatureMatrix support_;
  std::vector<double> alphas_;
  std::uint64_t updates_ = 0;
  double final_violation_ = 0;
  double objective_ = 0;
  std::vector<double> objective_trace_;
};

}  // namespace occkit
