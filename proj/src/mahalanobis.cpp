#include "occkit/mahalanobis.hpp"

#include <Eigen/Dense>

#include <cmath>

#include "occkit/errors.hpp"

namespace occkit {

MdModel MdModel::fit(const FeatureMatrix& train) {
  const std::size_t n = train.rows();
  const std::size_t m = train.cols();
  if (n < 2) {
    throw InsufficientDataError("MD requires at least 2 training rows");
  }

  std::vector<double> mean(m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      mean[j] += train.at(i, j);
    }
  }
  for (double& v : mean) v /= static_cast<double>(n);

  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m),
                                              static_cast<Eigen::Index>(m));
  Eigen::VectorXd dev(static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      dev[static_cast<Eigen::Index>(j)] = train.at(i, j) - mean[j];
    }
    cov.noalias() += dev * dev.transpose();
  }
  cov /= static_cast<double>(n - 1);  // sample covariance

  // Moore-Penrose pseudo-inverse through the symmetric eigendecomposition,
  // with a relative cutoff so rank-deficient covariance is handled exactly
  // on the data's span.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  const Eigen::VectorXd& eigenvalues = solver.eigenvalues();
  const double cutoff = 1e-10 * std::max(eigenvalues.cwiseAbs().maxCoeff(), 0.0);
  Eigen::VectorXd inverted = Eigen::VectorXd::Zero(eigenvalues.size());
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    if (eigenvalues[i] > cutoff && eigenvalues[i] > 0) {
      inverted[i] = 1.0 / eigenvalues[i];
    }
  }
  Eigen::MatrixXd precision =
      solver.eigenvectors() * inverted.asDiagonal() * solver.eigenvectors().transpose();
  // Symmetrise to keep the stored matrix exactly symmetric under rounding.
  precision = 0.5 * (precision + precision.transpose()).eval();

  std::vector<double> prec(m * m);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < m; ++c) {
      prec[r * m + c] = precision(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
  }
  return MdModel(std::move(mean), std::move(prec));
}

MdModel MdModel::from_parts(std::vector<double> mean, std::vector<double> precision) {
  if (precision.size() != mean.size() * mean.size()) {
    throw ShapeError("precision matrix size does not match mean length");
  }
  return MdModel(std::move(mean), std::move(precision));
}

double MdModel::mahalanobis(std::span<const double> query) const {
  check_query(query);
  const std::size_t m = mean_.size();
  std::vector<double> dev(m);
  for (std::size_t j = 0; j < m; ++j) {
    dev[j] = query[j] - mean_[j];
  }
  double quad = 0.0;
  for (std::size_t r = 0; r < m; ++r) {
    double row = 0.0;
    for (std::size_t c = 0; c < m; ++c) {
      row += precision_[r * m + c] * dev[c];
    }
    quad += dev[r] * row;
  }
  return std::sqrt(std::max(quad, 0.0));
}

double MdModel::score(std::span<const double> query) const {
  return distance_to_score(mahalanobis(query));
}

}  // namespace occkit
