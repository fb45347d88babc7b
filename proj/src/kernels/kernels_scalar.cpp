#include <cmath>
#include <cstddef>

#include "occkit/kernels.hpp"

namespace occkit::kernels {

namespace {

double manhattan_scalar(const double* x, const double* y, std::size_t m) {
  double sum = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    sum += std::fabs(x[j] - y[j]);
  }
  return sum;
}

double sqeuclidean_scalar(const double* x, const double* y, std::size_t m) {
  double sum = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double d = x[j] - y[j];
    sum += d * d;
  }
  return sum;
}

void manhattan_batch_scalar(const double* query, const double* rows, std::size_t n,
                            std::size_t m, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = manhattan_scalar(query, rows + i * m, m);
  }
}

void sqeuclidean_batch_scalar(const double* query, const double* rows, std::size_t n,
                              std::size_t m, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = sqeuclidean_scalar(query, rows + i * m, m);
  }
}

}  // namespace

const Backend& scalar_backend() {
  static const Backend backend{
      "scalar",
      &manhattan_scalar,
      &sqeuclidean_scalar,
      &manhattan_batch_scalar,
      &sqeuclidean_batch_scalar,
  };
  return backend;
}

}  // namespace occkit::kernels
