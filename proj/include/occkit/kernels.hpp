#pragma once

#include <cstddef>
#include <string>

namespace occkit::kernels {

/// One vector-arithmetic backend. The `*_batch` entry points compute the
/// distance from a single query to every row of a row-major matrix, which is
/// the hot loop behind all nearest-neighbour descriptors and the SVM Gram
/// matrix. Backends must agree with the scalar reference to float rounding.
struct Backend {
  const char* name;
  double (*manhattan)(const double* x, const double* y, std::size_t m);
  double (*sqeuclidean)(const double* x, const double* y, std::size_t m);
  void (*manhattan_batch)(const double* query, const double* rows, std::size_t n,
                          std::size_t m, double* out);
  void (*sqeuclidean_batch)(const double* query, const double* rows, std::size_t n,
                            std::size_t m, double* out);
};

// Portable reference implementation; always available.
const Backend& scalar_backend();

// AVX2 implementation, or nullptr when the CPU lacks AVX2 or the build
// target has no x86 intrinsics.
const Backend* avx2_backend();

// Currently selected backend. Defaults to the widest supported one;
// the environment variable OCCKIT_KERNELS=scalar|avx2 overrides at startup.
const Backend& active();

// Force a backend by name ("scalar", "avx2"). Returns false if the name is
// unknown or unavailable on this machine. Intended for tests and benchmarks.
bool select(const std::string& name);

}  // namespace occkit::kernels
