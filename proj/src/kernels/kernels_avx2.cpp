// AVX2 variants of the distance kernels. This translation unit is compiled
// with -mavx2 -mfma on x86-64; callers must check CPU support first (the
// dispatcher does). Accumulation order differs from the scalar reference,
// so results may differ in the last few ulps.

#include "occkit/kernels.hpp"

#if defined(__AVX2__) && (defined(__x86_64__) || defined(__i386__))

#include <immintrin.h>

#include <cmath>
#include <cstddef>

namespace occkit::kernels {

namespace {

inline double hsum256(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d shuf = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

double manhattan_avx2(const double* x, const double* y, std::size_t m) {
  const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  __m256d acc = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= m; j += 4) {
    __m256d diff = _mm256_sub_pd(_mm256_loadu_pd(x + j), _mm256_loadu_pd(y + j));
    acc = _mm256_add_pd(acc, _mm256_and_pd(diff, abs_mask));
  }
  double sum = hsum256(acc);
  for (; j < m; ++j) {
    sum += std::fabs(x[j] - y[j]);
  }
  return sum;
}

double sqeuclidean_avx2(const double* x, const double* y, std::size_t m) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= m; j += 4) {
    __m256d diff = _mm256_sub_pd(_mm256_loadu_pd(x + j), _mm256_loadu_pd(y + j));
    acc = _mm256_fmadd_pd(diff, diff, acc);
  }
  double sum = hsum256(acc);
  for (; j < m; ++j) {
    const double d = x[j] - y[j];
    sum += d * d;
  }
  return sum;
}

void manhattan_batch_avx2(const double* query, const double* rows, std::size_t n,
                          std::size_t m, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = manhattan_avx2(query, rows + i * m, m);
  }
}

void sqeuclidean_batch_avx2(const double* query, const double* rows, std::size_t n,
                            std::size_t m, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = sqeuclidean_avx2(query, rows + i * m, m);
  }
}

}  // namespace

// Constant-initialized table; safe to reference before any CPU check.
extern const Backend kAvx2Backend{
    "avx2",
    &manhattan_avx2,
    &sqeuclidean_avx2,
    &manhattan_batch_avx2,
    &sqeuclidean_batch_avx2,
};
extern const bool kAvx2Compiled = true;

}  // namespace occkit::kernels

#else

namespace occkit::kernels {
extern const Backend kAvx2Backend{};
extern const bool kAvx2Compiled = false;
}  // namespace occkit::kernels

#endif
