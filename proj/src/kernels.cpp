#include "surropt/kernels.hpp"

#include <string>

#if defined(__x86_64__)
#include <immintrin.h>
#endif

namespace surropt::kernels {

namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double sqdist_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

double sum_scalar(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double sum_sq_dev_scalar(const double* x, double mu, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - mu;
    acc += d * d;
  }
  return acc;
}

#if defined(__x86_64__)

__attribute__((target("avx2,fma"))) double hsum256(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

__attribute__((target("avx2,fma"))) double dot_avx2(const double* a, const double* b,
                                                    std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
  }
  double r = hsum256(acc);
  for (; i < n; ++i) r += a[i] * b[i];
  return r;
}

__attribute__((target("avx2,fma"))) void axpy_avx2(double alpha, const double* x,
                                                   double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

__attribute__((target("avx2,fma"))) double sqdist_avx2(const double* a, const double* b,
                                                       std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double r = hsum256(acc);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    r += d * d;
  }
  return r;
}

__attribute__((target("avx2,fma"))) double sum_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  double r = hsum256(acc);
  for (; i < n; ++i) r += x[i];
  return r;
}

__attribute__((target("avx2,fma"))) double sum_sq_dev_avx2(const double* x, double mu,
                                                           std::size_t n) {
  const __m256d vmu = _mm256_set1_pd(mu);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), vmu);
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double r = hsum256(acc);
  for (; i < n; ++i) {
    const double d = x[i] - mu;
    r += d * d;
  }
  return r;
}

bool cpu_has_avx2() {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

#endif  // __x86_64__

const KernelSet* g_active = nullptr;

const KernelSet& pick_best() {
#if defined(__x86_64__)
  if (cpu_has_avx2()) return avx2_kernels();
#endif
  return scalar_kernels();
}

}  // namespace

const KernelSet& scalar_kernels() {
  static const KernelSet set{dot_scalar, axpy_scalar, sqdist_scalar,
                             sum_scalar, sum_sq_dev_scalar, "scalar"};
  return set;
}

#if defined(__x86_64__)
const KernelSet& avx2_kernels() {
  static const KernelSet set{dot_avx2, axpy_avx2, sqdist_avx2,
                             sum_avx2, sum_sq_dev_avx2, "avx2"};
  return set;
}
#endif

const KernelSet& active_kernels() {
  if (!g_active) g_active = &pick_best();
  return *g_active;
}

bool select_kernels(std::string_view name) {
  if (name == "auto") {
    g_active = &pick_best();
    return true;
  }
  if (name == "scalar") {
    g_active = &scalar_kernels();
    return true;
  }
#if defined(__x86_64__)
  if (name == "avx2" && cpu_has_avx2()) {
    g_active = &avx2_kernels();
    return true;
  }
#endif
  return false;
}

}  // namespace surropt::kernels
