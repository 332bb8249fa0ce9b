#pragma once

// Small dense arithmetic kernels used by the MLP and the candidate
// samplers. Each kernel has a scalar reference implementation and an
// AVX2/FMA variant; the active set is chosen once at startup from CPU
// capabilities and can be overridden for testing.

#include <cstddef>
#include <string_view>

namespace surropt::kernels {

struct KernelSet {
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  double (*squared_distance)(const double* a, const double* b, std::size_t n);
  double (*sum)(const double* x, std::size_t n);
  // sum of (x[i] - mu)^2
  double (*sum_sq_dev)(const double* x, double mu, std::size_t n);
  const char* name;
};

const KernelSet& scalar_kernels();
#if defined(__x86_64__)
const KernelSet& avx2_kernels();
#endif

// Best set supported by the running CPU.
const KernelSet& active_kernels();

// Force a specific set ("scalar", "avx2", "auto"). Returns false if the
// requested set is unavailable on this CPU.
bool select_kernels(std::string_view name);

inline double dot(const double* a, const double* b, std::size_t n) {
  return active_kernels().dot(a, b, n);
}
inline void axpy(double alpha, const double* x, double* y, std::size_t n) {
  active_kernels().axpy(alpha, x, y, n);
}
inline double squared_distance(const double* a, const double* b, std::size_t n) {
  return active_kernels().squared_distance(a, b, n);
}
inline double sum(const double* x, std::size_t n) {
  return active_kernels().sum(x, n);
}
inline double sum_sq_dev(const double* x, double mu, std::size_t n) {
  return active_kernels().sum_sq_dev(x, mu, n);
}

}  // namespace surropt::kernels
