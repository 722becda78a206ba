#include "rmat/kernels.hpp"

#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rmat::kernels {

void gemm_serial(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> c,
                 std::size_t n) {
  std::fill(c.begin(), c.end(), cplx{});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const cplx aik = a[i * n + k];
      for (std::size_t j = 0; j < n; ++j) {
        c[i * n + j] += aik * b[k * n + j];
      }
    }
  }
}

void gemm_parallel(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> c,
                   std::size_t n) {
  const double* bd = reinterpret_cast<const double*>(b.data());
  double* cd = reinterpret_cast<double*>(c.data());
  const auto rows = static_cast<std::ptrdiff_t>(n);

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    double* crow = cd + 2 * static_cast<std::size_t>(i) * n;
    std::fill(crow, crow + 2 * n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      const cplx aik = a[static_cast<std::size_t>(i) * n + k];
      const double ar = aik.real();
      const double ai = aik.imag();
      if (ar == 0.0 && ai == 0.0) continue;
      const double* brow = bd + 2 * k * n;
      // Same arithmetic as std::complex multiply-accumulate in gemm_serial.
      for (std::size_t j = 0; j < n; ++j) {
        const double br = brow[2 * j];
        const double bi = brow[2 * j + 1];
        crow[2 * j] += ar * br - ai * bi;
        crow[2 * j + 1] += ar * bi + ai * br;
      }
    }
  }
}

void embed_serial(std::span<const cplx> small, std::size_t small_dim,
                  std::span<const std::size_t> in_offsets,
                  std::span<const std::size_t> rest_offsets, std::span<cplx> big,
                  std::size_t big_dim) {
  for (const std::size_t r : rest_offsets) {
    for (std::size_t i = 0; i < small_dim; ++i) {
      const std::size_t row = (r + in_offsets[i]) * big_dim + r;
      for (std::size_t j = 0; j < small_dim; ++j) {
        big[row + in_offsets[j]] = small[i * small_dim + j];
      }
    }
  }
}

void embed_parallel(std::span<const cplx> small, std::size_t small_dim,
                    std::span<const std::size_t> in_offsets,
                    std::span<const std::size_t> rest_offsets, std::span<cplx> big,
                    std::size_t big_dim) {
  const auto count = static_cast<std::ptrdiff_t>(rest_offsets.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t idx = 0; idx < count; ++idx) {
    const std::size_t r = rest_offsets[static_cast<std::size_t>(idx)];
    for (std::size_t i = 0; i < small_dim; ++i) {
      const std::size_t row = (r + in_offsets[i]) * big_dim + r;
      for (std::size_t j = 0; j < small_dim; ++j) {
        big[row + in_offsets[j]] = small[i * small_dim + j];
      }
    }
  }
}

int max_workers() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_workers(int workers) {
#ifdef _OPENMP
  if (workers > 0) omp_set_num_threads(workers);
#else
  (void)workers;
#endif
}

}  // namespace rmat::kernels
