#pragma once

// Dense complex kernels behind TensorOp. Every kernel has a plain serial
// reference (`*_serial`) and an OpenMP version (`*_parallel`). The parallel
// versions split work over output rows only, so each output entry is
// accumulated in the same order as the reference and results are
// bit-identical for any thread count.

#include <complex>
#include <cstddef>
#include <span>

namespace rmat::kernels {

using cplx = std::complex<double>;

// c = a * b for n x n row-major matrices. c must not alias a or b.
void gemm_serial(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> c,
                 std::size_t n);
// Same product; skips zero entries of a, which makes products of embedded
// (mostly zero) operators cheap.
void gemm_parallel(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> c,
                   std::size_t n);

// Scatter of a small operator into a large one. For every rest offset r and
// every small entry (i, j):
//   big[(rest[r] + in[i]) * big_dim + rest[r] + in[j]] = small[i * small_dim + j]
// `big` must be zero-initialised by the caller.
void embed_serial(std::span<const cplx> small, std::size_t small_dim,
                  std::span<const std::size_t> in_offsets,
                  std::span<const std::size_t> rest_offsets, std::span<cplx> big,
                  std::size_t big_dim);
void embed_parallel(std::span<const cplx> small, std::size_t small_dim,
                    std::span<const std::size_t> in_offsets,
                    std::span<const std::size_t> rest_offsets, std::span<cplx> big,
                    std::size_t big_dim);

// Number of OpenMP workers used by the parallel kernels; 1 without OpenMP.
int max_workers();
void set_workers(int workers);

}  // namespace rmat::kernels
