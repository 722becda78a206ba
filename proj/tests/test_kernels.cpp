#include <doctest.h>

#include <vector>

#include "rmat/kernels.hpp"
#include "support.hpp"

using namespace rmat;

namespace {

std::vector<cplx> random_matrix(testing::Points& pts, std::size_t n, double zero_fraction) {
  std::vector<cplx> m(n * n);
  for (auto& e : m) {
    e = pts.real(0, 1) < zero_fraction ? cplx{} : cplx{pts.real(-1, 1), pts.real(-1, 1)};
  }
  return m;
}

}  // namespace

TEST_CASE("parallel gemm is bit-identical to the serial reference") {
  testing::Points pts(21);
  const int saved = kernels::max_workers();
  for (const std::size_t n : {1u, 2u, 7u, 27u, 64u}) {
    for (const double zeros : {0.0, 0.5, 0.95}) {
      const auto a = random_matrix(pts, n, zeros);
      const auto b = random_matrix(pts, n, 0.0);
      std::vector<cplx> ref(n * n), par(n * n);
      kernels::gemm_serial(a, b, ref, n);
      for (const int workers : {1, 2, 4}) {
        kernels::set_workers(workers);
        kernels::gemm_parallel(a, b, par, n);
        CHECK(par == ref);
      }
    }
  }
  kernels::set_workers(saved);
}

TEST_CASE("gemm against a direct triple sum") {
  const std::size_t n = 3;
  std::vector<cplx> a(n * n), b(n * n), c(n * n);
  for (std::size_t i = 0; i < n * n; ++i) {
    a[i] = cplx{1.0 + static_cast<double>(i), 0.5};
    b[i] = cplx{0.0, static_cast<double>(i)};
  }
  kernels::gemm_parallel(a, b, c, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      cplx s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += a[i * n + k] * b[k * n + j];
      CHECK(c[i * n + j] == s);
    }
  }
}

TEST_CASE("parallel embed is identical to the serial reference") {
  testing::Points pts(22);
  // Small operator on the middle slot of dims {3, 2, 4}.
  const std::size_t small_dim = 2, big_dim = 24;
  const auto small = random_matrix(pts, small_dim, 0.0);
  const std::vector<std::size_t> in{0, 4};
  std::vector<std::size_t> rest;
  for (std::size_t a = 0; a < 3; ++a) {
    for (std::size_t c = 0; c < 4; ++c) rest.push_back(a * 8 + c);
  }
  std::vector<cplx> ref(big_dim * big_dim), par(big_dim * big_dim);
  kernels::embed_serial(small, small_dim, in, rest, ref, big_dim);
  for (const int workers : {1, 3}) {
    kernels::set_workers(workers);
    std::fill(par.begin(), par.end(), cplx{});
    kernels::embed_parallel(small, small_dim, in, rest, par, big_dim);
    CHECK(par == ref);
  }
  // Spot check: entry (a, i, c) x (a, j, c).
  CHECK(ref[(8 * 2 + 4 * 1 + 3) * big_dim + (8 * 2 + 4 * 0 + 3)] == small[1 * 2 + 0]);
  CHECK(ref[(8 * 2 + 4 * 1 + 3) * big_dim + (8 * 1 + 4 * 0 + 3)] == cplx{});
}
