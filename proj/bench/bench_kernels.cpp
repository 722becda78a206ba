#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "rmat/kernels.hpp"
#include "rmat/tensor.hpp"


namespace {

using rmat::cplx;
namespace kernels = rmat::kernels;

std::vector<cplx> random_matrix(std::size_t n, double density, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0), coin(0.0, 1.0);
  std::vector<cplx> m(n * n);
  for (auto& e : m) e = coin(gen) < density ? cplx{u(gen), u(gen)} : cplx{};
  return m;
}

// Dense and sparse (embedded-operator-like) inputs.
template <void (*Gemm)(std::span<const cplx>, std::span<const cplx>, std::span<cplx>,
                       std::size_t)>
void BM_gemm(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const double density = static_cast<double>(state.range(1)) / 100.0;
  const auto a = random_matrix(n, density, 1);
  const auto b = random_matrix(n, 1.0, 2);
  std::vector<cplx> c(n * n);
  for (auto _ : state) {
    Gemm(a, b, c, n);
    benchmark::DoNotOptimize(c.data());
  }
  state.counters["workers"] = kernels::max_workers();
}

template <void (*Embed)(std::span<const cplx>, std::size_t, std::span<const std::size_t>,
                        std::span<const std::size_t>, std::span<cplx>, std::size_t)>
void BM_embed(benchmark::State& state) {
  // A two-slot operator on slots {1, 4} of [3, 3, 3, 2, 2, 2].
  const rmat::SlotShape big{3, 3, 3, 2, 2, 2};
  const std::size_t dim = big.total();
  const auto strides = big.strides();
  const auto op = random_matrix(6, 1.0, 3);
  std::vector<std::size_t> in, rest;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t a = 0; a < 2; ++a) in.push_back(i * strides[1] + a * strides[4]);
  }
  for (std::size_t x = 0; x < 3; ++x) {
    for (std::size_t y = 0; y < 3; ++y) {
      for (std::size_t p = 0; p < 2; ++p) {
        for (std::size_t q = 0; q < 2; ++q) {
          rest.push_back(x * strides[0] + y * strides[2] + p * strides[3] + q * strides[5]);
        }
      }
    }
  }
  std::vector<cplx> out(dim * dim);
  for (auto _ : state) {
    Embed(op, 6, in, rest, out, dim);
    benchmark::DoNotOptimize(out.data());
  }
}

}  // namespace

BENCHMARK(BM_gemm<kernels::gemm_serial>)
    ->Name("gemm_serial")
    ->ArgsProduct({{64, 216, 729}, {100, 5}})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_gemm<kernels::gemm_parallel>)
    ->Name("gemm_parallel")
    ->ArgsProduct({{64, 216, 729}, {100, 5}})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_embed<kernels::embed_serial>)->Name("embed_serial")->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_embed<kernels::embed_parallel>)->Name("embed_parallel")->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
