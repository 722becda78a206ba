#pragma once

// Seeded, platform-independent sampling of identity arguments.
//
// Generator "rmat-sample-v1": each sample owns a std::mt19937_64 stream seeded
// with splitmix64(seed ^ splitmix64(stream_tag) ^ splitmix64(index + 1)).
// Uniform doubles are (x >> 11) * 2^-53, so a sample depends only on
// (seed, stream tag, index) and never on thread scheduling.

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "rmat/scalarfun.hpp"

namespace rmat {

inline constexpr const char* kSamplerName = "rmat-sample-v1 (mt19937_64, splitmix64 stream seeding)";

std::uint64_t splitmix64(std::uint64_t x);

struct Sample {
  std::uint64_t seed = 0;  // derived per-sample seed
  std::size_t index = 0;
  cplx hbar{};
  cplx eta{};
  std::array<cplx, 3> z{};
  std::vector<cplx> q;
};

struct SamplingPolicy {
  // Each scalar is a + b * period with a, b uniform in [-half_width, half_width];
  // period is tau (elliptic) or i.
  double half_width = 1.0;
  // Minimum distance from every pole-relevant argument to the pole set.
  double clearance = 0.1;
  int rejection_cap = 1000;
};

SamplingPolicy default_policy(const FunctionVariant& variant);

class Sampler {
 public:
  Sampler(FunctionVariant variant, std::size_t m, SamplingPolicy policy);

  // Throws NumericalError once the rejection cap is exhausted.
  Sample draw(std::uint64_t seed, std::uint64_t stream_tag, std::size_t index) const;

  // Arguments that must clear the pole set: h, eta, h +- eta, z_ab, q_ij,
  // q_ij +- h, q_ij +- eta.
  static std::vector<cplx> pole_arguments(const Sample& s);

  const SamplingPolicy& policy() const noexcept { return policy_; }

 private:
  FunctionVariant variant_;
  std::size_t m_;
  SamplingPolicy policy_;
};

// Stable 64-bit tag for a name (FNV-1a), used to separate sample streams.
std::uint64_t stream_tag(const std::string& name);

}  // namespace rmat
