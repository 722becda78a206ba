#include "rmat/sampling.hpp"

#include <random>
#include <sstream>

#include "rmat/errors.hpp"

namespace rmat {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_tag(const std::string& name) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : name) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

SamplingPolicy default_policy(const FunctionVariant& variant) {
  SamplingPolicy p;
  switch (variant.kind()) {
    case VariantKind::Elliptic:
      p.half_width = 0.25;
      p.clearance = 0.1;
      break;
    case VariantKind::Trigonometric:
    case VariantKind::Rational:
      p.half_width = 1.0;
      p.clearance = 0.1;
      break;
  }
  return p;
}

Sampler::Sampler(FunctionVariant variant, std::size_t m, SamplingPolicy policy)
    : variant_(std::move(variant)), m_(m), policy_(policy) {
  if (m_ == 0) throw ConfigError("sampler needs M >= 1");
  if (!(policy_.half_width > 0.0) || !(policy_.clearance >= 0.0) || policy_.rejection_cap < 1) {
    throw ConfigError("invalid sampling policy");
  }
}

std::vector<cplx> Sampler::pole_arguments(const Sample& s) {
  std::vector<cplx> args{s.hbar, s.eta, s.hbar - s.eta, s.hbar + s.eta};
  for (std::size_t a = 0; a < 3; ++a) {
    for (std::size_t b = a + 1; b < 3; ++b) args.push_back(s.z[a] - s.z[b]);
  }
  for (std::size_t i = 0; i < s.q.size(); ++i) {
    for (std::size_t j = 0; j < s.q.size(); ++j) {
      if (i == j) continue;
      const cplx qij = s.q[i] - s.q[j];
      args.insert(args.end(), {qij, qij + s.hbar, qij - s.hbar, qij + s.eta, qij - s.eta});
    }
  }
  return args;
}

Sample Sampler::draw(std::uint64_t seed, std::uint64_t stream, std::size_t index) const {
  Sample s;
  s.index = index;
  s.seed = splitmix64(seed ^ splitmix64(stream) ^ splitmix64(static_cast<std::uint64_t>(index) + 1));
  std::mt19937_64 gen(s.seed);
  const cplx period = variant_.tau().value_or(cplx{0.0, 1.0});
  auto uniform = [&] {
    const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    return policy_.half_width * (2.0 * u - 1.0);
  };
  auto scalar = [&] {
    const double a = uniform();
    const double b = uniform();
    return a + b * period;
  };

  for (int attempt = 0; attempt < policy_.rejection_cap; ++attempt) {
    s.hbar = scalar();
    s.eta = scalar();
    for (auto& z : s.z) z = scalar();
    s.q.assign(m_, cplx{});
    for (auto& x : s.q) x = scalar();
    bool ok = true;
    for (const cplx x : pole_arguments(s)) {
      if (variant_.pole_distance(x) < policy_.clearance) {
        ok = false;
        break;
      }
    }
    if (ok) return s;
  }
  std::ostringstream os;
  os << "sampler exhausted its rejection cap (" << policy_.rejection_cap << ") for "
     << variant_.describe() << ", M = " << m_;
  throw NumericalError(os.str());
}

}  // namespace rmat
