#pragma once

// Shared helpers for the unit tests: deterministic point generators that are
// independent of the library sampler, and small operator oracles.

#include <complex>
#include <cstdint>
#include <random>

#include "rmat/scalarfun.hpp"
#include "rmat/tensor.hpp"

namespace testing {

using rmat::cplx;

class Points {
 public:
  explicit Points(std::uint64_t seed, cplx period = {0.0, 1.0}, double half_width = 0.4)
      : gen_(seed), period_(period), w_(half_width) {}

  double real(double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  cplx next() { return real(-w_, w_) + real(-w_, w_) * period_; }

  // A point at least `clearance` away from the poles of v.
  cplx off_pole(const rmat::FunctionVariant& v, double clearance = 0.1) {
    for (;;) {
      const cplx x = next();
      if (v.pole_distance(x) >= clearance) return x;
    }
  }

  rmat::TensorOp random_op(const rmat::SlotShape& shape) {
    rmat::TensorOp op(shape);
    for (auto& e : op.entries()) e = cplx{real(-1, 1), real(-1, 1)};
    return op;
  }

 private:
  std::mt19937_64 gen_;
  cplx period_;
  double w_;
};

}  // namespace testing
