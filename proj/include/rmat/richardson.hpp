#pragma once

#include <functional>

#include "rmat/tensor.hpp"

namespace rmat {

// Geometric ladder eps_k = base / ratio^k, k = 0..order, eliminating the
// eps^1..eps^order terms of a regular expansion f(eps) = f0 + a eps + ...
struct RichardsonLadder {
  double base = 1e-2;
  double ratio = 2.0;
  int order = 2;
  // Largest allowed gap between the estimates of two successive ladders.
  double agreement = 1e-6;
  // f is even in eps: the tableau eliminates eps^2 .. eps^(2 order).
  bool even = false;
};

struct RichardsonEstimate {
  TensorOp value;
  // max-abs gap between the ladder starting at base and the one starting at
  // base / ratio.
  double ladder_gap = 0.0;
};

TensorOp richardson_limit(const std::function<TensorOp(double)>& f,
                          const RichardsonLadder& ladder = {});

// Runs two overlapping ladders and throws NumericalError when they disagree
// by more than ladder.agreement. Returns the estimate of the finer ladder.
RichardsonEstimate richardson_checked(const std::function<TensorOp(double)>& f,
                                      const RichardsonLadder& ladder = {});

// Sixth-order central difference of f at x along the real direction.
TensorOp central_derivative(const std::function<TensorOp(cplx)>& f, cplx x, double step);

}  // namespace rmat
