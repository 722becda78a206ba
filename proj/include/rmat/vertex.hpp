#pragma once

// Non-dynamical GL_N R-matrix families. Everything downstream (the dynamical
// construction, the identity checkers, the CLI) only sees RFamily.

#include <cstddef>
#include <functional>
#include <string>

#include "rmat/richardson.hpp"
#include "rmat/scalarfun.hpp"
#include "rmat/tensor.hpp"

namespace rmat {

class RFamily {
 public:
  // R^h(z) on the two N-slots.
  using Evaluator = std::function<TensorOp(cplx h, cplx z)>;
  using ClassicalEvaluator = std::function<TensorOp(cplx z)>;

  struct Parts {
    std::string name;
    std::size_t n = 1;
    FunctionVariant variant = FunctionVariant::rational();
    Evaluator eval;
    // Optional: r(z), the h^0 coefficient of R^h(z) = 1/h + r(z) + O(h).
    ClassicalEvaluator classical;
    // Optional: d/dh R^h(z). Central differences are used when absent.
    Evaluator planck_derivative;
  };

  explicit RFamily(Parts parts);

  const std::string& name() const noexcept { return parts_.name; }
  std::size_t n() const noexcept { return parts_.n; }
  const FunctionVariant& variant() const noexcept { return parts_.variant; }
  SlotShape pair_shape() const { return SlotShape{parts_.n, parts_.n}; }

  TensorOp eval(cplx h, cplx z) const;
  TensorOp operator()(cplx h, cplx z) const { return eval(h, z); }

  bool has_classical() const noexcept { return static_cast<bool>(parts_.classical); }
  TensorOp classical_eval(cplx z) const;

  bool has_planck_derivative() const noexcept {
    return static_cast<bool>(parts_.planck_derivative);
  }
  // d/dh R^h(z): the analytic form when available, otherwise a sixth-order
  // central difference.
  TensorOp planck_derivative(cplx h, cplx z) const;
  // Always the finite-difference estimate (used for cross-checks).
  TensorOp planck_derivative_fd(cplx h, cplx z) const;

 private:
  Parts parts_;
};

// N = 1 family R^h(z) = phi(h, z).
RFamily scalar_family(const FunctionVariant& variant);

// Yang's R-matrix 1/h Id + 1/z P on C^N x C^N (rational).
RFamily yang_family(std::size_t n, double pole_radius = kDefaultPoleRadius);

// Baxter-Belavin elliptic R-matrix expanded over the clock/shift basis
// T_a = Q^{a1} L^{a2}:
//   R^h(z) = 1/N sum_a exp(2 pi i a2 z / N) phi(z, (a1 + a2 tau)/N + h/N) T_a x T_a^{-1}.
// The family is certified (AYBE, skew-symmetry, unitarity, 1/h pole) at
// construction; throws CertificationError on failure and ConfigError for N < 2.
RFamily belavin_family(std::size_t n, cplx tau, double pole_radius = kDefaultPoleRadius);

// Clock Q = diag(1, e, ..., e^{N-1}), e = exp(2 pi i / N), and the cyclic
// shift L with L(k, k+1 mod N) = 1.
TensorOp clock_matrix(std::size_t n);
TensorOp shift_matrix(std::size_t n);

// Permutation P_12 on C^N x C^N.
TensorOp pair_permutation(std::size_t n);

// r(z): classical_eval when the family has one, otherwise Richardson
// extrapolation of (R^eps(z) + R^-eps(z)) / 2 in eps^2 along the ladder.
TensorOp classical_part(const RFamily& family, cplx z, const RichardsonLadder& ladder = {});

struct CertificationResidues {
  double aybe = 0.0;
  double skew = 0.0;
  double unitarity = 0.0;
  // max |lim eps R^eps(z) - Id|, extrapolated from eps in [2.5e-3, 2e-2].
  double normalization = 0.0;
  double worst() const;
};

// Residuals of the defining relations at a fixed set of probe points.
CertificationResidues certification_residues(const RFamily& family);

// Throws CertificationError if any residue exceeds tolerance (normalization
// is held to 1e-4). Returns the family unchanged on success.
const RFamily& certify_family(const RFamily& family, double tolerance = 1e-10);

// Loads a plugin shared library (see plugin_abi.h); certifies it unless
// `certify` is false.
RFamily load_plugin_family(const std::string& path, bool certify = true,
                           double tolerance = 1e-10);

}  // namespace rmat
