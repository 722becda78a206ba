#pragma once

// Dynamical R-matrices: Felder's GL_M matrix, the composite GL(NM) matrix
// built from a vertex family, the shift action on dynamical parameters, and
// the corresponding classical r-matrices.
//
// Slot conventions: Felder operators have shape [M, M]; composite operators
// have shape [M, M, N, N] ordered (1', 2', 1, 2).

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "rmat/scalarfun.hpp"
#include "rmat/tensor.hpp"
#include "rmat/vertex.hpp"

namespace rmat {

class DynParams {
 public:
  explicit DynParams(std::vector<cplx> q);

  std::size_t size() const noexcept { return q_.size(); }
  cplx operator[](std::size_t k) const { return q_.at(k); }
  std::span<const cplx> values() const noexcept { return q_; }
  // q_ij = q_i - q_j
  cplx diff(std::size_t i, std::size_t j) const { return q_.at(i) - q_.at(j); }

  DynParams shifted(std::size_t k, cplx delta) const;
  DynParams offset(cplx c) const;

  // Throws PoleProximity if some q_ij (i != j) is near a pole of `variant`.
  void require_off_pole(const FunctionVariant& variant) const;

 private:
  std::vector<cplx> q_;
};

// Conjugation by exp(amount * h d/dq_k) weighted by E_kk on `slot`.
struct ShiftSpec {
  std::size_t slot;
  int amount;
};

TensorOp felder_r(cplx h, cplx z12, const DynParams& q, const FunctionVariant& variant);

TensorOp composite_r(cplx h, cplx z, cplx w, const DynParams& q, const RFamily& family);
// Same, with the scalar phi of the diagonal E_ii x E_jj sum taken from
// `phi_variant`; throws ConfigError if it differs from the family's variant.
TensorOp composite_r(cplx h, cplx z, cplx w, const DynParams& q, const RFamily& family,
                     const FunctionVariant& phi_variant);

using DynamicalBuilder = std::function<TensorOp(const DynParams&)>;

// sum_k Pi_k^(slot) builder(q + amount h e_k), iterated over `shifts`.
// The builder output must act as the identity on each shift slot; this is
// probed by a commutator with a diagonal operator on the slot and violations
// above 1e-12 (relative to the operator scale) throw ShapeError.
TensorOp shifted_eval(const DynamicalBuilder& builder, const DynParams& q,
                      std::span<const ShiftSpec> shifts, cplx h, const SlotShape& ambient);

// Which h^0 coefficient of the composite matrix is meant.
//   Expansion: the full h^0 term of the composite R-matrix, including the
//              -E1(q_ij) E_ii x E_jj x Id part coming from phi(h, -q_ij).
//   Reduced:   diagonal r(z) and off-diagonal R^{q_ij}(z) only.
// Both satisfy the classical dynamical Yang-Baxter equation; they differ by
// a q-dependent diagonal term.
enum class ClassicalForm { Expansion, Reduced };

// Felder classical r-matrix:
//   E1(z) sum E_ii x E_ii + sum phi(z, q_ij) E_ij x E_ji - sum E1(q_ij) E_ii x E_jj
TensorOp felder_classical_r(cplx z, const DynParams& q, const FunctionVariant& variant,
                            ClassicalForm form = ClassicalForm::Expansion);
// d/dq_k of felder_classical_r.
TensorOp felder_classical_r_dq(cplx z, const DynParams& q, const FunctionVariant& variant,
                               std::size_t k, ClassicalForm form = ClassicalForm::Expansion);

TensorOp composite_classical_r(cplx z, const DynParams& q, const RFamily& family,
                               ClassicalForm form = ClassicalForm::Expansion);
// d/dq_k of composite_classical_r, using the family's Planck derivative.
TensorOp composite_classical_r_dq(cplx z, const DynParams& q, const RFamily& family,
                                  std::size_t k, ClassicalForm form = ClassicalForm::Expansion);

// Sixth-order central difference of builder(q) in q_k.
TensorOp dq_finite_difference(const DynamicalBuilder& builder, const DynParams& q, std::size_t k,
                              double step = 1e-3);

}  // namespace rmat
