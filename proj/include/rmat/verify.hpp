#pragma once

// Numerical certification of the quantum and classical identities.
//
// Every checker evaluates a residual operator (or scalar) at one sample and
// reports its entrywise supremum against a tolerance. Identities are checked
// for every ordering of the three spectral parameters where that is meaningful.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "rmat/dynamical.hpp"
#include "rmat/sampling.hpp"
#include "rmat/vertex.hpp"

namespace rmat {

enum class CheckKind {
  AYBE,
  SKEW,
  UNITARITY,
  QYBE,
  FAY,
  CUBIC,
  TWO_PLANCK,
  DYBE_FELDER,
  DYBE_COMPOSITE,
  COMPONENT_IJK,
  SCALAR_UNITARITY,
  CYBE,
  CDYBE_FELDER,
  CDYBE_COMPOSITE,
  // Classical r-matrix against the h -> 0 limit of the quantum matrix.
  CLASSICAL_LIMIT,
};

std::string to_string(CheckKind kind);
CheckKind check_kind_from_string(const std::string& name);
const std::vector<CheckKind>& all_check_kinds();

// True for kinds that need the dynamical parameters q (M >= 1, or M >= 3 for
// COMPONENT_IJK).
bool is_dynamical(CheckKind kind);

struct CheckReport {
  CheckKind kind{};
  Sample sample;
  double residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  // (i, j, k) for COMPONENT_IJK.
  std::optional<std::array<std::size_t, 3>> indices;
};

double default_tolerance(CheckKind kind, const FunctionVariant& variant);

// AYBE, CUBIC, TWO_PLANCK, QYBE over all orderings of (z1, z2, z3); SKEW and
// UNITARITY at z = z1 - z2.
CheckReport check_nondynamical(CheckKind kind, const RFamily& family, const Sample& s,
                               std::optional<double> tolerance = std::nullopt);
TensorOp nondynamical_residual(CheckKind kind, const RFamily& family, cplx h, cplx eta,
                               const std::array<cplx, 3>& z, std::size_t a, std::size_t b,
                               std::size_t c);

// phi(h, x) phi(eta, y) - phi(h - eta, x) phi(eta, x + y) - phi(eta - h, y) phi(h, x + y)
// with x = z1 - z2, y = z2 - z3.
CheckReport check_fay(const FunctionVariant& variant, const Sample& s,
                      std::optional<double> tolerance = std::nullopt);
// phi(h, x) phi(h, -x) - (wp(h) - wp(x)) at x = z1 - z2.
CheckReport check_scalar_unitarity(const FunctionVariant& variant, const Sample& s,
                                   std::optional<double> tolerance = std::nullopt);

// Dynamical Yang-Baxter residual
//   R12 [R13]_{2'} R23 - [R23]_{1'} R13 [R12]_{3'}
// where [X]_{a'} is shifted_eval of X on slot a' with amount -1
// on [M, M, M] (DYBE_FELDER) or [M, M, M, N, N, N] (DYBE_COMPOSITE).
TensorOp dybe_residual(CheckKind kind, const RFamily& family, const Sample& s);
CheckReport check_dybe(CheckKind kind, const RFamily& family, const Sample& s,
                       std::optional<double> tolerance = std::nullopt);

enum class ComponentRoute {
  // The three-index identity assembled directly.
  Direct,
  // The cubic difference identity at Planck constants q_ik, q_kj plus the
  // scalar unitarity identity; algebraically the same residual.
  CubicDifference,
};

// The (i, k, j) component of the composite DYBE for distinct i, j, k (0-based);
// an operator on the three N-slots.
TensorOp component_residual(const RFamily& family, std::size_t i, std::size_t j, std::size_t k,
                            const Sample& s, ComponentRoute route = ComponentRoute::Direct);
CheckReport check_component_identity(const RFamily& family, std::size_t i, std::size_t j,
                                     std::size_t k, const Sample& s,
                                     std::optional<double> tolerance = std::nullopt,
                                     ComponentRoute route = ComponentRoute::Direct);

struct ClassicalOptions {
  ClassicalForm form = ClassicalForm::Expansion;
  // Cross-check analytic q-derivatives against finite differences; a
  // divergence above fd_agreement throws NumericalError.
  bool fd_check = false;
  double fd_agreement = 1e-7;
};

// CYBE on the family's classical part; CDYBE_FELDER and CDYBE_COMPOSITE:
//   [r12, r13] + [r12, r23] + [r13, r23]
//     + sum_k (E_kk^(1') d_k r23 - E_kk^(2') d_k r13 + E_kk^(3') d_k r12).
TensorOp classical_residual(CheckKind kind, const RFamily& family, const Sample& s,
                            const ClassicalOptions& options = {});
CheckReport check_classical(CheckKind kind, const RFamily& family, const Sample& s,
                            std::optional<double> tolerance = std::nullopt,
                            const ClassicalOptions& options = {});

// Consistency of the classical composite r-matrix with the quantum one:
// (a) Richardson limit of the even part of composite_r(eps) against
//     composite_classical_r (Expansion form);
// (b) the O(h) coefficient of the shift operator applied to r12 on slot 3',
//     by central differences on a ladder ten times finer,
//     against sum_k E_kk^(3') d_k r12.
// Returns the larger of the two gaps.
double classical_consistency(const RFamily& family, const Sample& s,
                             const RichardsonLadder& ladder = {});
CheckReport check_classical_limit(const RFamily& family, const Sample& s,
                                  std::optional<double> tolerance = std::nullopt);

}  // namespace rmat
