// Self-certification of vertex families. This is a compact, separate
// evaluation of the defining relations; the full checkers live in verify.

#include <algorithm>
#include <array>
#include <sstream>

#include "rmat/errors.hpp"
#include "rmat/vertex.hpp"

namespace rmat {

namespace {

struct Probe {
  cplx h, eta, z1, z2, z3;
};

// Lattice-relative probe points: a + b * period, with period = tau for the
// elliptic realization and i otherwise.
std::array<Probe, 3> probes(const FunctionVariant& v) {
  const cplx p = v.tau().value_or(cplx{0.0, 1.0});
  auto at = [p](double a, double b) { return a + b * p; };
  return {{
      {at(0.23, 0.11), at(-0.17, 0.19), at(0.31, -0.12), at(-0.08, 0.27), at(0.19, 0.03)},
      {at(-0.29, 0.07), at(0.14, 0.22), at(-0.21, 0.18), at(0.26, -0.09), at(0.02, -0.31)},
      {at(0.12, -0.26), at(0.33, 0.05), at(0.07, 0.29), at(-0.24, -0.13), at(0.28, 0.16)},
  }};
}

}  // namespace

double CertificationResidues::worst() const { return std::max({aybe, skew, unitarity}); }

CertificationResidues certification_residues(const RFamily& family) {
  const std::size_t n = family.n();
  const SlotShape three{n, n, n};
  const TensorOp id2 = TensorOp::identity(family.pair_shape());
  const FunctionVariant& v = family.variant();
  CertificationResidues out;

  for (const Probe& p : probes(v)) {
    const cplx z12 = p.z1 - p.z2;
    const cplx z23 = p.z2 - p.z3;
    const cplx z13 = p.z1 - p.z3;
    auto r = [&](cplx h, cplx z, std::initializer_list<std::size_t> slots) {
      return embed(family.eval(h, z), slots, three);
    };
    const TensorOp lhs = compose(r(p.h, z12, {0, 1}), r(p.eta, z23, {1, 2}));
    TensorOp rhs = compose(r(p.eta, z13, {0, 2}), r(p.h - p.eta, z12, {0, 1}));
    rhs += compose(r(p.eta - p.h, z23, {1, 2}), r(p.h, z13, {0, 2}));
    out.aybe = std::max(out.aybe, max_abs_diff(lhs, rhs));

    const TensorOp r12 = family.eval(p.h, z12);
    const TensorOp skew = adjoint_swap(family.eval(-p.h, -z12), 0, 1);
    out.skew = std::max(out.skew, max_abs(add(r12, skew)));

    const TensorOp unit = compose(r12, adjoint_swap(family.eval(p.h, -z12), 0, 1));
    const TensorOp expected = scale(id2, wp(p.h, v) - wp(z12, v));
    out.unitarity = std::max(out.unitarity, max_abs_diff(unit, expected));

    // lim eps R^eps(z) along a ladder that stays outside the pole radius.
    const TensorOp residue = richardson_limit(
        [&](double eps) { return scale(family.eval(eps, z12), eps); },
        RichardsonLadder{0.02, 2.0, 3, 1e-6});
    out.normalization = std::max(out.normalization, max_abs_diff(residue, id2));
  }
  return out;
}

const RFamily& certify_family(const RFamily& family, double tolerance) {
  CertificationResidues res;
  try {
    res = certification_residues(family);
  } catch (const PoleProximity& e) {
    throw CertificationError("family '" + family.name() +
                             "' cannot be evaluated at the certification points: " + e.what());
  }
  if (!(res.worst() <= tolerance) || !(res.normalization <= 1e-4)) {
    std::ostringstream os;
    os << "family '" << family.name() << "' (N=" << family.n() << ", "
       << family.variant().describe() << ") failed certification: AYBE " << res.aybe
       << ", skew " << res.skew << ", unitarity " << res.unitarity << ", 1/h pole "
       << res.normalization << " (tolerance " << tolerance << ")";
    throw CertificationError(os.str());
  }
  return family;
}

}  // namespace rmat
