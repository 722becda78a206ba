#include "rmat/dynamical.hpp"

#include <algorithm>
#include <string>

#include "rmat/errors.hpp"

namespace rmat {

namespace {

std::string qij_name(std::size_t i, std::size_t j) {
  return "q_" + std::to_string(i) + std::to_string(j);
}

// Writes `block` (an operator on the two N-slots) as the coefficient of
// E_{r1 c1} x E_{r2 c2} in an operator of shape [M, M, N, N].
void place_block(TensorOp& out, std::size_t m, std::size_t r1, std::size_t r2, std::size_t c1,
                 std::size_t c2, const TensorOp& block, cplx factor = 1.0) {
  const std::size_t nn = block.dim();
  const std::size_t row0 = (r1 * m + r2) * nn;
  const std::size_t col0 = (c1 * m + c2) * nn;
  for (std::size_t r = 0; r < nn; ++r) {
    for (std::size_t c = 0; c < nn; ++c) out(row0 + r, col0 + c) += factor * block(r, c);
  }
}

void place_scalar(TensorOp& out, std::size_t m, std::size_t r1, std::size_t r2, std::size_t c1,
                  std::size_t c2, cplx value) {
  out(r1 * m + r2, c1 * m + c2) += value;
}

// d q_ij / d q_k
double dqij_dqk(std::size_t i, std::size_t j, std::size_t k) {
  return (k == i ? 1.0 : 0.0) - (k == j ? 1.0 : 0.0);
}

}  // namespace

DynParams::DynParams(std::vector<cplx> q) : q_(std::move(q)) {
  if (q_.empty()) throw ConfigError("dynamical parameters need M >= 1");
}

DynParams DynParams::shifted(std::size_t k, cplx delta) const {
  std::vector<cplx> q = q_;
  q.at(k) += delta;
  return DynParams(std::move(q));
}

DynParams DynParams::offset(cplx c) const {
  std::vector<cplx> q = q_;
  for (auto& x : q) x += c;
  return DynParams(std::move(q));
}

void DynParams::require_off_pole(const FunctionVariant& variant) const {
  for (std::size_t i = 0; i < q_.size(); ++i) {
    for (std::size_t j = 0; j < q_.size(); ++j) {
      if (i != j) variant.require_off_pole(diff(i, j), qij_name(i, j).c_str());
    }
  }
}

TensorOp felder_r(cplx h, cplx z12, const DynParams& q, const FunctionVariant& variant) {
  variant.require_off_pole(h, "h");
  variant.require_off_pole(z12, "z12");
  q.require_off_pole(variant);
  const std::size_t m = q.size();
  TensorOp out(SlotShape{m, m});
  const cplx diag = kronecker_phi(h, z12, variant);
  for (std::size_t i = 0; i < m; ++i) {
    place_scalar(out, m, i, i, i, i, diag);
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      // E_ij x E_ji maps |j, i> to |i, j>.
      place_scalar(out, m, i, j, j, i, kronecker_phi(z12, q.diff(i, j), variant));
      place_scalar(out, m, i, j, i, j, kronecker_phi(h, -q.diff(i, j), variant));
    }
  }
  return out;
}

TensorOp composite_r(cplx h, cplx z, cplx w, const DynParams& q, const RFamily& family) {
  return composite_r(h, z, w, q, family, family.variant());
}

TensorOp composite_r(cplx h, cplx z, cplx w, const DynParams& q, const RFamily& family,
                     const FunctionVariant& phi_variant) {
  if (!phi_variant.same_as(family.variant())) {
    throw ConfigError("composite R-matrix: family '" + family.name() + "' is " +
                      family.variant().describe() + " but phi is " + phi_variant.describe());
  }
  q.require_off_pole(phi_variant);
  const std::size_t m = q.size();
  const std::size_t n = family.n();
  const cplx zw = z - w;
  TensorOp out(SlotShape{m, m, n, n});
  const TensorOp diag = family.eval(h, zw);
  const TensorOp id = TensorOp::identity(family.pair_shape());
  for (std::size_t i = 0; i < m; ++i) {
    place_block(out, m, i, i, i, i, diag);
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      // The Planck slot of the vertex R-matrix takes the value q_ij.
      place_block(out, m, i, j, j, i, family.eval(q.diff(i, j), zw));
      place_block(out, m, i, j, i, j, id, kronecker_phi(h, -q.diff(i, j), phi_variant));
    }
  }
  return out;
}

TensorOp shifted_eval(const DynamicalBuilder& builder, const DynParams& q,
                      std::span<const ShiftSpec> shifts, cplx h, const SlotShape& ambient) {
  for (const ShiftSpec& s : shifts) {
    if (s.slot >= ambient.slots() || ambient.dim(s.slot) != q.size()) {
      throw ShapeError("shifted_eval: shift slot " + std::to_string(s.slot) +
                       " is not an M-dimensional slot of the ambient shape");
    }
  }
  const auto strides = ambient.strides();

  auto probe = [&](const TensorOp& b) {
    if (!(b.shape() == ambient)) throw ShapeError("shifted_eval: builder returned a foreign shape");
    const double tol = 1e-12 * std::max(1.0, max_abs(b));
    const std::size_t n = b.dim();
    for (const ShiftSpec& s : shifts) {
      const std::size_t stride = strides[s.slot];
      const std::size_t d = ambient.dim(s.slot);
      for (std::size_t r = 0; r < n; ++r) {
        const std::size_t dr = (r / stride) % d;
        for (std::size_t c = 0; c < n; ++c) {
          const std::size_t dc = (c / stride) % d;
          const double gap = static_cast<double>(dr) - static_cast<double>(dc);
          if (std::abs(gap * b(r, c)) > tol) {
            throw ShapeError("shifted_eval: builder output does not act as identity on slot " +
                             std::to_string(s.slot));
          }
        }
      }
    }
  };

  std::function<TensorOp(std::size_t, const DynParams&)> expand =
      [&](std::size_t level, const DynParams& current) -> TensorOp {
    if (level == shifts.size()) {
      TensorOp b = builder(current);
      probe(b);
      return b;
    }
    const ShiftSpec& s = shifts[level];
    TensorOp out(ambient);
    std::vector<cplx> projector(q.size());
    for (std::size_t k = 0; k < q.size(); ++k) {
      std::fill(projector.begin(), projector.end(), cplx{});
      projector[k] = 1.0;
      const TensorOp bk = expand(level + 1, current.shifted(k, static_cast<double>(s.amount) * h));
      out += left_slot_diagonal(bk, s.slot, projector);
    }
    return out;
  };
  return expand(0, q);
}

TensorOp felder_classical_r(cplx z, const DynParams& q, const FunctionVariant& variant,
                            ClassicalForm form) {
  variant.require_off_pole(z, "z");
  q.require_off_pole(variant);
  const std::size_t m = q.size();
  TensorOp out(SlotShape{m, m});
  const cplx diag = e1(z, variant);
  for (std::size_t i = 0; i < m; ++i) {
    place_scalar(out, m, i, i, i, i, diag);
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      place_scalar(out, m, i, j, j, i, kronecker_phi(z, q.diff(i, j), variant));
      if (form == ClassicalForm::Expansion) {
        place_scalar(out, m, i, j, i, j, -e1(q.diff(i, j), variant));
      }
    }
  }
  return out;
}

TensorOp felder_classical_r_dq(cplx z, const DynParams& q, const FunctionVariant& variant,
                               std::size_t k, ClassicalForm form) {
  variant.require_off_pole(z, "z");
  q.require_off_pole(variant);
  const std::size_t m = q.size();
  TensorOp out(SlotShape{m, m});
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double s = dqij_dqk(i, j, k);
      if (i == j || s == 0.0) continue;
      place_scalar(out, m, i, j, j, i, s * phi_dq(z, q.diff(i, j), variant));
      if (form == ClassicalForm::Expansion) {
        place_scalar(out, m, i, j, i, j, -s * e1_deriv(q.diff(i, j), variant));
      }
    }
  }
  return out;
}

TensorOp composite_classical_r(cplx z, const DynParams& q, const RFamily& family,
                               ClassicalForm form) {
  const FunctionVariant& variant = family.variant();
  q.require_off_pole(variant);
  const std::size_t m = q.size();
  const std::size_t n = family.n();
  TensorOp out(SlotShape{m, m, n, n});
  const TensorOp r = classical_part(family, z);
  const TensorOp id = TensorOp::identity(family.pair_shape());
  for (std::size_t i = 0; i < m; ++i) {
    place_block(out, m, i, i, i, i, r);
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      place_block(out, m, i, j, j, i, family.eval(q.diff(i, j), z));
      if (form == ClassicalForm::Expansion) {
        place_block(out, m, i, j, i, j, id, -e1(q.diff(i, j), variant));
      }
    }
  }
  return out;
}

TensorOp composite_classical_r_dq(cplx z, const DynParams& q, const RFamily& family,
                                  std::size_t k, ClassicalForm form) {
  const FunctionVariant& variant = family.variant();
  q.require_off_pole(variant);
  const std::size_t m = q.size();
  const std::size_t n = family.n();
  TensorOp out(SlotShape{m, m, n, n});
  const TensorOp id = TensorOp::identity(family.pair_shape());
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double s = dqij_dqk(i, j, k);
      if (i == j || s == 0.0) continue;
      place_block(out, m, i, j, j, i, family.planck_derivative(q.diff(i, j), z), s);
      if (form == ClassicalForm::Expansion) {
        place_block(out, m, i, j, i, j, id, -s * e1_deriv(q.diff(i, j), variant));
      }
    }
  }
  return out;
}

TensorOp dq_finite_difference(const DynamicalBuilder& builder, const DynParams& q, std::size_t k,
                              double step) {
  return central_derivative([&](cplx d) { return builder(q.shifted(k, d)); }, 0.0, step);
}

}  // namespace rmat
