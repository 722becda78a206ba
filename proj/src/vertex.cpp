#include "rmat/vertex.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <vector>

#include "rmat/errors.hpp"

namespace rmat {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};
constexpr double kFdStep = 1e-3;

TensorOp one_by_one(cplx value) {
  TensorOp out(SlotShape{1, 1});
  out(0, 0) = value;
  return out;
}

}  // namespace

RFamily::RFamily(Parts parts) : parts_(std::move(parts)) {
  if (parts_.n == 0) throw ConfigError("R-matrix family needs N >= 1");
  if (!parts_.eval) throw ConfigError("R-matrix family '" + parts_.name + "' has no evaluator");
}

TensorOp RFamily::eval(cplx h, cplx z) const {
  TensorOp out = parts_.eval(h, z);
  if (!(out.shape() == pair_shape())) {
    throw ShapeError("family '" + parts_.name + "' returned an operator of the wrong shape");
  }
  return out;
}

TensorOp RFamily::classical_eval(cplx z) const {
  if (!parts_.classical) {
    throw ConfigError("family '" + parts_.name + "' has no closed-form classical r-matrix");
  }
  TensorOp out = parts_.classical(z);
  if (!(out.shape() == pair_shape())) {
    throw ShapeError("family '" + parts_.name + "' returned a classical r of the wrong shape");
  }
  return out;
}

TensorOp RFamily::planck_derivative(cplx h, cplx z) const {
  if (parts_.planck_derivative) return parts_.planck_derivative(h, z);
  return planck_derivative_fd(h, z);
}

TensorOp RFamily::planck_derivative_fd(cplx h, cplx z) const {
  return central_derivative([&](cplx x) { return eval(x, z); }, h, kFdStep);
}

RFamily scalar_family(const FunctionVariant& variant) {
  RFamily::Parts parts;
  parts.name = "scalar";
  parts.n = 1;
  parts.variant = variant;
  parts.eval = [variant](cplx h, cplx z) { return one_by_one(kronecker_phi(h, z, variant)); };
  parts.classical = [variant](cplx z) { return one_by_one(e1(z, variant)); };
  // phi is symmetric, so d/dh phi(h, z) is the second-argument derivative of phi(z, h).
  parts.planck_derivative = [variant](cplx h, cplx z) {
    return one_by_one(phi_dq(z, h, variant));
  };
  return RFamily(std::move(parts));
}

TensorOp pair_permutation(std::size_t n) { return permutation(0, 1, SlotShape{n, n}); }

RFamily yang_family(std::size_t n, double pole_radius) {
  if (n == 0) throw ConfigError("Yang family needs N >= 1");
  const auto variant = FunctionVariant::rational(pole_radius);
  const SlotShape shape{n, n};
  auto id = std::make_shared<const TensorOp>(TensorOp::identity(shape));
  auto perm = std::make_shared<const TensorOp>(pair_permutation(n));

  RFamily::Parts parts;
  parts.name = "yang";
  parts.n = n;
  parts.variant = variant;
  parts.eval = [variant, id, perm](cplx h, cplx z) {
    variant.require_off_pole(h, "h");
    variant.require_off_pole(z, "z");
    TensorOp out = scale(*id, 1.0 / h);
    out.add_scaled(1.0 / z, *perm);
    return out;
  };
  parts.classical = [variant, perm](cplx z) {
    variant.require_off_pole(z, "z");
    return scale(*perm, 1.0 / z);
  };
  parts.planck_derivative = [variant, id](cplx h, cplx) {
    variant.require_off_pole(h, "h");
    return scale(*id, -1.0 / (h * h));
  };
  return RFamily(std::move(parts));
}

TensorOp clock_matrix(std::size_t n) {
  TensorOp q(SlotShape{n});
  for (std::size_t k = 0; k < n; ++k) {
    q(k, k) = std::exp(2.0 * kPi * kI * static_cast<double>(k) / static_cast<double>(n));
  }
  return q;
}

TensorOp shift_matrix(std::size_t n) {
  TensorOp l(SlotShape{n});
  for (std::size_t k = 0; k < n; ++k) l(k, (k + 1) % n) = 1.0;
  return l;
}

namespace {

struct BelavinBasis {
  std::size_t n;
  // T_a x T_a^{-1} for a = (a1, a2), index a1 * n + a2.
  std::vector<TensorOp> pairs;
  std::vector<cplx> omega;
};

std::shared_ptr<const BelavinBasis> make_belavin_basis(std::size_t n, cplx tau) {
  auto basis = std::make_shared<BelavinBasis>();
  basis->n = n;
  const TensorOp q = clock_matrix(n);
  const TensorOp l = shift_matrix(n);
  // Q^{-1} = Q^{n-1}, L^{-1} = L^{n-1}.
  std::vector<TensorOp> q_pow{TensorOp::identity(SlotShape{n})};
  std::vector<TensorOp> l_pow{TensorOp::identity(SlotShape{n})};
  for (std::size_t k = 1; k < n; ++k) {
    q_pow.push_back(compose(q_pow.back(), q));
    l_pow.push_back(compose(l_pow.back(), l));
  }
  for (std::size_t a1 = 0; a1 < n; ++a1) {
    for (std::size_t a2 = 0; a2 < n; ++a2) {
      const TensorOp t = compose(q_pow[a1], l_pow[a2]);
      const TensorOp t_inv = compose(l_pow[(n - a2) % n], q_pow[(n - a1) % n]);
      basis->pairs.push_back(kron(t, t_inv));
      basis->omega.push_back((static_cast<double>(a1) + static_cast<double>(a2) * tau) /
                             static_cast<double>(n));
    }
  }
  return basis;
}

}  // namespace

RFamily belavin_family(std::size_t n, cplx tau, double pole_radius) {
  if (n < 2) throw ConfigError("Belavin family needs N >= 2, got N = " + std::to_string(n));
  const auto variant = FunctionVariant::elliptic(tau, pole_radius);
  // The poles of R^h(z) in h are the lattice itself; the guard is applied to
  // h, and the shifted arguments omega_a + h/N go through a tight-radius copy.
  const auto inner = FunctionVariant::elliptic(tau, 1e-14);
  const auto basis = make_belavin_basis(n, tau);
  const double nd = static_cast<double>(n);

  auto phase = [nd](std::size_t a2, cplx z) {
    return std::exp(2.0 * kPi * kI * static_cast<double>(a2) * z / nd);
  };

  RFamily::Parts parts;
  parts.name = "belavin";
  parts.n = n;
  parts.variant = variant;
  parts.eval = [variant, inner, basis, nd, phase](cplx h, cplx z) {
    variant.require_off_pole(h, "h");
    variant.require_off_pole(z, "z");
    TensorOp out(SlotShape{basis->n, basis->n});
    for (std::size_t a = 0; a < basis->pairs.size(); ++a) {
      const std::size_t a2 = a % basis->n;
      const cplx c = phase(a2, z) * kronecker_phi(z, basis->omega[a] + h / nd, inner) / nd;
      out.add_scaled(c, basis->pairs[a]);
    }
    return out;
  };
  parts.classical = [variant, basis, nd, phase](cplx z) {
    TensorOp out = scale(basis->pairs[0], e1(z, variant) / nd);
    for (std::size_t a = 1; a < basis->pairs.size(); ++a) {
      const std::size_t a2 = a % basis->n;
      const cplx c = phase(a2, z) * kronecker_phi(z, basis->omega[a], variant) / nd;
      out.add_scaled(c, basis->pairs[a]);
    }
    return out;
  };
  parts.planck_derivative = [variant, inner, basis, nd, phase](cplx h, cplx z) {
    variant.require_off_pole(h, "h");
    variant.require_off_pole(z, "z");
    TensorOp out(SlotShape{basis->n, basis->n});
    for (std::size_t a = 0; a < basis->pairs.size(); ++a) {
      const std::size_t a2 = a % basis->n;
      const cplx c = phase(a2, z) * phi_dq(z, basis->omega[a] + h / nd, inner) / (nd * nd);
      out.add_scaled(c, basis->pairs[a]);
    }
    return out;
  };
  RFamily family(std::move(parts));
  certify_family(family, 1e-10);
  return family;
}

TensorOp classical_part(const RFamily& family, cplx z, const RichardsonLadder& ladder) {
  if (family.has_classical()) return family.classical_eval(z);
  const TensorOp id = TensorOp::identity(family.pair_shape());
  // The even part of R^eps - Id/eps has the same limit and no odd terms.
  auto regular = [&](double eps) {
    TensorOp r = family.eval(eps, z);
    r += family.eval(-eps, z);
    r *= 0.5;
    return r;
  };
  RichardsonLadder even = ladder;
  even.even = true;
  return richardson_checked(regular, even).value;
}

}  // namespace rmat
