#include "rmat/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rmat/errors.hpp"

namespace rmat {

namespace {

struct KindName {
  CheckKind kind;
  const char* name;
};

constexpr KindName kKindNames[] = {
    {CheckKind::AYBE, "AYBE"},
    {CheckKind::SKEW, "SKEW"},
    {CheckKind::UNITARITY, "UNITARITY"},
    {CheckKind::QYBE, "QYBE"},
    {CheckKind::FAY, "FAY"},
    {CheckKind::CUBIC, "CUBIC"},
    {CheckKind::TWO_PLANCK, "TWO_PLANCK"},
    {CheckKind::DYBE_FELDER, "DYBE_FELDER"},
    {CheckKind::DYBE_COMPOSITE, "DYBE_COMPOSITE"},
    {CheckKind::COMPONENT_IJK, "COMPONENT_IJK"},
    {CheckKind::SCALAR_UNITARITY, "SCALAR_UNITARITY"},
    {CheckKind::CYBE, "CYBE"},
    {CheckKind::CDYBE_FELDER, "CDYBE_FELDER"},
    {CheckKind::CDYBE_COMPOSITE, "CDYBE_COMPOSITE"},
    {CheckKind::CLASSICAL_LIMIT, "CLASSICAL_LIMIT"},
};

constexpr std::array<std::array<std::size_t, 3>, 6> kOrderings{{
    {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0},
}};

CheckReport make_report(CheckKind kind, const Sample& s, double residual, double tolerance) {
  CheckReport r;
  r.kind = kind;
  r.sample = s;
  r.residual = residual;
  r.tolerance = tolerance;
  // NaN residuals fail.
  r.passed = residual <= tolerance;
  return r;
}

void require_kind(bool ok, CheckKind kind, const char* checker) {
  if (!ok) throw ConfigError(std::string(checker) + " cannot evaluate " + to_string(kind));
}

// Slot layout of the three-fold dynamical spaces.
struct TripleLayout {
  SlotShape ambient;
  std::array<std::vector<std::size_t>, 3> pair;  // 12, 13, 23
};

TripleLayout felder_layout(std::size_t m) {
  return {SlotShape{m, m, m}, {{{0, 1}, {0, 2}, {1, 2}}}};
}

TripleLayout composite_layout(std::size_t m, std::size_t n) {
  return {SlotShape{m, m, m, n, n, n}, {{{0, 1, 3, 4}, {0, 2, 3, 5}, {1, 2, 4, 5}}}};
}

// max that keeps NaN.
double worse(double a, double b) {
  if (std::isnan(a) || std::isnan(b)) return std::nan("");
  return std::max(a, b);
}

DynParams sample_q(const Sample& s, std::size_t min_m, CheckKind kind) {
  if (s.q.size() < min_m) {
    throw ConfigError(to_string(kind) + " needs M >= " + std::to_string(min_m));
  }
  return DynParams(s.q);
}

}  // namespace

std::string to_string(CheckKind kind) {
  for (const auto& kn : kKindNames) {
    if (kn.kind == kind) return kn.name;
  }
  return "UNKNOWN";
}

CheckKind check_kind_from_string(const std::string& name) {
  std::string upper = name;
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  for (const auto& kn : kKindNames) {
    if (upper == kn.name) return kn.kind;
  }
  throw ConfigError("unknown check kind '" + name + "'");
}

const std::vector<CheckKind>& all_check_kinds() {
  static const std::vector<CheckKind> kinds = [] {
    std::vector<CheckKind> out;
    for (const auto& kn : kKindNames) out.push_back(kn.kind);
    return out;
  }();
  return kinds;
}

bool is_dynamical(CheckKind kind) {
  switch (kind) {
    case CheckKind::DYBE_FELDER:
    case CheckKind::DYBE_COMPOSITE:
    case CheckKind::COMPONENT_IJK:
    case CheckKind::CDYBE_FELDER:
    case CheckKind::CDYBE_COMPOSITE:
    case CheckKind::CLASSICAL_LIMIT:
      return true;
    default:
      return false;
  }
}

double default_tolerance(CheckKind kind, const FunctionVariant& variant) {
  const bool elliptic = variant.kind() == VariantKind::Elliptic;
  switch (kind) {
    case CheckKind::FAY:
    case CheckKind::SCALAR_UNITARITY:
    case CheckKind::COMPONENT_IJK:
      return 1e-11;
    case CheckKind::AYBE:
    case CheckKind::SKEW:
    case CheckKind::UNITARITY:
    case CheckKind::QYBE:
    case CheckKind::CUBIC:
    case CheckKind::TWO_PLANCK:
    case CheckKind::DYBE_FELDER:
      return elliptic ? 1e-10 : 1e-11;
    case CheckKind::DYBE_COMPOSITE:
      return elliptic ? 1e-9 : 1e-10;
    case CheckKind::CYBE:
    case CheckKind::CDYBE_FELDER:
    case CheckKind::CDYBE_COMPOSITE:
      return 1e-9;
    case CheckKind::CLASSICAL_LIMIT:
      return 1e-6;
  }
  return 1e-10;
}

TensorOp nondynamical_residual(CheckKind kind, const RFamily& family, cplx h, cplx eta,
                               const std::array<cplx, 3>& z, std::size_t a, std::size_t b,
                               std::size_t c) {
  const std::size_t n = family.n();
  const FunctionVariant& v = family.variant();
  switch (kind) {
    case CheckKind::SKEW: {
      const cplx x = z[a] - z[b];
      const TensorOp lhs = family.eval(h, x);
      const TensorOp rhs = scale(adjoint_swap(family.eval(-h, -x), 0, 1), -1.0);
      return lhs - rhs;
    }
    case CheckKind::UNITARITY: {
      const cplx x = z[a] - z[b];
      TensorOp res = family.eval(h, x) * adjoint_swap(family.eval(h, -x), 0, 1);
      res.add_scaled(-(wp(h, v) - wp(x, v)), TensorOp::identity(family.pair_shape()));
      return res;
    }
    default:
      break;
  }

  const SlotShape amb{n, n, n};
  auto R = [&](cplx planck, std::size_t p, std::size_t r) {
    return embed(family.eval(planck, z[p] - z[r]), {p, r}, amb);
  };
  switch (kind) {
    case CheckKind::AYBE: {
      TensorOp res = R(h, a, b) * R(eta, b, c);
      res -= R(eta - h, b, c) * R(h, a, c);
      res -= R(eta, a, c) * R(h - eta, a, b);
      return res;
    }
    case CheckKind::QYBE: {
      TensorOp res = R(h, a, b) * (R(h, a, c) * R(h, b, c));
      res -= R(h, b, c) * (R(h, a, c) * R(h, a, b));
      return res;
    }
    case CheckKind::CUBIC: {
      TensorOp res = R(h, a, b) * (R(eta, a, c) * R(h, b, c));
      res -= R(eta, b, c) * (R(h, a, c) * R(eta, a, b));
      res.add_scaled(-(wp(h, v) - wp(eta, v)), R(h + eta, a, c));
      return res;
    }
    case CheckKind::TWO_PLANCK: {
      TensorOp res = R(eta, a, b) * (R(h, a, c) * R(eta, b, c));
      res += R(h, a, b) * (R(eta, a, c) * R(h, b, c));
      res -= R(eta, b, c) * (R(h, a, c) * R(eta, a, b));
      res -= R(h, b, c) * (R(eta, a, c) * R(h, a, b));
      return res;
    }
    default:
      require_kind(false, kind, "nondynamical_residual");
  }
  return {};
}

CheckReport check_nondynamical(CheckKind kind, const RFamily& family, const Sample& s,
                               std::optional<double> tolerance) {
  const double tol = tolerance.value_or(default_tolerance(kind, family.variant()));
  double worst = 0.0;
  if (kind == CheckKind::SKEW || kind == CheckKind::UNITARITY) {
    worst = max_abs(nondynamical_residual(kind, family, s.hbar, s.eta, s.z, 0, 1, 2));
  } else {
    for (const auto& o : kOrderings) {
      worst = worse(worst, max_abs(nondynamical_residual(kind, family, s.hbar, s.eta, s.z, o[0],
                                                         o[1], o[2])));
    }
  }
  return make_report(kind, s, worst, tol);
}

CheckReport check_fay(const FunctionVariant& v, const Sample& s, std::optional<double> tolerance) {
  const double tol = tolerance.value_or(default_tolerance(CheckKind::FAY, v));
  double worst = 0.0;
  for (const auto& o : kOrderings) {
    const cplx x = s.z[o[0]] - s.z[o[1]];
    const cplx y = s.z[o[1]] - s.z[o[2]];
    const cplx h = s.hbar;
    const cplx eta = s.eta;
    const cplx res = kronecker_phi(h, x, v) * kronecker_phi(eta, y, v) -
                     kronecker_phi(h - eta, x, v) * kronecker_phi(eta, x + y, v) -
                     kronecker_phi(eta - h, y, v) * kronecker_phi(h, x + y, v);
    worst = worse(worst, std::abs(res));
  }
  return make_report(CheckKind::FAY, s, worst, tol);
}

CheckReport check_scalar_unitarity(const FunctionVariant& v, const Sample& s,
                                   std::optional<double> tolerance) {
  const double tol = tolerance.value_or(default_tolerance(CheckKind::SCALAR_UNITARITY, v));
  double worst = 0.0;
  for (const cplx h : {s.hbar, s.eta}) {
    const cplx x = s.z[0] - s.z[1];
    const cplx res = kronecker_phi(h, x, v) * kronecker_phi(h, -x, v) - (wp(h, v) - wp(x, v));
    worst = worse(worst, std::abs(res));
  }
  return make_report(CheckKind::SCALAR_UNITARITY, s, worst, tol);
}

TensorOp dybe_residual(CheckKind kind, const RFamily& family, const Sample& s) {
  require_kind(kind == CheckKind::DYBE_FELDER || kind == CheckKind::DYBE_COMPOSITE, kind,
               "dybe_residual");
  const DynParams q = sample_q(s, 1, kind);
  const std::size_t m = q.size();
  const cplx h = s.hbar;
  const bool felder = kind == CheckKind::DYBE_FELDER;
  const TripleLayout layout = felder ? felder_layout(m) : composite_layout(m, family.n());
  constexpr std::array<std::array<std::size_t, 2>, 3> pairs{{{0, 1}, {0, 2}, {1, 2}}};

  auto builder = [&](std::size_t p) -> DynamicalBuilder {
    const std::size_t a = pairs[p][0];
    const std::size_t b = pairs[p][1];
    return [&, p, a, b](const DynParams& qq) {
      const TensorOp r = felder ? felder_r(h, s.z[a] - s.z[b], qq, family.variant())
                                : composite_r(h, s.z[a], s.z[b], qq, family);
      return embed(r, layout.pair[p], layout.ambient);
    };
  };
  auto shifted = [&](std::size_t p, std::size_t slot) {
    const ShiftSpec spec{slot, -1};
    return shifted_eval(builder(p), q, std::span<const ShiftSpec>(&spec, 1), h, layout.ambient);
  };

  const TensorOp r12 = builder(0)(q);
  const TensorOp r13 = builder(1)(q);
  const TensorOp r23 = builder(2)(q);
  TensorOp res = r12 * (shifted(1, 1) * r23);
  res -= shifted(2, 0) * (r13 * shifted(0, 2));
  return res;
}

CheckReport check_dybe(CheckKind kind, const RFamily& family, const Sample& s,
                       std::optional<double> tolerance) {
  const double tol = tolerance.value_or(default_tolerance(kind, family.variant()));
  return make_report(kind, s, max_abs(dybe_residual(kind, family, s)), tol);
}

TensorOp component_residual(const RFamily& family, std::size_t i, std::size_t j, std::size_t k,
                            const Sample& s, ComponentRoute route) {
  const DynParams q = sample_q(s, 3, CheckKind::COMPONENT_IJK);
  const std::size_t m = q.size();
  if (i >= m || j >= m || k >= m) throw ConfigError("component indices must be below M");
  if (i == j || j == k || i == k) throw ConfigError("component indices must be distinct");
  const FunctionVariant& v = family.variant();
  const std::size_t n = family.n();
  const SlotShape amb{n, n, n};
  const cplx h = s.hbar;
  const cplx qik = q.diff(i, k);
  const cplx qkj = q.diff(k, j);
  const cplx qij = q.diff(i, j);
  auto R = [&](cplx planck, std::size_t a, std::size_t b) {
    return embed(family.eval(planck, s.z[a] - s.z[b]), {a, b}, amb);
  };
  const TensorOp r13 = R(qij, 0, 2);

  TensorOp res = R(qik, 0, 1) * (R(qkj, 0, 2) * R(qik, 1, 2));
  res -= R(qkj, 1, 2) * (R(qik, 0, 2) * R(qkj, 0, 1));
  if (route == ComponentRoute::Direct) {
    const cplx scalar = kronecker_phi(h, qik, v) * kronecker_phi(h, -qik, v) -
                        kronecker_phi(h, qkj, v) * kronecker_phi(h, -qkj, v);
    res.add_scaled(scalar, r13);
  } else {
    // Cubic difference identity at Planck constants q_ik and q_kj ...
    res.add_scaled(-(wp(qik, v) - wp(qkj, v)), r13);
    // ... plus the scalar unitarity defects of both phi products.
    const cplx defect_ik = kronecker_phi(h, qik, v) * kronecker_phi(h, -qik, v) - (wp(h, v) - wp(qik, v));
    const cplx defect_kj = kronecker_phi(h, qkj, v) * kronecker_phi(h, -qkj, v) - (wp(h, v) - wp(qkj, v));
    res.add_scaled(defect_ik - defect_kj, r13);
  }
  return res;
}

CheckReport check_component_identity(const RFamily& family, std::size_t i, std::size_t j,
                                     std::size_t k, const Sample& s,
                                     std::optional<double> tolerance, ComponentRoute route) {
  const double tol = tolerance.value_or(default_tolerance(CheckKind::COMPONENT_IJK, family.variant()));
  CheckReport r = make_report(CheckKind::COMPONENT_IJK, s,
                              max_abs(component_residual(family, i, j, k, s, route)), tol);
  r.indices = std::array<std::size_t, 3>{i, j, k};
  return r;
}

TensorOp classical_residual(CheckKind kind, const RFamily& family, const Sample& s,
                            const ClassicalOptions& options) {
  if (kind == CheckKind::CYBE) {
    const std::size_t n = family.n();
    const SlotShape amb{n, n, n};
    auto r = [&](std::size_t a, std::size_t b) {
      return embed(classical_part(family, s.z[a] - s.z[b]), {a, b}, amb);
    };
    const TensorOp r12 = r(0, 1);
    const TensorOp r13 = r(0, 2);
    const TensorOp r23 = r(1, 2);
    TensorOp res = commutator(r12, r13);
    res += commutator(r12, r23);
    res += commutator(r13, r23);
    return res;
  }
  require_kind(kind == CheckKind::CDYBE_FELDER || kind == CheckKind::CDYBE_COMPOSITE, kind,
               "classical_residual");
  const DynParams q = sample_q(s, 1, kind);
  const std::size_t m = q.size();
  const bool felder = kind == CheckKind::CDYBE_FELDER;
  const TripleLayout layout = felder ? felder_layout(m) : composite_layout(m, family.n());
  const FunctionVariant& v = family.variant();

  auto r_at = [&](cplx z, const DynParams& qq) {
    return felder ? felder_classical_r(z, qq, v, options.form)
                  : composite_classical_r(z, qq, family, options.form);
  };
  auto dr_at = [&](cplx z, const DynParams& qq, std::size_t k) {
    TensorOp d = felder ? felder_classical_r_dq(z, qq, v, k, options.form)
                        : composite_classical_r_dq(z, qq, family, k, options.form);
    if (options.fd_check) {
      const TensorOp fd = dq_finite_difference([&](const DynParams& p) { return r_at(z, p); }, qq, k);
      const double gap = max_abs_diff(d, fd);
      if (!(gap <= options.fd_agreement)) {
        std::ostringstream os;
        os << "analytic and finite-difference q-derivatives diverge by " << gap << " (limit "
           << options.fd_agreement << ")";
        throw NumericalError(os.str());
      }
    }
    return d;
  };

  const std::array<cplx, 3> zp{s.z[0] - s.z[1], s.z[0] - s.z[2], s.z[1] - s.z[2]};
  std::array<TensorOp, 3> r;
  for (std::size_t p = 0; p < 3; ++p) r[p] = embed(r_at(zp[p], q), layout.pair[p], layout.ambient);

  TensorOp res = commutator(r[0], r[1]);
  res += commutator(r[0], r[2]);
  res += commutator(r[1], r[2]);

  // Pair p is acted on by the dynamical slot it does not occupy.
  constexpr std::array<std::size_t, 3> free_slot{2, 1, 0};
  constexpr std::array<double, 3> sign{1.0, -1.0, 1.0};
  std::vector<cplx> projector(m);
  for (std::size_t p = 0; p < 3; ++p) {
    for (std::size_t k = 0; k < m; ++k) {
      std::fill(projector.begin(), projector.end(), cplx{});
      projector[k] = 1.0;
      const TensorOp d = embed(dr_at(zp[p], q, k), layout.pair[p], layout.ambient);
      res.add_scaled(sign[p], left_slot_diagonal(d, free_slot[p], projector));
    }
  }
  return res;
}

CheckReport check_classical(CheckKind kind, const RFamily& family, const Sample& s,
                            std::optional<double> tolerance, const ClassicalOptions& options) {
  const double tol = tolerance.value_or(default_tolerance(kind, family.variant()));
  return make_report(kind, s, max_abs(classical_residual(kind, family, s, options)), tol);
}

double classical_consistency(const RFamily& family, const Sample& s,
                             const RichardsonLadder& ladder) {
  const DynParams q = sample_q(s, 1, CheckKind::CLASSICAL_LIMIT);
  const std::size_t m = q.size();
  const std::size_t n = family.n();
  // (a) h^0 coefficient of the composite matrix.
  // The even part in eps removes the Id/eps pole and all odd terms.
  RichardsonLadder even = ladder;
  even.even = true;
  const RichardsonEstimate limit = richardson_checked(
      [&](double eps) {
        TensorOp r = composite_r(eps, s.z[0], s.z[1], q, family);
        r += composite_r(-eps, s.z[0], s.z[1], q, family);
        r *= 0.5;
        return r;
      },
      even);
  const TensorOp classical = composite_classical_r(s.z[0] - s.z[1], q, family);
  const double gap_limit = max_abs_diff(limit.value, classical);

  // (b) first-order term of the shift on slot 3'.
  const TripleLayout layout = composite_layout(m, n);
  const cplx z12 = s.z[0] - s.z[1];
  const DynamicalBuilder r12 = [&](const DynParams& qq) {
    return embed(composite_classical_r(z12, qq, family), layout.pair[0], layout.ambient);
  };
  // Central difference of the shift; the q-arguments sit O(0.1) from poles,
  // so this ladder starts a decade below the one for the Planck limit.
  const ShiftSpec up{2, 1};
  const ShiftSpec down{2, -1};
  RichardsonLadder fine = even;
  fine.base = ladder.base / 10.0;
  const RichardsonEstimate slope = richardson_checked(
      [&](double eps) {
        TensorOp d = shifted_eval(r12, q, std::span<const ShiftSpec>(&up, 1), eps, layout.ambient);
        d -= shifted_eval(r12, q, std::span<const ShiftSpec>(&down, 1), eps, layout.ambient);
        d *= 1.0 / (2.0 * eps);
        return d;
      },
      fine);
  TensorOp expected(layout.ambient);
  std::vector<cplx> projector(m);
  for (std::size_t k = 0; k < m; ++k) {
    std::fill(projector.begin(), projector.end(), cplx{});
    projector[k] = 1.0;
    const TensorOp d = embed(composite_classical_r_dq(z12, q, family, k), layout.pair[0], layout.ambient);
    expected += left_slot_diagonal(d, 2, projector);
  }
  const double gap_shift = max_abs_diff(slope.value, expected);
  return worse(gap_limit, gap_shift);
}

CheckReport check_classical_limit(const RFamily& family, const Sample& s,
                                  std::optional<double> tolerance) {
  const double tol = tolerance.value_or(default_tolerance(CheckKind::CLASSICAL_LIMIT, family.variant()));
  return make_report(CheckKind::CLASSICAL_LIMIT, s, classical_consistency(family, s), tol);
}

}  // namespace rmat
