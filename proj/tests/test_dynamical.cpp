#include <doctest.h>

#include <vector>

#include "rmat/dynamical.hpp"
#include "rmat/errors.hpp"
#include "support.hpp"

using namespace rmat;

namespace {

const cplx I{0.0, 1.0};

DynParams random_q(testing::Points& pts, std::size_t m, const FunctionVariant& v) {
  for (;;) {
    std::vector<cplx> q(m);
    for (auto& x : q) x = pts.next();
    bool ok = true;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        if (i != j && v.pole_distance(q[i] - q[j]) < 0.1) ok = false;
      }
    }
    if (ok) return DynParams(q);
  }
}

TensorOp block(const TensorOp& op, std::size_t r1, std::size_t r2, std::size_t c1,
               std::size_t c2) {
  const std::vector<std::size_t> pos{0, 1}, rows{r1, r2}, cols{c1, c2};
  return component(op, pos, rows, cols);
}

}  // namespace

TEST_CASE("dynamical parameters") {
  CHECK_THROWS_AS((DynParams({})), ConfigError);
  const DynParams q({1.0, 0.5, I});
  CHECK(q.diff(0, 2) == cplx(1.0, -1.0));
  CHECK(q.shifted(1, 0.25)[1] == cplx(0.75));
  CHECK(q.offset(I)[0] == cplx(1.0, 1.0));
  CHECK_THROWS_AS((DynParams({0.3, 0.3}).require_off_pole(FunctionVariant::rational())), PoleProximity);
}

TEST_CASE("Felder matrix entries") {
  const auto v = FunctionVariant::rational();
  const cplx h{0.3, 0.1}, z{0.6, -0.2};
  const auto r1 = felder_r(h, z, DynParams({0.2}), v);
  CHECK(r1.dim() == 1);
  CHECK(r1(0, 0) == kronecker_phi(h, z, v));

  const DynParams q({0.1, -0.4});
  const auto r = felder_r(h, z, q, v);
  // E_00 x E_11 and E_01 x E_10.
  CHECK(r(1, 1) == kronecker_phi(h, -q.diff(0, 1), v));
  CHECK(r(1, 2) == kronecker_phi(z, q.diff(0, 1), v));
  CHECK(r(2, 1) == kronecker_phi(z, q.diff(1, 0), v));
  CHECK(r(0, 0) == kronecker_phi(h, z, v));
  CHECK(r(0, 3) == cplx{});
  CHECK_THROWS_AS((felder_r(h, 0.0, q, v)), PoleProximity);
}

TEST_CASE("composite reductions are exact") {
  testing::Points pts(51);
  for (const auto& v : {FunctionVariant::rational(), FunctionVariant::trigonometric(),
                        FunctionVariant::elliptic(I)}) {
    const auto scalar = scalar_family(v);
    for (int k = 0; k < 5; ++k) {
      const auto q = random_q(pts, 3, v);
      const cplx h = pts.off_pole(v), z = pts.next(), w = z - pts.off_pole(v);
      const auto c = composite_r(h, z, w, q, scalar);
      const auto f = felder_r(h, z - w, q, v);
      REQUIRE(c.dim() == f.dim());
      CHECK(max_abs_diff(TensorOp(f.shape(), {c.entries().begin(), c.entries().end()}), f) <=
            1e-15);
    }
  }
  const auto yang = yang_family(3);
  const auto c = composite_r(0.3, 0.7, 0.1, DynParams({0.4}), yang);
  CHECK(c.shape() == SlotShape{1, 1, 3, 3});
  CHECK(max_abs_diff(TensorOp(yang.pair_shape(), {c.entries().begin(), c.entries().end()}),
                     yang.eval(0.3, 0.7 - 0.1)) <= 1e-15);
}

TEST_CASE("Yang composite blocks") {
  const auto f = yang_family(2);
  const DynParams q({0.35, -0.2});
  const cplx h{0.4, 0.1}, z{0.9, 0.3}, w{0.2, -0.1};
  const auto c = composite_r(h, z, w, q, f);
  const auto id = TensorOp::identity(f.pair_shape());
  const auto p = pair_permutation(2);
  CHECK(max_abs_diff(block(c, 0, 1, 1, 0), (1.0 / q.diff(0, 1)) * id + (1.0 / (z - w)) * p) <
        1e-15);
  CHECK(max_abs_diff(block(c, 0, 0, 0, 0), (1.0 / h) * id + (1.0 / (z - w)) * p) < 1e-15);
  CHECK(max_abs_diff(block(c, 0, 1, 0, 1), (1.0 / h - 1.0 / q.diff(0, 1)) * id) < 1e-15);
  CHECK(max_abs(block(c, 0, 1, 1, 1)) == 0.0);
}

TEST_CASE("composite depends on z - w and q differences only") {
  testing::Points pts(52, I, 0.25);
  const auto f = belavin_family(2, I);
  const auto q = random_q(pts, 2, f.variant());
  const cplx h = pts.off_pole(f.variant());
  const cplx z{0.31, 0.12}, w{0.05, -0.07}, c{0.13, 0.04};
  const auto base = composite_r(h, z, w, q, f);
  CHECK(max_abs_diff(base, composite_r(h, z + c, w + c, q, f)) < 1e-12);
  CHECK(max_abs_diff(base, composite_r(h, z, w, q.offset(c), f)) < 1e-12);
}

TEST_CASE("variant mismatch") {
  const auto f = yang_family(2);
  CHECK_THROWS_AS((composite_r(0.3, 0.7, 0.1, DynParams({0.4, 0.1}), f, FunctionVariant::trigonometric())), ConfigError);
}

TEST_CASE("shifted_eval") {
  testing::Points pts(53);
  const auto v = FunctionVariant::rational();
  const std::size_t m = 2;
  const SlotShape ambient{m, m, m};
  const std::vector<std::size_t> pair{0, 1};
  const DynamicalBuilder b = [&](const DynParams& q) {
    return embed(felder_r(0.37, 0.81, q, v), pair, ambient);
  };
  const DynParams q({0.15, -0.45});
  const cplx h{0.21, 0.05};

  CHECK(max_abs_diff(shifted_eval(b, q, {}, h, ambient), b(q)) == 0.0);
  const std::vector<ShiftSpec> zero{{2, 0}};
  CHECK(max_abs_diff(shifted_eval(b, q, zero, h, ambient), b(q)) < 1e-15);

  // Direct expansion: sum_k E_kk on slot 2 times b(q + amount h e_k).
  for (const int amount : {-1, 1}) {
    const std::vector<ShiftSpec> one{{2, amount}};
    TensorOp want(ambient);
    for (std::size_t k = 0; k < m; ++k) {
      want += embed(basis_unit(m, k, k), {2}, ambient) * b(q.shifted(k, static_cast<double>(amount) * h));
    }
    CHECK(max_abs_diff(shifted_eval(b, q, one, h, ambient), want) < 1e-15);
  }

  // Shifting by +1 then -1 on the same slot restores q.
  const std::vector<ShiftSpec> there_and_back{{2, 1}, {2, -1}};
  CHECK(max_abs_diff(shifted_eval(b, q, there_and_back, h, ambient), b(q)) < 1e-14);

  // A builder that is not the identity on slot 0.
  const std::vector<ShiftSpec> bad{{0, -1}};
  CHECK_THROWS_AS((shifted_eval(b, q, bad, h, ambient)), ShapeError);
  const std::vector<ShiftSpec> out_of_range{{3, 1}};
  CHECK_THROWS_AS((shifted_eval(b, q, out_of_range, h, ambient)), ShapeError);
}

TEST_CASE("classical composite r-matrix") {
  const auto yang = yang_family(2);
  const cplx z{0.45, -0.2};
  const auto c1 = composite_classical_r(z, DynParams({0.3}), yang);
  CHECK(max_abs_diff(TensorOp(yang.pair_shape(), {c1.entries().begin(), c1.entries().end()}),
                     classical_part(yang, z)) < 1e-15);

  testing::Points pts(54);
  for (const auto& v : {FunctionVariant::rational(), FunctionVariant::elliptic(I)}) {
    const auto scalar = scalar_family(v);
    const auto q = random_q(pts, 3, v);
    for (const auto form : {ClassicalForm::Expansion, ClassicalForm::Reduced}) {
      const auto c = composite_classical_r(z, q, scalar, form);
      const auto f = felder_classical_r(z, q, v, form);
      CHECK(max_abs_diff(TensorOp(f.shape(), {c.entries().begin(), c.entries().end()}), f) < 1e-6);
    }
    // Numeric limit of the even part of the Felder matrix.
    const auto limit = richardson_limit(
        [&](double eps) {
          return 0.5 * (felder_r(eps, z, q, v) + felder_r(-eps, z, q, v));
        },
        RichardsonLadder{0.02, 2.0, 3, 1e-6, true});
    CHECK(max_abs_diff(limit, felder_classical_r(z, q, v)) < 1e-6);
  }

  // Numeric limit of the Yang composite matrix.
  const DynParams q({0.2, -0.3});
  const auto limit = richardson_limit(
      [&](double eps) {
        return 0.5 * (composite_r(eps, z, 0.0, q, yang) + composite_r(-eps, z, 0.0, q, yang));
      },
      RichardsonLadder{0.02, 2.0, 3, 1e-6, true});
  CHECK(max_abs_diff(limit, composite_classical_r(z, q, yang)) < 1e-6);
  // The reduced form drops exactly the -E1(q_ij) E_ii x E_jj part.
  const auto gap = composite_classical_r(z, q, yang) -
                   composite_classical_r(z, q, yang, ClassicalForm::Reduced);
  CHECK(std::abs(block(gap, 0, 1, 0, 1)(0, 0) + 1.0 / q.diff(0, 1)) < 1e-15);
}

TEST_CASE("q-derivatives against finite differences") {
  testing::Points pts(55, I, 0.25);
  const cplx z{0.27, 0.18};
  for (const auto& f : {yang_family(2), belavin_family(2, I)}) {
    const auto& v = f.variant();
    const auto q = random_q(pts, 3, v);
    for (std::size_t k = 0; k < 3; ++k) {
      const auto fd = dq_finite_difference(
          [&](const DynParams& p) { return composite_classical_r(z, p, f); }, q, k);
      CHECK(max_abs_diff(composite_classical_r_dq(z, q, f, k), fd) < 1e-7);
      const auto ffd = dq_finite_difference(
          [&](const DynParams& p) { return felder_classical_r(z, p, v); }, q, k);
      CHECK(max_abs_diff(felder_classical_r_dq(z, q, v, k), ffd) < 1e-8);
    }
  }
}
