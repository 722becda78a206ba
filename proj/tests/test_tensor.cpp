#include <doctest.h>

#include <vector>

#include "rmat/errors.hpp"
#include "rmat/tensor.hpp"
#include "support.hpp"

using namespace rmat;

namespace {

// Entry of embed(op, positions, shape) straight from the multi-index definition.
cplx embed_entry(const TensorOp& op, const std::vector<std::size_t>& pos, const SlotShape& shape,
                 std::size_t row, std::size_t col) {
  const auto& dims = shape.dims();
  std::vector<std::size_t> r(dims.size()), c(dims.size());
  for (std::size_t s = dims.size(); s-- > 0;) {
    r[s] = row % dims[s];
    row /= dims[s];
    c[s] = col % dims[s];
    col /= dims[s];
  }
  for (std::size_t s = 0; s < dims.size(); ++s) {
    bool inside = false;
    for (auto p : pos) inside = inside || p == s;
    if (!inside && r[s] != c[s]) return 0.0;
  }
  std::size_t sr = 0, sc = 0;
  for (std::size_t k = 0; k < pos.size(); ++k) {
    sr = sr * dims[pos[k]] + r[pos[k]];
    sc = sc * dims[pos[k]] + c[pos[k]];
  }
  return op(sr, sc);
}

std::vector<cplx> apply(const TensorOp& op, const std::vector<cplx>& v) {
  std::vector<cplx> out(op.dim());
  for (std::size_t i = 0; i < op.dim(); ++i) {
    for (std::size_t j = 0; j < op.dim(); ++j) out[i] += op(i, j) * v[j];
  }
  return out;
}

}  // namespace

TEST_CASE("basis units") {
  CHECK(max_abs_diff(basis_unit(2, 0, 0) * basis_unit(2, 0, 1), basis_unit(2, 0, 1)) == 0.0);
  CHECK(max_abs(basis_unit(2, 0, 1) * basis_unit(2, 0, 1)) == 0.0);
  TensorOp sum = TensorOp::zero(SlotShape{3});
  for (std::size_t i = 0; i < 3; ++i) sum += basis_unit(3, i, i);
  CHECK(max_abs_diff(sum, TensorOp::identity(SlotShape{3})) == 0.0);
  CHECK_THROWS_AS(basis_unit(2, 2, 0), ShapeError);
}

TEST_CASE("shapes and flat indices") {
  const SlotShape s{2, 3, 4};
  CHECK(s.total() == 24);
  CHECK(s.strides() == std::vector<std::size_t>{12, 4, 1});
  const std::vector<std::size_t> pick{2, 0};
  CHECK(s.select(pick) == SlotShape{4, 2});
  CHECK(s.concat(SlotShape{5}) == SlotShape{2, 3, 4, 5});
  CHECK_THROWS_AS((SlotShape{2, 0}), ShapeError);
  CHECK_THROWS_AS((SlotShape(std::vector<std::size_t>{1024, 1024}, 1 << 20)), ShapeError);
  CHECK_THROWS_AS(TensorOp(SlotShape{2}, std::vector<cplx>(3)), ShapeError);
}

TEST_CASE("embed places the operator slots in order") {
  const auto e12 = basis_unit(2, 0, 1);
  CHECK(max_abs_diff(embed(e12, {0}, SlotShape{2, 2}), kron(e12, TensorOp::identity(SlotShape{2}))) ==
        0.0);

  testing::Points pts(31);
  const auto a = pts.random_op(SlotShape{4});
  const auto b = pts.random_op(SlotShape{2});
  const SlotShape big{2, 3, 4};
  const auto got = embed(kron(a, b), {2, 0}, big);
  const auto want = kron(kron(b, TensorOp::identity(SlotShape{3})), a);
  CHECK(max_abs_diff(got, want) == 0.0);
}

TEST_CASE("embed against the multi-index oracle") {
  testing::Points pts(32);
  const SlotShape big{2, 3, 2, 2};
  const auto op = pts.random_op(SlotShape{2, 2, 3});
  const std::vector<std::size_t> pos{3, 0, 1};
  const auto got = embed(op, pos, big);
  for (std::size_t r = 0; r < big.total(); ++r) {
    for (std::size_t c = 0; c < big.total(); ++c) {
      REQUIRE(got(r, c) == embed_entry(op, pos, big, r, c));
    }
  }
}

TEST_CASE("embed is a homomorphism and disjoint embeddings commute") {
  testing::Points pts(33);
  const SlotShape big{2, 3, 2};
  const auto a = pts.random_op(SlotShape{2, 2});
  const auto b = pts.random_op(SlotShape{2, 2});
  const auto lhs = embed(a, {2, 0}, big) * embed(b, {2, 0}, big);
  CHECK(max_abs_diff(lhs, embed(a * b, {2, 0}, big)) < 1e-14);

  const auto x = embed(pts.random_op(SlotShape{2}), {0}, big);
  const auto y = embed(pts.random_op(SlotShape{3}), {1}, big);
  CHECK(max_abs(commutator(x, y)) < 1e-14);
}

TEST_CASE("embed errors") {
  const auto e = basis_unit(2, 0, 1);
  CHECK_THROWS_AS((embed(e, {1}, SlotShape{2, 3})), ShapeError);
  CHECK_THROWS_AS((embed(kron(e, e), {0, 0}, SlotShape{2, 2})), ShapeError);
  CHECK_THROWS_AS((embed(e, {2}, SlotShape{2, 2})), ShapeError);
  CHECK_THROWS_AS((embed(kron(e, e), {0}, SlotShape{2, 2})), ShapeError);
}

TEST_CASE("permutation") {
  testing::Points pts(34);
  for (const std::size_t n : {2u, 3u}) {
    const SlotShape s{n, n};
    const auto p = permutation(0, 1, s);
    CHECK(max_abs_diff(p * p, TensorOp::identity(s)) == 0.0);
    cplx tr = 0.0;
    for (std::size_t i = 0; i < p.dim(); ++i) tr += p(i, i);
    CHECK(tr == cplx(static_cast<double>(n)));

    std::vector<cplx> u(n), v(n), uv, vu;
    for (auto& e : u) e = {pts.real(-1, 1), pts.real(-1, 1)};
    for (auto& e : v) e = {pts.real(-1, 1), pts.real(-1, 1)};
    for (auto x : u) {
      for (auto y : v) uv.push_back(x * y);
    }
    for (auto x : v) {
      for (auto y : u) vu.push_back(x * y);
    }
    const auto moved = apply(p, uv);
    for (std::size_t i = 0; i < moved.size(); ++i) CHECK(std::abs(moved[i] - vu[i]) < 1e-15);
  }
  CHECK_THROWS_AS((permutation(0, 1, SlotShape{2, 3})), ShapeError);
}

TEST_CASE("adjoint_swap relabels slots") {
  testing::Points pts(35);
  const SlotShape s{2, 3, 2};
  const auto p = permutation(0, 2, s);
  CHECK(max_abs_diff(adjoint_swap(p, 0, 2), p) == 0.0);
  const auto a = pts.random_op(s);
  CHECK(max_abs_diff(adjoint_swap(a, 0, 2), p * a * p) < 1e-14);
  CHECK_THROWS_AS(adjoint_swap(a, 0, 1), ShapeError);
}

TEST_CASE("algebra") {
  testing::Points pts(36);
  const SlotShape s{2, 2};
  const auto a = pts.random_op(s);
  const auto b = pts.random_op(s);
  CHECK(max_abs_diff(TensorOp::identity(s) * a, a) == 0.0);
  CHECK(max_abs(a - a) == 0.0);
  CHECK(max_abs_diff(commutator(a, b), a * b - b * a) == 0.0);
  CHECK(max_abs_diff(cplx{2.0, 0.0} * a, a + a) == 0.0);
  auto c = a;
  c.add_scaled(cplx{0.0, 1.0}, b);
  CHECK(max_abs_diff(c, a + cplx{0.0, 1.0} * b) == 0.0);
  CHECK_THROWS_AS(a * pts.random_op(SlotShape{4}), ShapeError);
  CHECK_THROWS_AS((a + pts.random_op(SlotShape{2, 3})), ShapeError);
}

TEST_CASE("slot diagonals and components") {
  testing::Points pts(37);
  const SlotShape s{2, 3};
  const auto a = pts.random_op(s);
  const std::vector<cplx> d{1.0, {0.0, 2.0}, -3.0};
  TensorOp diag = TensorOp::zero(SlotShape{3});
  for (std::size_t i = 0; i < 3; ++i) diag(i, i) = d[i];
  const auto dd = embed(diag, {1}, s);
  CHECK(max_abs_diff(left_slot_diagonal(a, 1, d), dd * a) < 1e-15);
  CHECK(max_abs_diff(right_slot_diagonal(a, 1, d), a * dd) < 1e-15);

  const auto x = pts.random_op(SlotShape{3});
  const auto op = kron(basis_unit(2, 1, 0), x);
  const std::vector<std::size_t> pos{0}, rows{1}, cols{0}, other{0};
  CHECK(max_abs_diff(component(op, pos, rows, cols), x) == 0.0);
  CHECK(max_abs(component(op, pos, other, cols)) == 0.0);
}
