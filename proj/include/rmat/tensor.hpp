#pragma once

// Dense complex operators on an ordered list of tensor slots.
//
// Multi-index convention: the leftmost slot is the most significant digit, so
// for dims {d0, d1, d2} the flat index of (i0, i1, i2) is (i0 * d1 + i1) * d2 + i2.
// A fused Mat(NM) slot factors as (M-part, N-part) with joint index i * N + a.
// All slot positions and matrix indices are 0-based.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace rmat {

using cplx = std::complex<double>;

// Upper bound on the bytes of a single dense operator.
inline constexpr std::size_t kDefaultMemoryBudget = std::size_t{1} << 30;

class SlotShape {
 public:
  SlotShape() = default;
  explicit SlotShape(std::vector<std::size_t> dims,
                     std::size_t memory_budget = kDefaultMemoryBudget);
  SlotShape(std::initializer_list<std::size_t> dims);

  std::size_t slots() const noexcept { return dims_.size(); }
  std::size_t dim(std::size_t slot) const { return dims_.at(slot); }
  const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  std::size_t total() const noexcept { return total_; }
  // Flat-index stride of each slot.
  std::vector<std::size_t> strides() const;

  // Shape formed by the listed slots, in the listed order.
  SlotShape select(std::span<const std::size_t> positions) const;
  SlotShape concat(const SlotShape& other) const;

  friend bool operator==(const SlotShape&, const SlotShape&) = default;

 private:
  std::vector<std::size_t> dims_;
  std::size_t total_ = 1;
};

class TensorOp {
 public:
  TensorOp() = default;
  explicit TensorOp(SlotShape shape);  // zero operator
  TensorOp(SlotShape shape, std::vector<cplx> entries);

  static TensorOp zero(SlotShape shape) { return TensorOp(std::move(shape)); }
  static TensorOp identity(SlotShape shape);

  const SlotShape& shape() const noexcept { return shape_; }
  std::size_t dim() const noexcept { return shape_.total(); }

  cplx operator()(std::size_t row, std::size_t col) const { return data_[row * dim() + col]; }
  cplx& operator()(std::size_t row, std::size_t col) { return data_[row * dim() + col]; }

  std::span<const cplx> entries() const noexcept { return data_; }
  std::span<cplx> entries() noexcept { return data_; }

  TensorOp& operator+=(const TensorOp& other);
  TensorOp& operator-=(const TensorOp& other);
  TensorOp& operator*=(cplx factor);
  // Adds factor * other without a temporary.
  TensorOp& add_scaled(cplx factor, const TensorOp& other);

 private:
  SlotShape shape_;
  std::vector<cplx> data_;
};

// e_ij on a single slot of dimension dim.
TensorOp basis_unit(std::size_t dim, std::size_t i, std::size_t j);

// Kronecker product; the slots of b follow the slots of a.
TensorOp kron(const TensorOp& a, const TensorOp& b);

// Extends op by identities: its k-th slot is placed at positions[k] of shape.
TensorOp embed(const TensorOp& op, std::span<const std::size_t> positions, const SlotShape& shape);
TensorOp embed(const TensorOp& op, std::initializer_list<std::size_t> positions,
               const SlotShape& shape);

// The operator exchanging slots a and b of shape.
TensorOp permutation(std::size_t a, std::size_t b, const SlotShape& shape);

TensorOp compose(const TensorOp& a, const TensorOp& b);
TensorOp add(const TensorOp& a, const TensorOp& b);
TensorOp subtract(const TensorOp& a, const TensorOp& b);
TensorOp scale(const TensorOp& a, cplx factor);
TensorOp commutator(const TensorOp& a, const TensorOp& b);

// P_ab * op * P_ab, computed by relabelling indices.
TensorOp adjoint_swap(const TensorOp& op, std::size_t a, std::size_t b);

// Entrywise supremum norm.
double max_abs(const TensorOp& op);
double max_abs_diff(const TensorOp& a, const TensorOp& b);

// diag(d) on `slot` times op (left) or op times diag(d) on `slot` (right).
TensorOp left_slot_diagonal(const TensorOp& op, std::size_t slot, std::span<const cplx> diagonal);
TensorOp right_slot_diagonal(const TensorOp& op, std::size_t slot, std::span<const cplx> diagonal);

// Coefficient of E_{row_idx[k], col_idx[k]} on each of the listed slots: an
// operator on the remaining slots (in order).
TensorOp component(const TensorOp& op, std::span<const std::size_t> positions,
                   std::span<const std::size_t> row_idx, std::span<const std::size_t> col_idx);

inline TensorOp operator*(const TensorOp& a, const TensorOp& b) { return compose(a, b); }
inline TensorOp operator+(const TensorOp& a, const TensorOp& b) { return add(a, b); }
inline TensorOp operator-(const TensorOp& a, const TensorOp& b) { return subtract(a, b); }
inline TensorOp operator*(cplx f, const TensorOp& a) { return scale(a, f); }

}  // namespace rmat
