#include "rmat/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "rmat/errors.hpp"
#include "rmat/kernels.hpp"

namespace rmat {

namespace {

std::string dims_string(const SlotShape& s) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < s.slots(); ++i) os << (i ? "," : "") << s.dim(i);
  os << "]";
  return os.str();
}

void require_same_shape(const TensorOp& a, const TensorOp& b, const char* op) {
  if (!(a.shape() == b.shape())) {
    throw ShapeError(std::string(op) + ": shape mismatch " + dims_string(a.shape()) + " vs " +
                     dims_string(b.shape()));
  }
}

std::size_t digit(std::size_t flat, std::size_t stride, std::size_t dim) {
  return (flat / stride) % dim;
}

// Flat index with the digits of slots a and b exchanged (dims equal).
std::size_t swap_digits(std::size_t flat, std::size_t stride_a, std::size_t stride_b,
                        std::size_t dim) {
  const std::size_t da = digit(flat, stride_a, dim);
  const std::size_t db = digit(flat, stride_b, dim);
  return flat - da * stride_a - db * stride_b + db * stride_a + da * stride_b;
}

// Offsets of all multi-indices over `slots` (leftmost most significant).
std::vector<std::size_t> offsets_over(const SlotShape& shape, std::span<const std::size_t> slots) {
  const auto strides = shape.strides();
  std::vector<std::size_t> out{0};
  for (const std::size_t s : slots) {
    std::vector<std::size_t> next;
    next.reserve(out.size() * shape.dim(s));
    for (const std::size_t base : out) {
      for (std::size_t d = 0; d < shape.dim(s); ++d) next.push_back(base + d * strides[s]);
    }
    out = std::move(next);
  }
  return out;
}

std::vector<std::size_t> complement(std::size_t slots, std::span<const std::size_t> positions) {
  std::vector<std::size_t> rest;
  for (std::size_t s = 0; s < slots; ++s) {
    if (std::find(positions.begin(), positions.end(), s) == positions.end()) rest.push_back(s);
  }
  return rest;
}

void require_positions(std::span<const std::size_t> positions, std::size_t slots, const char* op) {
  for (std::size_t k = 0; k < positions.size(); ++k) {
    if (positions[k] >= slots) {
      throw ShapeError(std::string(op) + ": slot position " + std::to_string(positions[k]) +
                       " out of range");
    }
    for (std::size_t l = 0; l < k; ++l) {
      if (positions[l] == positions[k]) {
        throw ShapeError(std::string(op) + ": repeated slot position " +
                         std::to_string(positions[k]));
      }
    }
  }
}

}  // namespace

SlotShape::SlotShape(std::vector<std::size_t> dims, std::size_t memory_budget)
    : dims_(std::move(dims)) {
  for (const std::size_t d : dims_) {
    if (d == 0) throw ShapeError("slot dimensions must be positive");
    total_ *= d;
  }
  const double bytes = static_cast<double>(total_) * static_cast<double>(total_) * sizeof(cplx);
  if (bytes > static_cast<double>(memory_budget)) {
    throw ShapeError("operator on " + dims_string(*this) + " exceeds the memory budget");
  }
}

SlotShape::SlotShape(std::initializer_list<std::size_t> dims)
    : SlotShape(std::vector<std::size_t>(dims)) {}

std::vector<std::size_t> SlotShape::strides() const {
  std::vector<std::size_t> s(dims_.size(), 1);
  for (std::size_t i = dims_.size(); i-- > 1;) s[i - 1] = s[i] * dims_[i];
  return s;
}

SlotShape SlotShape::select(std::span<const std::size_t> positions) const {
  std::vector<std::size_t> d;
  d.reserve(positions.size());
  for (const std::size_t p : positions) d.push_back(dim(p));
  return SlotShape(std::move(d));
}

SlotShape SlotShape::concat(const SlotShape& other) const {
  std::vector<std::size_t> d = dims_;
  d.insert(d.end(), other.dims_.begin(), other.dims_.end());
  return SlotShape(std::move(d));
}

TensorOp::TensorOp(SlotShape shape)
    : shape_(std::move(shape)), data_(shape_.total() * shape_.total()) {}

TensorOp::TensorOp(SlotShape shape, std::vector<cplx> entries)
    : shape_(std::move(shape)), data_(std::move(entries)) {
  if (data_.size() != shape_.total() * shape_.total()) {
    throw ShapeError("entry count does not match shape " + dims_string(shape_));
  }
}

TensorOp TensorOp::identity(SlotShape shape) {
  TensorOp out(std::move(shape));
  for (std::size_t i = 0; i < out.dim(); ++i) out(i, i) = 1.0;
  return out;
}

TensorOp& TensorOp::operator+=(const TensorOp& other) { return add_scaled(1.0, other); }

TensorOp& TensorOp::operator-=(const TensorOp& other) { return add_scaled(-1.0, other); }

TensorOp& TensorOp::operator*=(cplx factor) {
  for (auto& x : data_) x *= factor;
  return *this;
}

TensorOp& TensorOp::add_scaled(cplx factor, const TensorOp& other) {
  require_same_shape(*this, other, "add");
  if (factor == cplx{1.0, 0.0}) {
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  } else if (factor == cplx{-1.0, 0.0}) {
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  } else {
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += factor * other.data_[i];
  }
  return *this;
}

TensorOp basis_unit(std::size_t dim, std::size_t i, std::size_t j) {
  if (i >= dim || j >= dim) {
    throw ShapeError("basis_unit: index (" + std::to_string(i) + "," + std::to_string(j) +
                     ") out of range for dimension " + std::to_string(dim));
  }
  TensorOp out(SlotShape{dim});
  out(i, j) = 1.0;
  return out;
}

TensorOp kron(const TensorOp& a, const TensorOp& b) {
  TensorOp out(a.shape().concat(b.shape()));
  const std::size_t na = a.dim();
  const std::size_t nb = b.dim();
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < na; ++j) {
      const cplx aij = a(i, j);
      if (aij == cplx{}) continue;
      for (std::size_t k = 0; k < nb; ++k) {
        for (std::size_t l = 0; l < nb; ++l) out(i * nb + k, j * nb + l) = aij * b(k, l);
      }
    }
  }
  return out;
}

TensorOp embed(const TensorOp& op, std::span<const std::size_t> positions, const SlotShape& shape) {
  require_positions(positions, shape.slots(), "embed");
  if (positions.size() != op.shape().slots()) {
    throw ShapeError("embed: operator has " + std::to_string(op.shape().slots()) +
                     " slots but " + std::to_string(positions.size()) + " positions given");
  }
  for (std::size_t k = 0; k < positions.size(); ++k) {
    if (op.shape().dim(k) != shape.dim(positions[k])) {
      throw ShapeError("embed: slot " + std::to_string(k) + " of operator " +
                       dims_string(op.shape()) + " does not match target " + dims_string(shape));
    }
  }
  const auto in_offsets = offsets_over(shape, positions);
  const auto rest = complement(shape.slots(), positions);
  const auto rest_offsets = offsets_over(shape, rest);
  TensorOp out(shape);
  kernels::embed_parallel(op.entries(), op.dim(), in_offsets, rest_offsets, out.entries(),
                          out.dim());
  return out;
}

TensorOp embed(const TensorOp& op, std::initializer_list<std::size_t> positions,
               const SlotShape& shape) {
  return embed(op, std::span<const std::size_t>(positions.begin(), positions.size()), shape);
}

TensorOp permutation(std::size_t a, std::size_t b, const SlotShape& shape) {
  if (a >= shape.slots() || b >= shape.slots()) throw ShapeError("permutation: slot out of range");
  if (shape.dim(a) != shape.dim(b)) {
    throw ShapeError("permutation: slots " + std::to_string(a) + " and " + std::to_string(b) +
                     " have different dimensions in " + dims_string(shape));
  }
  const auto strides = shape.strides();
  TensorOp out(shape);
  for (std::size_t idx = 0; idx < out.dim(); ++idx) {
    out(swap_digits(idx, strides[a], strides[b], shape.dim(a)), idx) = 1.0;
  }
  return out;
}

TensorOp compose(const TensorOp& a, const TensorOp& b) {
  require_same_shape(a, b, "compose");
  TensorOp out(a.shape());
  kernels::gemm_parallel(a.entries(), b.entries(), out.entries(), a.dim());
  return out;
}

TensorOp add(const TensorOp& a, const TensorOp& b) {
  TensorOp out = a;
  out += b;
  return out;
}

TensorOp subtract(const TensorOp& a, const TensorOp& b) {
  TensorOp out = a;
  out -= b;
  return out;
}

TensorOp scale(const TensorOp& a, cplx factor) {
  TensorOp out = a;
  out *= factor;
  return out;
}

TensorOp commutator(const TensorOp& a, const TensorOp& b) {
  return subtract(compose(a, b), compose(b, a));
}

TensorOp adjoint_swap(const TensorOp& op, std::size_t a, std::size_t b) {
  const SlotShape& shape = op.shape();
  if (a >= shape.slots() || b >= shape.slots()) throw ShapeError("adjoint_swap: slot out of range");
  if (shape.dim(a) != shape.dim(b)) throw ShapeError("adjoint_swap: slot dimensions differ");
  const auto strides = shape.strides();
  const std::size_t n = op.dim();
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = swap_digits(i, strides[a], strides[b], shape.dim(a));
  TensorOp out(shape);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) out(r, c) = op(perm[r], perm[c]);
  }
  return out;
}

double max_abs(const TensorOp& op) {
  double m = 0.0;
  for (const cplx& x : op.entries()) {
    const double v = std::abs(x);
    if (!(v <= m)) m = v;  // propagates NaN
  }
  return m;
}

double max_abs_diff(const TensorOp& a, const TensorOp& b) {
  require_same_shape(a, b, "max_abs_diff");
  double m = 0.0;
  const auto ea = a.entries();
  const auto eb = b.entries();
  for (std::size_t i = 0; i < ea.size(); ++i) {
    const double v = std::abs(ea[i] - eb[i]);
    if (!(v <= m)) m = v;
  }
  return m;
}

TensorOp left_slot_diagonal(const TensorOp& op, std::size_t slot, std::span<const cplx> diagonal) {
  const SlotShape& shape = op.shape();
  if (slot >= shape.slots() || diagonal.size() != shape.dim(slot)) {
    throw ShapeError("left_slot_diagonal: diagonal does not match slot");
  }
  const std::size_t stride = shape.strides()[slot];
  TensorOp out = op;
  const std::size_t n = op.dim();
  for (std::size_t r = 0; r < n; ++r) {
    const cplx d = diagonal[digit(r, stride, shape.dim(slot))];
    for (std::size_t c = 0; c < n; ++c) out(r, c) *= d;
  }
  return out;
}

TensorOp right_slot_diagonal(const TensorOp& op, std::size_t slot, std::span<const cplx> diagonal) {
  const SlotShape& shape = op.shape();
  if (slot >= shape.slots() || diagonal.size() != shape.dim(slot)) {
    throw ShapeError("right_slot_diagonal: diagonal does not match slot");
  }
  const std::size_t stride = shape.strides()[slot];
  const std::size_t n = op.dim();
  std::vector<cplx> col_factor(n);
  for (std::size_t c = 0; c < n; ++c) col_factor[c] = diagonal[digit(c, stride, shape.dim(slot))];
  TensorOp out = op;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) out(r, c) *= col_factor[c];
  }
  return out;
}

TensorOp component(const TensorOp& op, std::span<const std::size_t> positions,
                   std::span<const std::size_t> row_idx, std::span<const std::size_t> col_idx) {
  const SlotShape& shape = op.shape();
  require_positions(positions, shape.slots(), "component");
  if (row_idx.size() != positions.size() || col_idx.size() != positions.size()) {
    throw ShapeError("component: index lists do not match positions");
  }
  const auto strides = shape.strides();
  std::size_t row_base = 0;
  std::size_t col_base = 0;
  for (std::size_t k = 0; k < positions.size(); ++k) {
    if (row_idx[k] >= shape.dim(positions[k]) || col_idx[k] >= shape.dim(positions[k])) {
      throw ShapeError("component: index out of range");
    }
    row_base += row_idx[k] * strides[positions[k]];
    col_base += col_idx[k] * strides[positions[k]];
  }
  const auto rest = complement(shape.slots(), positions);
  const auto rest_offsets = offsets_over(shape, rest);
  TensorOp out(shape.select(rest));
  for (std::size_t r = 0; r < rest_offsets.size(); ++r) {
    for (std::size_t c = 0; c < rest_offsets.size(); ++c) {
      out(r, c) = op(row_base + rest_offsets[r], col_base + rest_offsets[c]);
    }
  }
  return out;
}

}  // namespace rmat
