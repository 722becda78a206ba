#pragma once

// Scalar special functions behind every R-matrix in the toolkit: the odd
// Jacobi theta series, the Kronecker function phi, its regular part E1, the
// Weierstrass-type wp, and the z-derivative of phi. Each function exists in
// an elliptic, a trigonometric (hyperbolic) and a rational realization.

#include <complex>
#include <optional>
#include <string>

namespace rmat {

using cplx = std::complex<double>;

enum class VariantKind { Elliptic, Trigonometric, Rational };

std::string to_string(VariantKind kind);
VariantKind variant_kind_from_string(const std::string& name);

inline constexpr double kDefaultPoleRadius = 1e-3;
inline constexpr double kDefaultThetaTailTolerance = 1e-14;

// Selects which realization of phi, E1 and wp is used.
//
// The elliptic realization caches theta'(0) and the additive constant of wp
// for its modulus; construction verifies the scalar unitarity relation
// phi(h, q) phi(h, -q) = wp(h) - wp(q) at fixed probe points and throws
// ConfigError if it does not hold to 1e-11.
class FunctionVariant {
 public:
  static FunctionVariant elliptic(cplx tau, double pole_radius = kDefaultPoleRadius);
  static FunctionVariant trigonometric(double pole_radius = kDefaultPoleRadius);
  static FunctionVariant rational(double pole_radius = kDefaultPoleRadius);

  VariantKind kind() const noexcept { return kind_; }
  std::optional<cplx> tau() const noexcept;
  double pole_radius() const noexcept { return pole_radius_; }

  // theta'(0) for the elliptic realization.
  cplx theta_prime_zero() const noexcept { return theta1_; }
  // Additive constant c in wp(z) = -E1'(z) + c. Zero for trig and rational.
  cplx wp_constant() const noexcept { return wp_constant_; }

  // Distance from x to the nearest pole of phi/E1/wp in this realization:
  // the origin (rational), i*pi*Z (trigonometric), Z + tau*Z (elliptic).
  double pole_distance(cplx x) const;

  // Throws PoleProximity if x is non-finite or within pole_radius() of a pole.
  void require_off_pole(cplx x, const char* argument) const;

  bool same_as(const FunctionVariant& other) const noexcept;
  std::string describe() const;

 private:
  FunctionVariant(VariantKind kind, cplx tau, double pole_radius);

  VariantKind kind_;
  cplx tau_{0.0, 0.0};
  double pole_radius_;
  cplx theta1_{0.0, 0.0};
  cplx wp_constant_{0.0, 0.0};
};

// theta(x) = sum_k exp(i pi tau (k+1/2)^2 + 2 pi i (x+1/2)(k+1/2)), truncated
// where the dropped tail is bounded by tail_tolerance.
cplx theta(cplx x, cplx tau, double tail_tolerance = kDefaultThetaTailTolerance);

// Term-wise derivative of the theta series; order in {1, 2, 3}.
cplx theta_deriv(cplx x, cplx tau, int order,
                 double tail_tolerance = kDefaultThetaTailTolerance);

// Number of terms on each side of the truncated theta series for the given
// argument, derivative order and tolerance.
int theta_truncation(cplx x, cplx tau, int order, double tail_tolerance);

cplx kronecker_phi(cplx h, cplx z, const FunctionVariant& variant);
cplx e1(cplx z, const FunctionVariant& variant);
// dE1/dz = wp_constant - wp(z).
cplx e1_deriv(cplx z, const FunctionVariant& variant);
cplx wp(cplx z, const FunctionVariant& variant);
// d/dz phi(h, z).
cplx phi_dq(cplx h, cplx z, const FunctionVariant& variant);

}  // namespace rmat
