#include "rmat/scalarfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "rmat/errors.hpp"

namespace rmat {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};
constexpr int kMaxThetaTerms = 100000;

bool finite(cplx x) { return std::isfinite(x.real()) && std::isfinite(x.imag()); }

void require_tau(cplx tau) {
  if (!finite(tau) || !(tau.imag() > 0.0)) {
    std::ostringstream os;
    os << "modulus tau must have Im(tau) > 0, got " << tau;
    throw ConfigError(os.str());
  }
}

cplx theta_sum(cplx x, cplx tau, int order, double tail_tolerance) {
  require_tau(tau);
  const int terms = theta_truncation(x, tau, order, tail_tolerance);
  cplx sum{0.0, 0.0};
  // The terms k and -1-k combine into sines (even orders) or cosines (odd
  // orders) of A = (2k + 1) pi x, which keeps theta(x) accurate near x = 0
  // and its oddness exact.
  for (int k = terms - 1; k >= 0; --k) {
    const double m = k + 0.5;
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    const cplx a = (2.0 * k + 1.0) * kPi * x;
    cplx pair = std::exp(kI * kPi * tau * (m * m));
    if (order % 2 == 0) {
      pair *= -2.0 * sign * std::sin(a);
    } else {
      pair *= 2.0 * kI * sign * std::cos(a);
    }
    if (order > 0) pair *= std::pow(2.0 * kPi * kI * m, order);
    sum += pair;
  }
  return sum;
}

cplx coth(cplx z) { return 1.0 / std::tanh(z); }

cplx inv_sinh_sq(cplx z) {
  const cplx s = std::sinh(z);
  return 1.0 / (s * s);
}

}  // namespace

PoleProximity::PoleProximity(std::string argument, cplx value, double distance,
                             double radius)
    : NumericalError([&] {
        std::ostringstream os;
        os << "argument '" << argument << "' = " << value
           << " is within " << distance << " of a pole (exclusion radius "
           << radius << ")";
        return os.str();
      }()),
      argument_(std::move(argument)),
      value_(value),
      distance_(distance) {}

std::string to_string(VariantKind kind) {
  switch (kind) {
    case VariantKind::Elliptic:
      return "elliptic";
    case VariantKind::Trigonometric:
      return "trig";
    case VariantKind::Rational:
      return "rational";
  }
  return "unknown";
}

VariantKind variant_kind_from_string(const std::string& name) {
  if (name == "elliptic") return VariantKind::Elliptic;
  if (name == "trig" || name == "trigonometric") return VariantKind::Trigonometric;
  if (name == "rational") return VariantKind::Rational;
  throw ConfigError("unknown variant '" + name + "' (expected elliptic|trig|rational)");
}

int theta_truncation(cplx x, cplx tau, int order, double tail_tolerance) {
  require_tau(tau);
  if (!(tail_tolerance > 0.0)) throw ConfigError("theta tail tolerance must be positive");
  // |term(m)| <= exp(-a m^2 + b m) (2 pi m)^order with m = |k + 1/2|.
  const double a = kPi * tau.imag();
  const double b = 2.0 * kPi * std::abs(x.imag());
  const double peak = b / (2.0 * a);
  for (int n = 0; n < kMaxThetaTerms; ++n) {
    const double m = n + 0.5;
    if (m <= peak + order) continue;
    const double bound = std::exp(-a * m * m + b * m) * std::pow(2.0 * kPi * m, order);
    const double ratio =
        std::exp(-a * (2.0 * m + 1.0) + b) * std::pow((m + 1.0) / m, order);
    // Tail on each side is a geometric series of ratio <= 1/2.
    if (ratio <= 0.5 && 4.0 * bound <= tail_tolerance) return n;
  }
  throw NumericalError("theta series does not converge within the term cap; Im(tau) too small");
}

cplx theta(cplx x, cplx tau, double tail_tolerance) {
  return theta_sum(x, tau, 0, tail_tolerance);
}

cplx theta_deriv(cplx x, cplx tau, int order, double tail_tolerance) {
  if (order < 1 || order > 3) {
    throw ConfigError("theta_deriv supports order 1, 2 or 3, got " + std::to_string(order));
  }
  return theta_sum(x, tau, order, tail_tolerance);
}

FunctionVariant::FunctionVariant(VariantKind kind, cplx tau, double pole_radius)
    : kind_(kind), tau_(tau), pole_radius_(pole_radius) {
  if (!(pole_radius >= 0.0) || !std::isfinite(pole_radius)) {
    throw ConfigError("pole exclusion radius must be a finite non-negative number");
  }
}

FunctionVariant FunctionVariant::elliptic(cplx tau, double pole_radius) {
  require_tau(tau);
  FunctionVariant v(VariantKind::Elliptic, tau, pole_radius);
  v.theta1_ = theta_deriv(0.0, tau, 1);
  // Laurent normalization wp(z) = 1/z^2 + O(z^2).
  v.wp_constant_ = theta_deriv(0.0, tau, 3) / (3.0 * v.theta1_);

  const std::array<std::pair<cplx, cplx>, 3> probes{{
      {0.21 + 0.13 * tau, -0.17 + 0.29 * tau},
      {0.37 - 0.19 * tau, 0.11 + 0.23 * tau},
      {-0.28 + 0.07 * tau, 0.33 - 0.26 * tau},
  }};
  for (const auto& [h, q] : probes) {
    const cplx lhs = kronecker_phi(h, q, v) * kronecker_phi(h, -q, v);
    const cplx rhs = wp(h, v) - wp(q, v);
    const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
    if (!(std::abs(lhs - rhs) <= 1e-11 * scale)) {
      std::ostringstream os;
      os << "elliptic functions for tau = " << tau
         << " fail the scalar unitarity self-check (residual "
         << std::abs(lhs - rhs) << ")";
      throw ConfigError(os.str());
    }
  }
  return v;
}

FunctionVariant FunctionVariant::trigonometric(double pole_radius) {
  return FunctionVariant(VariantKind::Trigonometric, 0.0, pole_radius);
}

FunctionVariant FunctionVariant::rational(double pole_radius) {
  return FunctionVariant(VariantKind::Rational, 0.0, pole_radius);
}

std::optional<cplx> FunctionVariant::tau() const noexcept {
  if (kind_ == VariantKind::Elliptic) return tau_;
  return std::nullopt;
}

double FunctionVariant::pole_distance(cplx x) const {
  switch (kind_) {
    case VariantKind::Rational:
      return std::abs(x);
    case VariantKind::Trigonometric: {
      const double k = std::round(x.imag() / kPi);
      return std::abs(x - kI * (kPi * k));
    }
    case VariantKind::Elliptic: {
      const double n0 = std::round(x.imag() / tau_.imag());
      double best = std::abs(x);
      for (double n = n0 - 1.0; n <= n0 + 1.0; n += 1.0) {
        const cplx y = x - n * tau_;
        const double m0 = std::round(y.real());
        for (double m = m0 - 1.0; m <= m0 + 1.0; m += 1.0) {
          best = std::min(best, std::abs(y - m));
        }
      }
      return best;
    }
  }
  return 0.0;
}

void FunctionVariant::require_off_pole(cplx x, const char* argument) const {
  if (!finite(x)) throw PoleProximity(argument, x, 0.0, pole_radius_);
  const double d = pole_distance(x);
  if (d < pole_radius_) throw PoleProximity(argument, x, d, pole_radius_);
}

bool FunctionVariant::same_as(const FunctionVariant& other) const noexcept {
  if (kind_ != other.kind_) return false;
  return kind_ != VariantKind::Elliptic || tau_ == other.tau_;
}

std::string FunctionVariant::describe() const {
  std::ostringstream os;
  os << to_string(kind_);
  if (kind_ == VariantKind::Elliptic) os << "(tau=" << tau_.real() << "," << tau_.imag() << ")";
  return os.str();
}

cplx kronecker_phi(cplx h, cplx z, const FunctionVariant& variant) {
  variant.require_off_pole(h, "h");
  variant.require_off_pole(z, "z");
  switch (variant.kind()) {
    case VariantKind::Rational:
      return 1.0 / h + 1.0 / z;
    case VariantKind::Trigonometric:
      return coth(h) + coth(z);
    case VariantKind::Elliptic: {
      const cplx tau = *variant.tau();
      return variant.theta_prime_zero() * theta(h + z, tau) / (theta(h, tau) * theta(z, tau));
    }
  }
  return 0.0;
}

cplx e1(cplx z, const FunctionVariant& variant) {
  variant.require_off_pole(z, "z");
  switch (variant.kind()) {
    case VariantKind::Rational:
      return 1.0 / z;
    case VariantKind::Trigonometric:
      return coth(z);
    case VariantKind::Elliptic: {
      const cplx tau = *variant.tau();
      return theta_deriv(z, tau, 1) / theta(z, tau);
    }
  }
  return 0.0;
}

cplx e1_deriv(cplx z, const FunctionVariant& variant) {
  variant.require_off_pole(z, "z");
  switch (variant.kind()) {
    case VariantKind::Rational:
      return -1.0 / (z * z);
    case VariantKind::Trigonometric:
      return -inv_sinh_sq(z);
    case VariantKind::Elliptic: {
      const cplx tau = *variant.tau();
      const cplx t0 = theta(z, tau);
      const cplx t1 = theta_deriv(z, tau, 1);
      const cplx t2 = theta_deriv(z, tau, 2);
      return (t2 * t0 - t1 * t1) / (t0 * t0);
    }
  }
  return 0.0;
}

cplx wp(cplx z, const FunctionVariant& variant) {
  variant.require_off_pole(z, "z");
  switch (variant.kind()) {
    case VariantKind::Rational:
      return 1.0 / (z * z);
    case VariantKind::Trigonometric:
      return inv_sinh_sq(z);
    case VariantKind::Elliptic:
      return variant.wp_constant() - e1_deriv(z, variant);
  }
  return 0.0;
}

cplx phi_dq(cplx h, cplx z, const FunctionVariant& variant) {
  variant.require_off_pole(h, "h");
  variant.require_off_pole(z, "z");
  switch (variant.kind()) {
    case VariantKind::Rational:
      return -1.0 / (z * z);
    case VariantKind::Trigonometric:
      return -inv_sinh_sq(z);
    case VariantKind::Elliptic: {
      // phi(h,z) (E1(h+z) - E1(z)) with the theta(h+z) denominator cancelled.
      const cplx tau = *variant.tau();
      const cplx tz = theta(z, tau);
      const cplx num = theta_deriv(h + z, tau, 1) * tz - theta(h + z, tau) * theta_deriv(z, tau, 1);
      return variant.theta_prime_zero() * num / (theta(h, tau) * tz * tz);
    }
  }
  return 0.0;
}

}  // namespace rmat
