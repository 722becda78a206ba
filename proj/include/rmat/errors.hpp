#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace rmat {

// Base for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid user-facing configuration (bad flag, bad modulus, impossible
// check/size combination, uncertifiable family).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Operator shapes that do not fit together.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Numerical failure that is not a user mistake: extrapolation that does not
// settle, sampler exhaustion, failed self-certification.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class CertificationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// An argument of a meromorphic function sits too close to one of its poles.
class PoleProximity : public NumericalError {
 public:
  PoleProximity(std::string argument, std::complex<double> value,
                double distance, double radius);

  const std::string& argument() const noexcept { return argument_; }
  std::complex<double> value() const noexcept { return value_; }
  double distance() const noexcept { return distance_; }

 private:
  std::string argument_;
  std::complex<double> value_;
  double distance_;
};

}  // namespace rmat
