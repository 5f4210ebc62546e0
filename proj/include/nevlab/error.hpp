#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nevlab {

/// Base of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// A function uses a construct outside the supported meromorphic class
/// (for example exp of a function with poles).
class ClassError : public Error {
 public:
  using Error::Error;
};

/// A zero or pole lies within the guard distance of an integration contour.
class RingTooClose : public Error {
 public:
  using Error::Error;
};

/// Argument-principle integral did not land near an integer.
class NonIntegerResidual : public Error {
 public:
  NonIntegerResidual(const std::string& what, double value) : Error(what), value_(value) {}
  double value() const noexcept { return value_; }

 private:
  double value_;
};

class QuadratureBudgetExceeded : public Error {
 public:
  QuadratureBudgetExceeded(const std::string& what, double achieved)
      : Error(what), achieved_(achieved) {}
  double achieved_tolerance() const noexcept { return achieved_; }

 private:
  double achieved_;
};

class RadiusMismatch : public Error {
 public:
  using Error::Error;
};

class TooFewRows : public Error {
 public:
  using Error::Error;
};

class UnknownCheck : public Error {
 public:
  using Error::Error;
};

}  // namespace nevlab
