#pragma once

#include <stdexcept>
#include <string>

namespace ym {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument lies outside the domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Value lies outside the image of a piece.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Operation is not defined for this kind of piece (e.g. inverting a constant).
class KindError : public Error {
 public:
  using Error::Error;
};

/// The inverse of a piece has unbounded slope at the requested value.
class SingularSlopeError : public Error {
 public:
  SingularSlopeError(const std::string& what, double y) : Error(what), y_(y) {}
  double y() const noexcept { return y_; }

 private:
  double y_;
};

/// Adaptive quadrature did not reach the requested tolerance.
class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, double lo, double hi, double estimate)
      : Error(what), lo_(lo), hi_(hi), estimate_(estimate) {}
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  double error_estimate() const noexcept { return estimate_; }

 private:
  double lo_;
  double hi_;
  double estimate_;
};

/// Hypothesis of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// An object could not be built from the given inputs (e.g. invalid function).
class ConstructionError : public Error {
 public:
  using Error::Error;
};

/// Operation not supported for this input (e.g. non-affine gradient).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// Malformed input text. Line and column are 1-based; 0 means unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : Error(what), line_(line), column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace ym
