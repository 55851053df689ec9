#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace smd {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value outside its documented domain (bad ε, odd n, q ≤ 1, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// The analysis assumes n < d; raised when a dataset would not be over-parametrized.
class RegimeError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

/// Operation not defined for this input (e.g. concentrated stats of a custom model).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// w = 0 has no decision boundary.
class UndefinedClassifierError : public Error {
 public:
  using Error::Error;
};

/// SMD iterates blew up (learning rate too large for the data scale).
class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// A linear system that must be nonsingular was not.
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// An iterative solver ran out of iterations.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double primal_residual, double gap)
      : Error(what), primal_residual_(primal_residual), gap_(gap) {}

  double primal_residual() const noexcept { return primal_residual_; }
  double gap() const noexcept { return gap_; }

 private:
  double primal_residual_;
  double gap_;
};

/// Non-finite objective value; carries the offending point.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, std::vector<double> point)
      : Error(what), point_(std::move(point)) {}

  const std::vector<double>& point() const noexcept { return point_; }

 private:
  std::vector<double> point_;
};

/// Saddle point landed on the edge of the search box; widen the range of `axis`.
class BoundaryError : public Error {
 public:
  BoundaryError(const std::string& what, std::size_t axis, std::string axis_name)
      : Error(what), axis_(axis), axis_name_(std::move(axis_name)) {}

  std::size_t axis() const noexcept { return axis_; }
  const std::string& axis_name() const noexcept { return axis_name_; }

 private:
  std::size_t axis_;
  std::string axis_name_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class FileError : public Error {
 public:
  FileError(const std::string& what, std::string path)
      : Error(what), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace smd
