#pragma once

#include <stdexcept>
#include <string>

namespace stelnet {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A mathematical precondition failed (non-PD input, nu <= 2, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Dimensions disagree, or a matrix that must be square/symmetric is not.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Input data is unusable (non-finite values, too few rows, unparsable files).
class DataError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration or parameters.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// An estimator could not produce a valid fit.
class EstimationError : public Error {
 public:
  using Error::Error;
};

/// Every candidate in a model-selection grid failed.
class SelectionError : public EstimationError {
 public:
  using EstimationError::EstimationError;
};

/// A per-series time-series model fit failed (degenerate data, optimizer).
class FitError : public EstimationError {
 public:
  using EstimationError::EstimationError;
};

/// An iterative numeric routine failed to converge.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// The shock series diverges: spectral radius of P is at least one.
class DivergenceError : public NumericError {
 public:
  DivergenceError(const std::string& what, double radius)
      : NumericError(what), radius_(radius) {}
  double radius() const noexcept { return radius_; }

 private:
  double radius_;
};

}  // namespace stelnet
