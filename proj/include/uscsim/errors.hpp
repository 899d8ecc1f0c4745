#pragma once

#include <stdexcept>
#include <string>

namespace uscsim {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live on incompatible Hilbert spaces or have mismatched dimensions.
class InvalidSpace : public Error {
 public:
  using Error::Error;
};

class InvalidParameters : public Error {
 public:
  using Error::Error;
};

/// A model mapping was requested outside the conditions under which it holds.
class InvalidMapping : public Error {
 public:
  using Error::Error;
};

class InvalidGenerator : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class PostselectionImpossible : public Error {
 public:
  using Error::Error;
};

/// Base for failures of the numerical machinery itself.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class IntegrationFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class EvaluatorError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ConvergenceFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace uscsim
