// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace cpmv {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Configuration problems. The CLI maps these to exit code 1.
class ConfigError : public Error {
 public:
  using Error::Error;
};
class InvalidParams : public ConfigError {
 public:
  using ConfigError::ConfigError;
};
class InfeasibleBudget : public ConfigError {
 public:
  using ConfigError::ConfigError;
};
class BadDelta : public ConfigError {
 public:
  using ConfigError::ConfigError;
};
class Unsupported : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// Recovery failures. The CLI maps these to exit code 2.
class DecodeError : public Error {
 public:
  using Error::Error;
};
class NotPeelable : public DecodeError {
 public:
  using DecodeError::DecodeError;
};
class IncompleteDecode : public DecodeError {
 public:
  using DecodeError::DecodeError;
};
class SingularSystem : public DecodeError {
 public:
  using DecodeError::DecodeError;
};
class UnrecoverablePattern : public DecodeError {
 public:
  using DecodeError::DecodeError;
};

// File format and filesystem problems. The CLI maps these to exit code 3.
class IoError : public Error {
 public:
  using Error::Error;
};

// Algebraic / shape errors.
class NotDivisible : public Error {
 public:
  using Error::Error;
};
class DomainError : public Error {
 public:
  using Error::Error;
};
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};
class ShapeMismatch : public Error {
 public:
  using Error::Error;
};
class ZeroColumn : public Error {
 public:
  using Error::Error;
};
class DuplicatePoints : public Error {
 public:
  using Error::Error;
};

}  // namespace cpmv
