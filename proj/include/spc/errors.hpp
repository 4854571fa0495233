#pragma once

#include <stdexcept>
#include <string>

namespace spc {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Faults traceable to user input (bad files, infeasible configuration).
/// The CLI maps these to exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// --- validation faults ---

class SchemaMismatch : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NonNumeric : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class EmptyArm : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InsufficientArm : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class AllMissing : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class OutOfRange : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class RankDeficient : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Covariance or correlation matrix is not positive semi-definite.
/// Raised both for numerically indefinite inputs and for jointly
/// inconsistent pairwise correlation specifications.
class NotPsd : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InvalidArgument : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// --- runtime faults ---

class SingularPivot : public Error {
 public:
  using Error::Error;
};

class SingularObservedBlock : public Error {
 public:
  using Error::Error;
};

class InvalidDf : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace spc
