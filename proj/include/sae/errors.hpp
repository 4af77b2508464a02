#pragma once

#include <stdexcept>
#include <string>

namespace sae {

// Bad flags or missing arguments.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input data.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public DataError {
 public:
  using DataError::DataError;
};

// Numerical failure: non-convergence, non-SPD input, singular systems.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NotPositiveDefiniteError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// A·W + W·B = C has no unique solution: some eigenvalue of A is (numerically)
// the negation of an eigenvalue of B.
class SingularPencilError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace sae
