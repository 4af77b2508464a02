#pragma once

#include <cmath>
#include <sstream>
#include <string>

#include <Eigen/Core>

#include "sae/errors.hpp"

namespace sae {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Column-major real matrix; columns are samples wherever a matrix holds data.
using DenseMatrix = Matrix<double>;
using DenseVector = Vector<double>;
using Index = Eigen::Index;

namespace matlin {

inline std::string shape_string(Index rows, Index cols) {
  std::ostringstream os;
  os << rows << "x" << cols;
  return os.str();
}

template <typename DA, typename DB>
void require_same_shape(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b,
                        const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(what) + ": shape mismatch " +
                         shape_string(a.rows(), a.cols()) + " vs " +
                         shape_string(b.rows(), b.cols()));
  }
}

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& a, const char* what) {
  if (a.rows() != a.cols()) {
    throw DimensionError(std::string(what) + ": expected a square matrix, got " +
                         shape_string(a.rows(), a.cols()));
  }
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& a) {
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i)
      if (!std::isfinite(a(i, j))) return false;
  return true;
}

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& a, const char* what) {
  if (!all_finite(a)) throw NumericalError(std::string(what) + ": non-finite entries");
}

/// Checked product a·b.
template <typename DA, typename DB>
Matrix<typename DA::Scalar> matmul(const Eigen::MatrixBase<DA>& a,
                                   const Eigen::MatrixBase<DB>& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul: inner dimensions differ (" +
                         shape_string(a.rows(), a.cols()) + " x " +
                         shape_string(b.rows(), b.cols()) + ")");
  }
  Matrix<typename DA::Scalar> out = a * b;
  return out;
}

template <typename Derived>
typename Derived::Scalar frobenius(const Eigen::MatrixBase<Derived>& a) {
  return a.norm();
}

}  // namespace matlin
}  // namespace sae
