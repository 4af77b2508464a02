#pragma once

#include <cmath>
#include <string>

#include "sae/matlin/dense.hpp"

namespace sae {
namespace matlin {

/// Lower Cholesky factor L with A = L·Lᵀ. Only the lower triangle of `a` is read.
template <typename Derived>
Matrix<typename Derived::Scalar> cholesky_lower(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  require_square(a, "cholesky");
  if (!all_finite(a)) throw DataError("cholesky: input has non-finite entries");
  const Index n = a.rows();
  Matrix<Scalar> l = Matrix<Scalar>::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    Scalar diag = a(j, j);
    for (Index p = 0; p < j; ++p) diag -= l(j, p) * l(j, p);
    if (!(diag > Scalar(0))) {
      throw NotPositiveDefiniteError("solve_spd: matrix is not positive definite (pivot " +
                                     std::to_string(j) + " is " + std::to_string(diag) + ")");
    }
    const Scalar ljj = std::sqrt(diag);
    l(j, j) = ljj;
    for (Index i = j + 1; i < n; ++i) {
      Scalar acc = a(i, j);
      for (Index p = 0; p < j; ++p) acc -= l(i, p) * l(j, p);
      l(i, j) = acc / ljj;
    }
  }
  return l;
}

/// Solves A·X = RHS for symmetric positive definite A through its Cholesky factor.
template <typename DA, typename DB>
Matrix<typename DA::Scalar> solve_spd(const Eigen::MatrixBase<DA>& a,
                                      const Eigen::MatrixBase<DB>& rhs) {
  using Scalar = typename DA::Scalar;
  if (rhs.rows() != a.rows()) {
    throw DimensionError("solve_spd: rhs has " + std::to_string(rhs.rows()) +
                         " rows, matrix is " + shape_string(a.rows(), a.cols()));
  }
  const Matrix<Scalar> l = cholesky_lower(a);
  const Index n = l.rows();
  Matrix<Scalar> x = rhs;
  for (Index c = 0; c < x.cols(); ++c) {
    // Forward: L·z = b.
    for (Index i = 0; i < n; ++i) {
      Scalar acc = x(i, c);
      for (Index p = 0; p < i; ++p) acc -= l(i, p) * x(p, c);
      x(i, c) = acc / l(i, i);
    }
    // Backward: Lᵀ·x = z.
    for (Index i = n - 1; i >= 0; --i) {
      Scalar acc = x(i, c);
      for (Index p = i + 1; p < n; ++p) acc -= l(p, i) * x(p, c);
      x(i, c) = acc / l(i, i);
    }
  }
  return x;
}

}  // namespace matlin
}  // namespace sae
