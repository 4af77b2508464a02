#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <sstream>
#include <vector>

#include "sae/matlin/dense.hpp"
#include "sae/matlin/real_schur.hpp"

namespace sae {

struct SylvesterOptions {
  SchurOptions schur;
  // Pencil is singular when |λ_i(A) + λ_j(B)| < tol · (‖A‖_F + ‖B‖_F).
  double singular_tol = 1e-12;
};

namespace matlin {
namespace detail {

// Solves the p·q ≤ 4 dimensional system from a diagonal block pair:
//   ta·Y + Y·tb = rhs, with ta p×p and tb q×q.
// Gaussian elimination with partial pivoting on the Kronecker form.
template <typename Scalar>
void solve_small_sylvester(const Matrix<Scalar>& ta, const Matrix<Scalar>& tb,
                           Matrix<Scalar>& rhs) {
  const Index p = ta.rows(), q = tb.rows();
  const Index m = p * q;
  std::array<std::array<Scalar, 5>, 4> aug{};
  // vec index of Y(i, j) is i + j·p.
  for (Index j = 0; j < q; ++j) {
    for (Index i = 0; i < p; ++i) {
      const Index row = i + j * p;
      for (Index r = 0; r < p; ++r) aug[row][r + j * p] += ta(i, r);
      for (Index c = 0; c < q; ++c) aug[row][i + c * p] += tb(c, j);
      aug[row][4] = rhs(i, j);
    }
  }
  for (Index col = 0; col < m; ++col) {
    Index piv = col;
    for (Index r = col + 1; r < m; ++r)
      if (std::abs(aug[r][col]) > std::abs(aug[piv][col])) piv = r;
    if (aug[piv][col] == Scalar(0))
      throw SingularPencilError("solve_sylvester: singular diagonal block system");
    std::swap(aug[piv], aug[col]);
    for (Index r = col + 1; r < m; ++r) {
      const Scalar f = aug[r][col] / aug[col][col];
      if (f == Scalar(0)) continue;
      for (Index c = col; c < m; ++c) aug[r][c] -= f * aug[col][c];
      aug[r][4] -= f * aug[col][4];
    }
  }
  std::array<Scalar, 4> sol{};
  for (Index r = m - 1; r >= 0; --r) {
    Scalar acc = aug[r][4];
    for (Index c = r + 1; c < m; ++c) acc -= aug[r][c] * sol[c];
    sol[r] = acc / aug[r][r];
  }
  for (Index j = 0; j < q; ++j)
    for (Index i = 0; i < p; ++i) rhs(i, j) = sol[i + j * p];
}

// (start, size) of each diagonal block of a quasi-triangular Schur factor.
template <typename Scalar>
std::vector<std::pair<Index, Index>> diagonal_blocks(const SchurForm<Scalar>& f) {
  std::vector<std::pair<Index, Index>> blocks;
  for (Index i = 0; i < f.size();) {
    const Index len = f.block_starts_at(i) ? 2 : 1;
    blocks.emplace_back(i, len);
    i += len;
  }
  return blocks;
}

template <typename Scalar>
void check_pencil(const SchurForm<Scalar>& fa, const SchurForm<Scalar>& fb, Scalar threshold) {
  const auto ea = fa.eigenvalues();
  const auto eb = fb.eigenvalues();
  for (const auto& la : ea) {
    for (const auto& lb : eb) {
      if (std::abs(la + lb) < threshold) {
        std::ostringstream os;
        os.precision(6);
        os << "solve_sylvester: eigenvalue " << la.real() << (la.imag() < 0 ? "" : "+")
           << la.imag() << "i of A is within " << threshold
           << " of the negated eigenvalue " << lb.real() << (lb.imag() < 0 ? "" : "+")
           << lb.imag() << "i of B; the solution is not unique";
        throw SingularPencilError(os.str());
      }
    }
  }
}

}  // namespace detail

/// Solves A·W + W·B = C by Bartels–Stewart: real Schur forms of A and B, then
/// block back-substitution on the transformed system.
///
/// A is k×k, B is d×d, C is k×d. Throws SingularPencilError when the spectra of
/// A and −B (nearly) intersect.
template <typename DA, typename DB, typename DC>
Matrix<typename DA::Scalar> solve_sylvester(const Eigen::MatrixBase<DA>& a,
                                            const Eigen::MatrixBase<DB>& b,
                                            const Eigen::MatrixBase<DC>& c,
                                            const SylvesterOptions& opts = {}) {
  using Scalar = typename DA::Scalar;
  require_square(a, "solve_sylvester (A)");
  require_square(b, "solve_sylvester (B)");
  if (c.rows() != a.rows() || c.cols() != b.rows()) {
    throw DimensionError("solve_sylvester: C is " + shape_string(c.rows(), c.cols()) +
                         ", expected " + shape_string(a.rows(), b.rows()));
  }
  const Index k = a.rows(), d = b.rows();
  if (k == 0 || d == 0) return Matrix<Scalar>::Zero(k, d);
  if (!all_finite(c)) throw DataError("solve_sylvester: C has non-finite entries");

  const auto fa = real_schur(a, opts.schur);
  const auto fb = real_schur(b, opts.schur);
  const Scalar threshold = static_cast<Scalar>(opts.singular_tol) * (a.norm() + b.norm());
  detail::check_pencil(fa, fb, threshold);

  // ta·Y + Y·tb = F, F = Uᵀ·C·V, W = U·Y·Vᵀ.
  Matrix<Scalar> y = fa.q.transpose() * c * fb.q;
  const Matrix<Scalar>& ta = fa.t;
  const Matrix<Scalar>& tb = fb.t;
  const auto rows = detail::diagonal_blocks(fa);
  const auto cols = detail::diagonal_blocks(fb);

  for (const auto& [j0, nj] : cols) {
    for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
      const auto [i0, ni] = *it;
      Matrix<Scalar> rhs = y.block(i0, j0, ni, nj);
      const Index below = k - i0 - ni;
      if (below > 0)
        rhs.noalias() -= ta.block(i0, i0 + ni, ni, below) * y.block(i0 + ni, j0, below, nj);
      if (j0 > 0) rhs.noalias() -= y.block(i0, 0, ni, j0) * tb.block(0, j0, j0, nj);
      detail::solve_small_sylvester<Scalar>(ta.block(i0, i0, ni, ni), tb.block(j0, j0, nj, nj),
                                            rhs);
      y.block(i0, j0, ni, nj) = rhs;
    }
  }

  Matrix<Scalar> w = fa.q * y * fb.q.transpose();
  if (!all_finite(w)) throw NumericalError("solve_sylvester: solution has non-finite entries");
  return w;
}

/// ‖A·W + W·B − C‖_F
template <typename DA, typename DB, typename DW, typename DC>
typename DA::Scalar sylvester_residual(const Eigen::MatrixBase<DA>& a,
                                       const Eigen::MatrixBase<DB>& b,
                                       const Eigen::MatrixBase<DW>& w,
                                       const Eigen::MatrixBase<DC>& c) {
  return (a * w + w * b - c).norm();
}

}  // namespace matlin
}  // namespace sae
