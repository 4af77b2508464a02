#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "sae/matlin/dense.hpp"

namespace sae {

/// Real Schur factorization A = Q·T·Qᵀ.
///
/// `q` is orthogonal; `t` is quasi-upper-triangular with 1×1 blocks for real
/// eigenvalues and 2×2 blocks for complex-conjugate pairs. Every entry below the
/// first subdiagonal of `t` is exactly zero, and a nonzero subdiagonal entry
/// always marks the lower-left corner of a 2×2 block whose eigenvalues are
/// complex.
template <typename Scalar>
struct SchurForm {
  Matrix<Scalar> q;
  Matrix<Scalar> t;

  Index size() const { return t.rows(); }

  // True if row/col i starts a 2×2 diagonal block.
  bool block_starts_at(Index i) const { return i + 1 < size() && t(i + 1, i) != Scalar(0); }

  std::vector<std::complex<Scalar>> eigenvalues() const {
    std::vector<std::complex<Scalar>> out;
    out.reserve(static_cast<std::size_t>(size()));
    for (Index i = 0; i < size();) {
      if (block_starts_at(i)) {
        const Scalar a = t(i, i), b = t(i, i + 1), c = t(i + 1, i), d = t(i + 1, i + 1);
        const Scalar p = Scalar(0.5) * (a - d);
        const Scalar disc = p * p + b * c;
        const Scalar re = d + p;
        const Scalar im = std::sqrt(std::abs(disc));
        out.emplace_back(re, im);
        out.emplace_back(re, -im);
        i += 2;
      } else {
        out.emplace_back(t(i, i), Scalar(0));
        i += 1;
      }
    }
    return out;
  }
};

struct SchurOptions {
  // Iteration budget is max_iters_per_row · n unless max_iters is set.
  Index max_iters = 0;
  Index max_iters_per_row = 30;
  // Subdiagonal entries below tol·(|h_ii| + |h_{i-1,i-1}|) are deflated.
  double deflation_tol = 1e-12;
};

namespace matlin {
namespace detail {

// Householder reflector P = I − tau·v·vᵀ with P·x = beta·e1 and v(0) = 1.
template <typename Scalar>
struct Reflector {
  Vector<Scalar> v;
  Scalar tau = 0;
  Scalar beta = 0;
};

template <typename Derived>
Reflector<typename Derived::Scalar> make_reflector(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  Reflector<Scalar> r;
  const Index n = x.size();
  r.v = Vector<Scalar>::Zero(n);
  r.v(0) = 1;
  const Scalar tail = n > 1 ? x.tail(n - 1).squaredNorm() : Scalar(0);
  const Scalar x0 = x(0);
  if (tail == Scalar(0)) {
    r.beta = x0;
    return r;
  }
  Scalar beta = std::sqrt(x0 * x0 + tail);
  if (x0 > 0) beta = -beta;
  const Scalar v0 = x0 - beta;
  r.v.tail(n - 1) = x.tail(n - 1) / v0;
  r.tau = (beta - x0) / beta;
  r.beta = beta;
  return r;
}

// block ← P·block
template <typename Scalar, typename Derived>
void apply_left(const Reflector<Scalar>& r, Eigen::MatrixBase<Derived>&& block) {
  if (r.tau == Scalar(0)) return;
  Vector<Scalar> w = block.transpose() * r.v;
  block.noalias() -= (r.tau * r.v) * w.transpose();
}

// block ← block·P
template <typename Scalar, typename Derived>
void apply_right(const Reflector<Scalar>& r, Eigen::MatrixBase<Derived>&& block) {
  if (r.tau == Scalar(0)) return;
  Vector<Scalar> w = block * r.v;
  block.noalias() -= w * (r.tau * r.v).transpose();
}

template <typename Scalar>
void reduce_to_hessenberg(Matrix<Scalar>& h, Matrix<Scalar>& q) {
  const Index n = h.rows();
  for (Index k = 0; k + 2 < n; ++k) {
    const Index m = n - k - 1;
    auto r = make_reflector(h.col(k).tail(m));
    apply_left(r, h.bottomRightCorner(m, n - k));
    apply_right(r, h.rightCols(m));
    apply_right(r, q.rightCols(m));
    h(k + 1, k) = r.beta;
    h.col(k).tail(m - 1).setZero();
  }
}

// Rotation G = [[c, -s], [s, c]] applied as rows ← Gᵀ·rows, cols ← cols·G.
template <typename Scalar>
void rotate_pair(Matrix<Scalar>& h, Matrix<Scalar>& q, Index i, Index j, Scalar c, Scalar s,
                 Index col_from, Index row_to) {
  const Index n = h.rows();
  for (Index col = col_from; col < n; ++col) {
    const Scalar a = h(i, col), b = h(j, col);
    h(i, col) = c * a + s * b;
    h(j, col) = -s * a + c * b;
  }
  for (Index row = 0; row <= row_to; ++row) {
    const Scalar a = h(row, i), b = h(row, j);
    h(row, i) = c * a + s * b;
    h(row, j) = -s * a + c * b;
  }
  for (Index row = 0; row < n; ++row) {
    const Scalar a = q(row, i), b = q(row, j);
    q(row, i) = c * a + s * b;
    q(row, j) = -s * a + c * b;
  }
}

// Triangularizes the 2×2 block at (iu-1, iu) when its eigenvalues are real.
template <typename Scalar>
void split_two_by_two(Matrix<Scalar>& h, Matrix<Scalar>& q, Index iu) {
  const Index il = iu - 1;
  const Scalar a = h(il, il), b = h(il, iu), c = h(iu, il), d = h(iu, iu);
  const Scalar p = Scalar(0.5) * (a - d);
  const Scalar disc = p * p + b * c;
  if (disc < Scalar(0)) return;
  const Scalar z = std::sqrt(disc);
  // Eigenvector (p ± z, c) for eigenvalue d + p ± z; sign chosen against cancellation.
  const Scalar v0 = p >= 0 ? p + z : p - z;
  const Scalar norm = std::hypot(v0, c);
  if (norm == Scalar(0)) return;
  rotate_pair(h, q, il, iu, v0 / norm, c / norm, il, iu);
  h(iu, il) = 0;
}

}  // namespace detail

/// Real Schur decomposition via Hessenberg reduction and Francis double-shift QR.
///
/// Deterministic for a fixed input. Throws NonConvergenceError when the iteration
/// budget runs out; raising `opts.max_iters` is the usual remedy.
template <typename Derived>
SchurForm<typename Derived::Scalar> real_schur(const Eigen::MatrixBase<Derived>& a,
                                               const SchurOptions& opts = {}) {
  using Scalar = typename Derived::Scalar;
  require_square(a, "real_schur");
  if (!all_finite(a)) throw DataError("real_schur: input has non-finite entries");

  const Index n = a.rows();
  SchurForm<Scalar> out;
  out.t = a;
  out.q = Matrix<Scalar>::Identity(n, n);
  if (n == 0) return out;
  Matrix<Scalar>& h = out.t;
  Matrix<Scalar>& q = out.q;

  detail::reduce_to_hessenberg(h, q);

  const Scalar tol = static_cast<Scalar>(opts.deflation_tol);
  const Index budget = opts.max_iters > 0 ? opts.max_iters : opts.max_iters_per_row * n;
  Scalar h_norm = h.norm();
  if (h_norm == Scalar(0)) h_norm = Scalar(1);

  Index iu = n - 1;
  Index total_iters = 0;
  Index iters_since_deflation = 0;

  while (iu >= 0) {
    // Find the start of the unreduced block ending at iu.
    Index il = iu;
    while (il > 0) {
      Scalar s = std::abs(h(il - 1, il - 1)) + std::abs(h(il, il));
      if (s == Scalar(0)) s = h_norm;
      if (std::abs(h(il, il - 1)) < tol * s) {
        h(il, il - 1) = 0;
        break;
      }
      --il;
    }

    if (il == iu) {
      iu -= 1;
      iters_since_deflation = 0;
      continue;
    }
    if (il == iu - 1) {
      detail::split_two_by_two(h, q, iu);
      iu -= 2;
      iters_since_deflation = 0;
      continue;
    }

    if (total_iters >= budget) {
      throw NonConvergenceError("real_schur: no convergence after " +
                                std::to_string(total_iters) +
                                " QR iterations; input may be ill-conditioned");
    }
    ++total_iters;
    ++iters_since_deflation;

    // Shifts enter only through the trace and determinant of the trailing 2×2.
    Scalar trace, det;
    if (iters_since_deflation % 10 == 0) {
      const Scalar sigma = std::abs(h(iu, iu - 1)) + std::abs(h(iu - 1, iu - 2));
      trace = Scalar(1.5) * sigma;
      det = sigma * sigma;
    } else {
      trace = h(iu - 1, iu - 1) + h(iu, iu);
      det = h(iu - 1, iu - 1) * h(iu, iu) - h(iu - 1, iu) * h(iu, iu - 1);
    }

    Scalar x = h(il, il) * h(il, il) + h(il, il + 1) * h(il + 1, il) - trace * h(il, il) + det;
    Scalar y = h(il + 1, il) * (h(il, il) + h(il + 1, il + 1) - trace);
    Scalar z = h(il + 1, il) * h(il + 2, il + 1);

    for (Index k = il; k + 2 <= iu; ++k) {
      Vector<Scalar> bulge(3);
      bulge << x, y, z;
      auto r = detail::make_reflector(bulge);
      const Index col_from = k > il ? k - 1 : k;
      detail::apply_left(r, h.block(k, col_from, 3, n - col_from));
      const Index row_to = std::min(k + 3, iu);
      detail::apply_right(r, h.block(0, k, row_to + 1, 3));
      detail::apply_right(r, q.middleCols(k, 3));
      if (k > il) {
        h(k, k - 1) = r.beta;
        h(k + 1, k - 1) = 0;
        h(k + 2, k - 1) = 0;
      }
      x = h(k + 1, k);
      y = h(k + 2, k);
      if (k + 3 <= iu) z = h(k + 3, k);
    }

    // Final 2-element reflection on rows iu-1, iu.
    Vector<Scalar> tail(2);
    tail << x, y;
    auto r = detail::make_reflector(tail);
    detail::apply_left(r, h.block(iu - 1, iu - 2, 2, n - iu + 2));
    detail::apply_right(r, h.block(0, iu - 1, iu + 1, 2));
    detail::apply_right(r, q.middleCols(iu - 1, 2));
    h(iu - 1, iu - 2) = r.beta;
    h(iu, iu - 2) = 0;
  }

  for (Index j = 0; j < n; ++j)
    for (Index i = j + 2; i < n; ++i) h(i, j) = 0;
  return out;
}

}  // namespace matlin
}  // namespace sae
