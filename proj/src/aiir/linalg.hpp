#pragma once

// Small dense linear algebra: exactly what the analytics need and nothing
// more. Row-major matrices, Householder-QR residual norms for least squares,
// and a cyclic Jacobi eigensolver for symmetric matrices. Everything here is
// deterministic: fixed loop orders, no threading, no fast-math.

#include <cstddef>
#include <vector>

namespace aiir {

struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data; // row-major

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

struct LeastSquaresFit {
  double sse = 0.0;        // residual sum of squares ||y - X b||^2
  bool rank_deficient = false;
};

// Residual sum of squares of the least-squares problem min_b ||y - X b||^2,
// computed by Householder triangularization of X with y carried along: the
// squared norm of the transformed y below row p is the SSE. When a pivot
// column collapses (relative to the largest initial column norm, tolerance
// 1e-12) the design is rank deficient; the fit is flagged and the SSE is not
// meaningful. Requires X.rows == y.size() and X.rows >= X.cols.
LeastSquaresFit least_squares_sse(const Matrix& X, const std::vector<double>& y);

struct EigenDecomposition {
  std::vector<double> values; // descending
  Matrix vectors;             // column j is the eigenvector for values[j]
};

// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations,
// sweeping until the off-diagonal Frobenius norm falls below
// tol * ||S||_F (default 1e-12) or max_sweeps passes. Eigenpairs are sorted
// by descending eigenvalue (ties keep lower original index first); each
// eigenvector is sign-fixed so its largest-magnitude entry (lowest index on
// ties) is positive.
EigenDecomposition jacobi_eigen(const Matrix& S, double tol = 1e-12, int max_sweeps = 100);

} // namespace aiir
