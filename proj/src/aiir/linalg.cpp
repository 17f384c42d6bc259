#include "aiir/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace aiir {

LeastSquaresFit least_squares_sse(const Matrix& X, const std::vector<double>& y) {
  const std::size_t n = X.rows;
  const std::size_t p = X.cols;
  if (y.size() != n) {
    throw std::invalid_argument("least_squares_sse: X and y row counts differ");
  }
  if (n < p) {
    throw std::invalid_argument("least_squares_sse: underdetermined system (n < p)");
  }

  Matrix A = X;              // triangularized in place
  std::vector<double> b = y; // transformed alongside

  // Scale reference for the rank test: the largest initial column norm.
  double scale = 0.0;
  for (std::size_t j = 0; j < p; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += A.at(i, j) * A.at(i, j);
    scale = std::max(scale, std::sqrt(s));
  }

  LeastSquaresFit fit;
  std::vector<double> v(n, 0.0);
  for (std::size_t k = 0; k < p; ++k) {
    double norm_sq = 0.0;
    for (std::size_t i = k; i < n; ++i) norm_sq += A.at(i, k) * A.at(i, k);
    const double alpha = std::sqrt(norm_sq);
    if (alpha <= 1e-12 * scale) {
      fit.rank_deficient = true;
      return fit;
    }

    // Householder vector v = x + sign(x_k) * alpha * e_k.
    const double pivot = A.at(k, k);
    const double signed_alpha = pivot >= 0.0 ? alpha : -alpha;
    for (std::size_t i = k; i < n; ++i) v[i] = A.at(i, k);
    v[k] += signed_alpha;
    const double v_norm_sq = norm_sq + 2.0 * pivot * signed_alpha + alpha * alpha;
    if (v_norm_sq <= 0.0) {
      fit.rank_deficient = true;
      return fit;
    }
    const double beta = 2.0 / v_norm_sq;

    // Reflect the remaining columns of A and the carried y.
    for (std::size_t j = k; j < p; ++j) {
      double dot = 0.0;
      for (std::size_t i = k; i < n; ++i) dot += v[i] * A.at(i, j);
      const double factor = beta * dot;
      for (std::size_t i = k; i < n; ++i) A.at(i, j) -= factor * v[i];
    }
    double dot = 0.0;
    for (std::size_t i = k; i < n; ++i) dot += v[i] * b[i];
    const double factor = beta * dot;
    for (std::size_t i = k; i < n; ++i) b[i] -= factor * v[i];
  }

  double sse = 0.0;
  for (std::size_t i = p; i < n; ++i) sse += b[i] * b[i];
  fit.sse = sse;
  return fit;
}

namespace {

double off_diagonal_norm(const Matrix& A) {
  double s = 0.0;
  for (std::size_t i = 0; i < A.rows; ++i) {
    for (std::size_t j = 0; j < A.cols; ++j) {
      if (i != j) s += A.at(i, j) * A.at(i, j);
    }
  }
  return std::sqrt(s);
}

double frobenius_norm(const Matrix& A) {
  double s = std::inner_product(A.data.begin(), A.data.end(), A.data.begin(), 0.0);
  return std::sqrt(s);
}

} // namespace

EigenDecomposition jacobi_eigen(const Matrix& S, double tol, int max_sweeps) {
  const std::size_t d = S.rows;
  if (S.cols != d) {
    throw std::invalid_argument("jacobi_eigen: matrix must be square");
  }
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) {
      if (std::abs(S.at(i, j) - S.at(j, i)) > 1e-9 * (1.0 + std::abs(S.at(i, j)))) {
        throw std::invalid_argument("jacobi_eigen: matrix must be symmetric");
      }
    }
  }

  Matrix A = S;
  Matrix V(d, d);
  for (std::size_t i = 0; i < d; ++i) V.at(i, i) = 1.0;

  const double stop = tol * std::max(frobenius_norm(S), 1e-300);
  for (int sweep = 0; sweep < max_sweeps && off_diagonal_norm(A) > stop; ++sweep) {
    for (std::size_t p = 0; p < d; ++p) {
      for (std::size_t q = p + 1; q < d; ++q) {
        const double apq = A.at(p, q);
        if (apq == 0.0) continue;
        const double app = A.at(p, p);
        const double aqq = A.at(q, q);
        // Rotation angle zeroing A[p][q]: standard stable formulation.
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (std::size_t i = 0; i < d; ++i) {
          const double aip = A.at(i, p);
          const double aiq = A.at(i, q);
          A.at(i, p) = c * aip - s * aiq;
          A.at(i, q) = s * aip + c * aiq;
        }
        for (std::size_t j = 0; j < d; ++j) {
          const double apj = A.at(p, j);
          const double aqj = A.at(q, j);
          A.at(p, j) = c * apj - s * aqj;
          A.at(q, j) = s * apj + c * aqj;
        }
        for (std::size_t i = 0; i < d; ++i) {
          const double vip = V.at(i, p);
          const double viq = V.at(i, q);
          V.at(i, p) = c * vip - s * viq;
          V.at(i, q) = s * vip + c * viq;
        }
      }
    }
  }

  // Sort eigenpairs descending; stable on ties.
  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&A](std::size_t a, std::size_t b) {
    return A.at(a, a) > A.at(b, b);
  });

  EigenDecomposition out;
  out.values.resize(d);
  out.vectors = Matrix(d, d);
  for (std::size_t j = 0; j < d; ++j) {
    const std::size_t src = order[j];
    out.values[j] = A.at(src, src);
    // Sign convention: largest-magnitude loading positive.
    std::size_t arg_max = 0;
    double best = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double mag = std::abs(V.at(i, src));
      if (mag > best) {
        best = mag;
        arg_max = i;
      }
    }
    const double sign = V.at(arg_max, src) < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < d; ++i) {
      out.vectors.at(i, j) = sign * V.at(i, src);
    }
  }
  return out;
}

} // namespace aiir
