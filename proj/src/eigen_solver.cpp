#include "dgac/eigen_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>

namespace dgac {

namespace {

SparseMatrix shifted(const SparseMatrix& a, const SparseMatrix& m, double sigma) {
  TripletBuilder tb(a.rows(), a.cols());
  tb.reserve(a.nnz() + m.nnz());
  for (int i = 0; i < a.rows(); ++i) {
    for (int p = a.row_ptr()[i]; p < a.row_ptr()[i + 1]; ++p) tb.add(i, a.col_idx()[p], a.values()[p]);
    for (int p = m.row_ptr()[i]; p < m.row_ptr()[i + 1]; ++p) tb.add(i, m.col_idx()[p], -sigma * m.values()[p]);
  }
  return tb.finalize();
}

// Unpivoted band factorization of A - sigma M; null on breakdown.
std::shared_ptr<BandedLU> factor_shifted(const SparseMatrix& a, const SparseMatrix& m, double sigma) {
  try {
    auto lu = std::make_shared<BandedLU>(shifted(a, m, sigma), false);
    if (!(lu->min_abs_pivot() > 0.0)) return nullptr;
    return lu;
  } catch (const LinearSolveError&) {
    return nullptr;
  }
}

struct Rayleigh {
  double lambda;
  double residual;
};

Rayleigh rayleigh(const SparseMatrix& a, const SparseMatrix& m, const Vector& v) {
  const Vector av = a.multiply(v);
  const Vector mv = m.multiply(v);
  const double lambda = dot(v, av) / dot(v, mv);
  Vector r = av;
  axpy(-lambda, mv, r);
  return {lambda, norm2(r) / (norm2(mv) * (1.0 + std::abs(lambda)))};
}

void m_normalize(const SparseMatrix& m, Vector& v) {
  const double s = std::sqrt(dot(v, m.multiply(v)));
  for (double& x : v) x /= s;
  // sign convention: largest entry positive
  const auto it = std::max_element(v.begin(), v.end(), [](double p, double q) { return std::abs(p) < std::abs(q); });
  if (it != v.end() && *it < 0.0)
    for (double& x : v) x = -x;
}

GeneralizedEigenResult dense_fallback(const SparseMatrix& a, const SparseMatrix& m) {
  const int n = a.rows();
  const DenseMatrix l = cholesky(m.to_dense());
  const DenseMatrix ad = a.to_dense();
  // C = L^{-1} A L^{-T}
  DenseMatrix y(n, n);  // y = L^{-1} A
  for (int col = 0; col < n; ++col) {
    for (int i = 0; i < n; ++i) {
      double s = ad(i, col);
      for (int k = 0; k < i; ++k) s -= l(i, k) * y(k, col);
      y(i, col) = s / l(i, i);
    }
  }
  DenseMatrix c(n, n);  // c = y L^{-T}, solve row-wise
  for (int row = 0; row < n; ++row) {
    for (int j = 0; j < n; ++j) {
      double s = y(row, j);
      for (int k = 0; k < j; ++k) s -= c(row, k) * l(j, k);
      c(row, j) = s / l(j, j);
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) c(i, j) = c(j, i) = 0.5 * (c(i, j) + c(j, i));
  const SymmetricEigen eig = symmetric_eigen(c);
  Vector v(n);
  for (int i = n - 1; i >= 0; --i) {
    double s = eig.vectors(i, 0);
    for (int k = i + 1; k < n; ++k) s -= l(k, i) * v[k];
    v[i] = s / l(i, i);
  }
  m_normalize(m, v);
  const Rayleigh rq = rayleigh(a, m, v);
  return {rq.lambda, v, rq.residual, 0, true};
}

}  // namespace

GeneralizedEigenResult smallest_generalized_eigenvalue(const SparseMatrix& a, const SparseMatrix& m,
                                                       std::optional<double> shift_guess, double tol) {
  const int n = a.rows();
  if (n == 0 || a.cols() != n || m.rows() != n || m.cols() != n) {
    throw std::invalid_argument("smallest_generalized_eigenvalue: need square matrices of equal non-zero size");
  }
  if (!(tol > 0.0)) throw std::invalid_argument("smallest_generalized_eigenvalue: tol must be positive");

  double sigma = 0.0;
  if (shift_guess) {
    sigma = *shift_guess;
  } else {
    const Vector da = a.diagonal();
    const Vector dm = m.diagonal();
    sigma = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) sigma = std::min(sigma, da[i] / dm[i]);
  }

  // Push the shift below the spectrum: A - sigma M must have no negative pivots.
  std::shared_ptr<BandedLU> lu;
  double step = 0.5 * std::max(1.0, std::abs(sigma));
  for (int attempt = 0; attempt < 200; ++attempt) {
    lu = factor_shifted(a, m, sigma);
    if (lu && lu->negative_pivots() == 0) break;
    if (!lu && attempt < 5) {
      // breakdown: the shift sits on an eigenvalue, perturb it slightly
      sigma -= 1e-8 * (1.0 + std::abs(sigma));
      continue;
    }
    lu.reset();
    sigma -= step;
    step *= 2.0;
  }
  if (!lu) throw std::runtime_error("smallest_generalized_eigenvalue: could not find a shift below the spectrum");

  double lo = sigma;
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = 1.0 + 0.25 * std::sin(1.0 + 0.7 * i);
  m_normalize(m, v);

  GeneralizedEigenResult result;
  int iterations = 0;
  for (int outer = 0; outer < 80; ++outer) {
    Rayleigh rq{0.0, 1.0};
    for (int inner = 0; inner < 6; ++inner) {
      v = lu->solve(m.multiply(v));
      m_normalize(m, v);
      ++iterations;
      rq = rayleigh(a, m, v);
      if (rq.residual <= tol) break;
    }
    if (rq.residual <= tol) {
      // The pair must be the lowest one: no eigenvalue may lie below lambda - eta.
      const double eta = 1e-6 * (1.0 + std::abs(rq.lambda));
      auto check = factor_shifted(a, m, rq.lambda - eta);
      if (!check || check->negative_pivots() == 0) {
        result = {rq.lambda, v, rq.residual, iterations, false};
        return result;
      }
    }
    // Move the shift towards the Rayleigh estimate while keeping it below the spectrum.
    double candidate = 0.5 * (lo + rq.lambda);
    std::shared_ptr<BandedLU> next;
    for (int tries = 0; tries < 60; ++tries) {
      next = factor_shifted(a, m, candidate);
      if (next && next->negative_pivots() == 0) break;
      next.reset();
      candidate = 0.5 * (lo + candidate);
    }
    if (!next) break;
    lo = candidate;
    lu = next;
  }

  if (n < 600) {
    result = dense_fallback(a, m);
    return result;
  }
  throw std::runtime_error("smallest_generalized_eigenvalue: inverse iteration did not converge");
}

}  // namespace dgac
