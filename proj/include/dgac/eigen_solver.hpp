#pragma once

#include <optional>

#include "dgac/sparse.hpp"

namespace dgac {

struct GeneralizedEigenResult {
  double lambda = 0.0;
  Vector vector;          // M-normalized
  double residual = 0.0;  // ||A v - lambda M v|| / (||M v|| (1 + |lambda|))
  int iterations = 0;
  bool used_dense_fallback = false;
};

/// Smallest eigenvalue of the symmetric pencil A v = lambda M v with M SPD.
///
/// The shift is first pushed below the spectrum (checked through the inertia
/// of A - sigma M), the gap is then narrowed by bisection on the inertia, and
/// shifted inverse iteration with Rayleigh-quotient updates yields the pair.
/// Systems with fewer than 600 unknowns fall back to a dense Cholesky-reduced
/// Jacobi eigensolve if the iteration does not converge.
GeneralizedEigenResult smallest_generalized_eigenvalue(const SparseMatrix& a, const SparseMatrix& m,
                                                       std::optional<double> shift_guess = std::nullopt,
                                                       double tol = 1e-10);

}  // namespace dgac
