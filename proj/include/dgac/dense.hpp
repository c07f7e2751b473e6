#pragma once

#include <vector>

namespace dgac {

using Vector = std::vector<double>;

/// Small row-major dense matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(int rows, int cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static DenseMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double& operator()(int i, int j) { return data_[i * cols_ + j]; }
  double operator()(int i, int j) const { return data_[i * cols_ + j]; }
  const double* data() const { return data_.data(); }

  Vector multiply(const Vector& x) const;
  DenseMatrix transpose() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

/// LU factorization with partial pivoting; throws on an exactly singular pivot.
class DenseLU {
 public:
  explicit DenseLU(DenseMatrix a);

  Vector solve(Vector b) const;
  int size() const { return lu_.rows(); }

 private:
  DenseMatrix lu_;
  std::vector<int> pivots_;
};

/// Cholesky factor L (lower) of a symmetric positive definite matrix.
DenseMatrix cholesky(const DenseMatrix& a);

/// Eigenvalues (ascending) and column eigenvectors of a symmetric matrix by
/// cyclic Jacobi rotations.
struct SymmetricEigen {
  Vector values;
  DenseMatrix vectors;
};
SymmetricEigen symmetric_eigen(DenseMatrix a, double tol = 1e-14, int max_sweeps = 100);

}  // namespace dgac
