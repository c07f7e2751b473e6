#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "dgac/dense.hpp"

namespace dgac {

/// Compressed sparse row matrix. Column indices are strictly increasing
/// within each row.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(int rows, int cols, std::vector<int> row_ptr, std::vector<int> col_idx, std::vector<double> values);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int nnz() const { return static_cast<int>(values_.size()); }

  const std::vector<int>& row_ptr() const { return row_ptr_; }
  const std::vector<int>& col_idx() const { return col_idx_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  /// Same sparsity pattern, new values.
  SparseMatrix with_values(std::vector<double> values) const;

  Vector multiply(const Vector& x) const;
  void multiply_add(const Vector& x, double alpha, Vector& y) const;
  double at(int i, int j) const;
  Vector diagonal() const;
  SparseMatrix transpose() const;
  DenseMatrix to_dense() const;

  /// Lower and upper bandwidth.
  int lower_bandwidth() const;
  int upper_bandwidth() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<int> row_ptr_{0};
  std::vector<int> col_idx_;
  std::vector<double> values_;
};

/// Coordinate-format builder; duplicate entries are summed on finalize.
class TripletBuilder {
 public:
  TripletBuilder(int rows, int cols) : rows_(rows), cols_(cols) {}

  void add(int i, int j, double v);
  void reserve(std::size_t n) { entries_.reserve(n); }
  SparseMatrix finalize() const;

 private:
  struct Entry {
    int i;
    int j;
    double v;
  };
  int rows_;
  int cols_;
  std::vector<Entry> entries_;
};

/// Band LU factorization (LAPACK gbtrf layout). With pivoting disabled it is
/// an LDU factorization whose pivot signs give the inertia of symmetric input.
class BandedLU {
 public:
  BandedLU(const SparseMatrix& a, bool pivoting = true);

  Vector solve(Vector b) const;
  int size() const { return n_; }
  /// Number of negative diagonal entries of U.
  int negative_pivots() const;
  /// Smallest |U_ii|.
  double min_abs_pivot() const;

 private:
  double& ab(int i, int j) { return band_[static_cast<std::size_t>(j) * ldab_ + (kv_ + i - j)]; }
  double ab(int i, int j) const { return band_[static_cast<std::size_t>(j) * ldab_ + (kv_ + i - j)]; }

  int n_;
  int kl_;
  int ku_;
  int kv_;
  int ldab_;
  bool pivoting_;
  std::vector<double> band_;
  std::vector<int> pivots_;
};

enum class LinearMethod { conjugate_gradient, bicgstab, dense_lu, banded_lu };

struct LinearSolveConfig {
  LinearMethod method = LinearMethod::banded_lu;
  double rel_tolerance = 1e-13;
  int max_iterations = 10000;
};

LinearMethod parse_linear_method(const std::string& name);
std::string to_string(LinearMethod method);

/// Thrown when an iterative solver misses its tolerance or a direct solver
/// meets a singular matrix.
class LinearSolveError : public std::runtime_error {
 public:
  LinearSolveError(const std::string& what, double achieved_residual)
      : std::runtime_error(what), achieved_residual_(achieved_residual) {}
  double achieved_residual() const { return achieved_residual_; }

 private:
  double achieved_residual_;
};

/// Solve A x = b. Krylov methods use Jacobi preconditioning and stop on
/// ||A x - b|| <= rel_tolerance ||b||.
Vector solve_linear(const SparseMatrix& a, const Vector& b, const LinearSolveConfig& cfg = {});

void write_matrix_market(const SparseMatrix& a, std::ostream& os);

// Small vector helpers.
double dot(const Vector& a, const Vector& b);
double norm2(const Vector& a);
void axpy(double alpha, const Vector& x, Vector& y);

}  // namespace dgac
