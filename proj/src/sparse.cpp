#include "dgac/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

namespace dgac {

double dot(const Vector& a, const Vector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const Vector& a) { return std::sqrt(dot(a, a)); }

void axpy(double alpha, const Vector& x, Vector& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

SparseMatrix::SparseMatrix(int rows, int cols, std::vector<int> row_ptr, std::vector<int> col_idx,
                           std::vector<double> values)
    : rows_(rows), cols_(cols), row_ptr_(std::move(row_ptr)), col_idx_(std::move(col_idx)), values_(std::move(values)) {
  if (static_cast<int>(row_ptr_.size()) != rows_ + 1 || col_idx_.size() != values_.size() ||
      row_ptr_.back() != static_cast<int>(values_.size())) {
    throw std::invalid_argument("SparseMatrix: inconsistent compressed row arrays");
  }
  for (int i = 0; i < rows_; ++i) {
    for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
      if (col_idx_[p] < 0 || col_idx_[p] >= cols_) throw std::invalid_argument("SparseMatrix: column index out of range");
      if (p > row_ptr_[i] && col_idx_[p] <= col_idx_[p - 1]) {
        throw std::invalid_argument("SparseMatrix: column indices must be strictly increasing within a row");
      }
    }
  }
}

SparseMatrix SparseMatrix::with_values(std::vector<double> values) const {
  if (values.size() != values_.size()) throw std::invalid_argument("SparseMatrix::with_values: size mismatch");
  SparseMatrix out = *this;
  out.values_ = std::move(values);
  return out;
}

Vector SparseMatrix::multiply(const Vector& x) const {
  Vector y(rows_, 0.0);
  multiply_add(x, 1.0, y);
  return y;
}

void SparseMatrix::multiply_add(const Vector& x, double alpha, Vector& y) const {
  for (int i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) s += values_[p] * x[col_idx_[p]];
    y[i] += alpha * s;
  }
}

double SparseMatrix::at(int i, int j) const {
  const auto begin = col_idx_.begin() + row_ptr_[i];
  const auto end = col_idx_.begin() + row_ptr_[i + 1];
  const auto it = std::lower_bound(begin, end, j);
  if (it == end || *it != j) return 0.0;
  return values_[it - col_idx_.begin()];
}

Vector SparseMatrix::diagonal() const {
  Vector d(std::min(rows_, cols_), 0.0);
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = at(static_cast<int>(i), static_cast<int>(i));
  return d;
}

SparseMatrix SparseMatrix::transpose() const {
  std::vector<int> counts(cols_ + 1, 0);
  for (int c : col_idx_) ++counts[c + 1];
  for (int j = 0; j < cols_; ++j) counts[j + 1] += counts[j];
  std::vector<int> ptr = counts;
  std::vector<int> idx(nnz());
  std::vector<double> val(nnz());
  for (int i = 0; i < rows_; ++i) {
    for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
      const int dst = ptr[col_idx_[p]]++;
      idx[dst] = i;
      val[dst] = values_[p];
    }
  }
  return SparseMatrix(cols_, rows_, std::move(counts), std::move(idx), std::move(val));
}

DenseMatrix SparseMatrix::to_dense() const {
  DenseMatrix d(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) d(i, col_idx_[p]) = values_[p];
  return d;
}

int SparseMatrix::lower_bandwidth() const {
  int kl = 0;
  for (int i = 0; i < rows_; ++i)
    for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) kl = std::max(kl, i - col_idx_[p]);
  return kl;
}

int SparseMatrix::upper_bandwidth() const {
  int ku = 0;
  for (int i = 0; i < rows_; ++i)
    for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) ku = std::max(ku, col_idx_[p] - i);
  return ku;
}

void TripletBuilder::add(int i, int j, double v) {
  if (i < 0 || i >= rows_ || j < 0 || j >= cols_) throw std::out_of_range("TripletBuilder::add: index out of range");
  entries_.push_back({i, j, v});
}

SparseMatrix TripletBuilder::finalize() const {
  std::vector<Entry> sorted = entries_;
  std::sort(sorted.begin(), sorted.end(), [](const Entry& a, const Entry& b) { return a.i != b.i ? a.i < b.i : a.j < b.j; });
  std::vector<int> ptr(rows_ + 1, 0);
  std::vector<int> idx;
  std::vector<double> val;
  idx.reserve(sorted.size());
  val.reserve(sorted.size());
  for (std::size_t p = 0; p < sorted.size();) {
    const int i = sorted[p].i;
    const int j = sorted[p].j;
    double v = 0.0;
    while (p < sorted.size() && sorted[p].i == i && sorted[p].j == j) v += sorted[p++].v;
    idx.push_back(j);
    val.push_back(v);
    ++ptr[i + 1];
  }
  for (int i = 0; i < rows_; ++i) ptr[i + 1] += ptr[i];
  return SparseMatrix(rows_, cols_, std::move(ptr), std::move(idx), std::move(val));
}

BandedLU::BandedLU(const SparseMatrix& a, bool pivoting)
    : n_(a.rows()),
      kl_(a.lower_bandwidth()),
      ku_(a.upper_bandwidth()),
      kv_(pivoting ? kl_ + ku_ : ku_),
      ldab_(kv_ + kl_ + 1),
      pivoting_(pivoting),
      band_(static_cast<std::size_t>(ldab_) * n_, 0.0),
      pivots_(n_) {
  if (a.rows() != a.cols()) throw std::invalid_argument("BandedLU: matrix must be square");
  const auto& ptr = a.row_ptr();
  const auto& idx = a.col_idx();
  const auto& val = a.values();
  for (int i = 0; i < n_; ++i)
    for (int p = ptr[i]; p < ptr[i + 1]; ++p) ab(i, idx[p]) = val[p];

  int ju = 0;
  for (int j = 0; j < n_; ++j) {
    const int km = std::min(kl_, n_ - 1 - j);
    int jp = 0;
    if (pivoting_) {
      double best = std::abs(ab(j, j));
      for (int r = 1; r <= km; ++r) {
        if (std::abs(ab(j + r, j)) > best) {
          best = std::abs(ab(j + r, j));
          jp = r;
        }
      }
    }
    pivots_[j] = j + jp;
    const double pivot = ab(j + jp, j);
    if (pivot == 0.0 || !std::isfinite(pivot)) {
      throw LinearSolveError("BandedLU: singular matrix (zero pivot at column " + std::to_string(j) + ")",
                             std::numeric_limits<double>::infinity());
    }
    const int last = pivoting_ ? std::max(ju, std::min(j + ku_ + jp, n_ - 1)) : std::min(j + ku_, n_ - 1);
    ju = last;
    if (jp != 0) {
      for (int c = j; c <= last; ++c) std::swap(ab(j, c), ab(j + jp, c));
    }
    if (km > 0) {
      const double inv = 1.0 / ab(j, j);
      for (int r = 1; r <= km; ++r) ab(j + r, j) *= inv;
      for (int c = j + 1; c <= last; ++c) {
        const double ujc = ab(j, c);
        if (ujc == 0.0) continue;
        for (int r = 1; r <= km; ++r) ab(j + r, c) -= ab(j + r, j) * ujc;
      }
    }
  }
}

Vector BandedLU::solve(Vector b) const {
  if (static_cast<int>(b.size()) != n_) throw std::invalid_argument("BandedLU::solve: size mismatch");
  for (int j = 0; j < n_; ++j) {
    const int km = std::min(kl_, n_ - 1 - j);
    if (pivots_[j] != j) std::swap(b[j], b[pivots_[j]]);
    const double bj = b[j];
    if (bj == 0.0) continue;
    for (int r = 1; r <= km; ++r) b[j + r] -= ab(j + r, j) * bj;
  }
  const int width = pivoting_ ? kl_ + ku_ : ku_;
  for (int i = n_ - 1; i >= 0; --i) {
    double s = b[i];
    const int cmax = std::min(n_ - 1, i + width);
    for (int c = i + 1; c <= cmax; ++c) s -= ab(i, c) * b[c];
    b[i] = s / ab(i, i);
  }
  return b;
}

int BandedLU::negative_pivots() const {
  int count = 0;
  for (int i = 0; i < n_; ++i) count += ab(i, i) < 0.0;
  return count;
}

double BandedLU::min_abs_pivot() const {
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_; ++i) m = std::min(m, std::abs(ab(i, i)));
  return m;
}

LinearMethod parse_linear_method(const std::string& name) {
  if (name == "conjugate_gradient" || name == "cg") return LinearMethod::conjugate_gradient;
  if (name == "bicgstab") return LinearMethod::bicgstab;
  if (name == "dense_lu") return LinearMethod::dense_lu;
  if (name == "banded_lu") return LinearMethod::banded_lu;
  throw std::invalid_argument("unknown linear method '" + name + "'");
}

std::string to_string(LinearMethod method) {
  switch (method) {
    case LinearMethod::conjugate_gradient: return "conjugate_gradient";
    case LinearMethod::bicgstab: return "bicgstab";
    case LinearMethod::dense_lu: return "dense_lu";
    case LinearMethod::banded_lu: return "banded_lu";
  }
  return "unknown";
}

namespace {

Vector jacobi_inverse(const SparseMatrix& a) {
  Vector d = a.diagonal();
  for (double& v : d) v = v != 0.0 ? 1.0 / v : 1.0;
  return d;
}

Vector conjugate_gradient(const SparseMatrix& a, const Vector& b, const LinearSolveConfig& cfg, double bnorm) {
  const int n = a.rows();
  const Vector dinv = jacobi_inverse(a);
  Vector x(n, 0.0);
  Vector r = b;
  Vector z(n);
  for (int i = 0; i < n; ++i) z[i] = dinv[i] * r[i];
  Vector p = z;
  double rz = dot(r, z);
  double rnorm = bnorm;
  for (int it = 0; it < cfg.max_iterations; ++it) {
    const Vector ap = a.multiply(p);
    const double pap = dot(p, ap);
    if (pap <= 0.0) break;
    const double alpha = rz / pap;
    axpy(alpha, p, x);
    axpy(-alpha, ap, r);
    rnorm = norm2(r);
    if (rnorm <= cfg.rel_tolerance * bnorm) return x;
    for (int i = 0; i < n; ++i) z[i] = dinv[i] * r[i];
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  // true residual for the report
  Vector res = b;
  a.multiply_add(x, -1.0, res);
  const double rel = norm2(res) / bnorm;
  if (rel <= cfg.rel_tolerance) return x;
  throw LinearSolveError("conjugate_gradient: no convergence, relative residual " + std::to_string(rel), rel);
}

Vector bicgstab(const SparseMatrix& a, const Vector& b, const LinearSolveConfig& cfg, double bnorm) {
  const int n = a.rows();
  const Vector dinv = jacobi_inverse(a);
  Vector x(n, 0.0);
  Vector r = b;
  const Vector r_hat = r;
  double rho = 1.0;
  double alpha = 1.0;
  double omega = 1.0;
  Vector v(n, 0.0);
  Vector p(n, 0.0);
  Vector phat(n);
  Vector shat(n);
  for (int it = 0; it < cfg.max_iterations; ++it) {
    const double rho_new = dot(r_hat, r);
    if (rho_new == 0.0) break;
    const double beta = (rho_new / rho) * (alpha / omega);
    rho = rho_new;
    for (int i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
    for (int i = 0; i < n; ++i) phat[i] = dinv[i] * p[i];
    v = a.multiply(phat);
    const double rv = dot(r_hat, v);
    if (rv == 0.0) break;
    alpha = rho / rv;
    Vector s = r;
    axpy(-alpha, v, s);
    if (norm2(s) <= cfg.rel_tolerance * bnorm) {
      axpy(alpha, phat, x);
      return x;
    }
    for (int i = 0; i < n; ++i) shat[i] = dinv[i] * s[i];
    const Vector t = a.multiply(shat);
    const double tt = dot(t, t);
    if (tt == 0.0) break;
    omega = dot(t, s) / tt;
    axpy(alpha, phat, x);
    axpy(omega, shat, x);
    r = s;
    axpy(-omega, t, r);
    if (norm2(r) <= cfg.rel_tolerance * bnorm) return x;
    if (omega == 0.0) break;
  }
  Vector res = b;
  a.multiply_add(x, -1.0, res);
  const double rel = norm2(res) / bnorm;
  if (rel <= cfg.rel_tolerance) return x;
  throw LinearSolveError("bicgstab: no convergence, relative residual " + std::to_string(rel), rel);
}

}  // namespace

Vector solve_linear(const SparseMatrix& a, const Vector& b, const LinearSolveConfig& cfg) {
  if (a.rows() != a.cols()) throw std::invalid_argument("solve_linear: matrix must be square");
  if (static_cast<int>(b.size()) != a.rows()) throw std::invalid_argument("solve_linear: right-hand side size mismatch");
  if (!(cfg.rel_tolerance > 0.0)) throw std::invalid_argument("solve_linear: rel_tolerance must be positive");
  const double bnorm = norm2(b);
  if (bnorm == 0.0) return Vector(b.size(), 0.0);
  switch (cfg.method) {
    case LinearMethod::conjugate_gradient: return conjugate_gradient(a, b, cfg, bnorm);
    case LinearMethod::bicgstab: return bicgstab(a, b, cfg, bnorm);
    case LinearMethod::dense_lu:
      try {
        return DenseLU(a.to_dense()).solve(b);
      } catch (const std::runtime_error& e) {
        throw LinearSolveError(e.what(), std::numeric_limits<double>::infinity());
      }
    case LinearMethod::banded_lu: return BandedLU(a).solve(b);
  }
  throw std::invalid_argument("solve_linear: unknown method");
}

void write_matrix_market(const SparseMatrix& a, std::ostream& os) {
  os << "%%MatrixMarket matrix coordinate real general\n";
  os << a.rows() << ' ' << a.cols() << ' ' << a.nnz() << '\n';
  os << std::setprecision(17);
  for (int i = 0; i < a.rows(); ++i)
    for (int p = a.row_ptr()[i]; p < a.row_ptr()[i + 1]; ++p)
      os << i + 1 << ' ' << a.col_idx()[p] + 1 << ' ' << a.values()[p] << '\n';
}

}  // namespace dgac
