#include "dgac/dg_solution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dgac {

std::shared_ptr<const Discretization> make_discretization(std::shared_ptr<const SpatialOperators> space,
                                                          TimePartition partition,
                                                          std::shared_ptr<const TimeBasis> basis) {
  if (!space || !basis) throw std::invalid_argument("make_discretization: missing space or basis");
  DgTimeOperators ops = make_time_operators(*basis);
  return std::make_shared<const Discretization>(
      Discretization{std::move(space), std::move(partition), std::move(basis), std::move(ops)});
}

namespace {

Vector combine(const std::vector<Vector>& coeffs, const std::vector<double>& weights) {
  Vector out(coeffs.front().size(), 0.0);
  for (std::size_t j = 0; j < coeffs.size(); ++j) axpy(weights[j], coeffs[j], out);
  return out;
}

Vector difference(const Vector& a, const Vector& b) {
  Vector d(a);
  axpy(-1.0, b, d);
  return d;
}

}  // namespace

SlabSolution make_slab_solution(const TimeBasis& basis, int index, std::vector<Vector> coefficients,
                                Vector incoming, TimeDirection direction) {
  if (static_cast<int>(coefficients.size()) != basis.size())
    throw std::invalid_argument("make_slab_solution: expected " + std::to_string(basis.size()) + " coefficient vectors");
  for (const auto& c : coefficients)
    if (c.size() != incoming.size()) throw std::invalid_argument("make_slab_solution: inconsistent vector sizes");
  SlabSolution s;
  s.index = index;
  s.left_trace = combine(coefficients, basis.left_values());
  s.right_trace = coefficients.back();  // last Radau node is s = 1
  s.coefficients = std::move(coefficients);
  s.incoming = std::move(incoming);
  s.jump = direction == TimeDirection::forward ? difference(s.left_trace, s.incoming)
                                               : difference(s.incoming, s.right_trace);
  return s;
}

DgSolution::DgSolution(std::shared_ptr<const Discretization> disc, Vector initial, TimeDirection direction)
    : disc_(std::move(disc)), initial_(std::move(initial)), direction_(direction) {
  if (!disc_) throw std::invalid_argument("DgSolution: missing discretization");
  if (static_cast<int>(initial_.size()) != disc_->free_dofs())
    throw std::invalid_argument("DgSolution: initial vector has wrong size");
  slabs_.resize(disc_->partition.slab_count());
  for (int n = 1; n <= slab_count(); ++n) {
    slabs_[n - 1] = make_slab_solution(*disc_->basis, n, std::vector<Vector>(disc_->time_nodes(), Vector(initial_.size(), 0.0)),
                                       Vector(initial_.size(), 0.0), direction_);
  }
}

void DgSolution::set_slab(SlabSolution s) {
  if (s.index < 1 || s.index > slab_count()) throw std::out_of_range("DgSolution::set_slab: slab index out of range");
  slabs_[s.index - 1] = std::move(s);
}

Vector DgSolution::value(int n, double s) const { return combine(slab(n).coefficients, disc_->basis->values_at(s)); }

Vector DgSolution::time_derivative(int n, double s) const {
  Vector d = combine(slab(n).coefficients, disc_->basis->derivatives_at(s));
  const double inv_tau = 1.0 / disc_->partition.tau(n);
  for (double& x : d) x *= inv_tau;
  return d;
}

Vector DgSolution::at_time(double t) const {
  const auto& ends = disc_->partition.endpoints();
  if (t < ends.front() || t > ends.back()) throw std::out_of_range("DgSolution::at_time: time outside [0, T]");
  if (direction_ == TimeDirection::forward) {
    if (t == ends.front()) return initial_;
    // first n with t <= t^n
    const auto it = std::lower_bound(ends.begin() + 1, ends.end(), t);
    const int n = static_cast<int>(it - ends.begin());
    return value(n, (t - disc_->partition.start(n)) / disc_->partition.tau(n));
  }
  if (t == ends.back()) return initial_;
  // last n with t^{n-1} <= t
  const auto it = std::upper_bound(ends.begin(), ends.end() - 1, t);
  const int n = static_cast<int>(it - ends.begin());
  return value(n, (t - disc_->partition.start(n)) / disc_->partition.tau(n));
}

double DgSolution::chaining_defect() const {
  double worst = 0.0;
  auto check = [&](const Vector& a, const Vector& b) {
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  };
  const int N = slab_count();
  for (int n = 1; n <= N; ++n) {
    if (direction_ == TimeDirection::forward) {
      check(slab(n).incoming, n == 1 ? initial_ : slab(n - 1).right_trace);
    } else {
      check(slab(n).incoming, n == N ? initial_ : slab(n + 1).left_trace);
    }
  }
  return worst;
}

Vector pack_slab(const std::vector<Vector>& per_node) {
  const int nt = static_cast<int>(per_node.size());
  const std::size_t nf = per_node.front().size();
  Vector packed(nf * nt);
  for (std::size_t m = 0; m < nf; ++m)
    for (int i = 0; i < nt; ++i) packed[m * nt + i] = per_node[i][m];
  return packed;
}

std::vector<Vector> unpack_slab(const Vector& packed, int nt) {
  const std::size_t nf = packed.size() / nt;
  std::vector<Vector> out(nt, Vector(nf));
  for (std::size_t m = 0; m < nf; ++m)
    for (int i = 0; i < nt; ++i) out[i][m] = packed[m * nt + i];
  return out;
}

SparseMatrix assemble_block_matrix(const SparseMatrix& pattern, int nt, const std::vector<std::vector<double>>& blocks) {
  if (static_cast<int>(blocks.size()) != nt * nt) throw std::invalid_argument("assemble_block_matrix: need nt*nt blocks");
  const int nf = pattern.rows();
  const auto& rp = pattern.row_ptr();
  const auto& ci = pattern.col_idx();
  std::vector<int> row_ptr(static_cast<std::size_t>(nf) * nt + 1, 0);
  std::vector<int> cols;
  std::vector<double> vals;
  const std::size_t total = static_cast<std::size_t>(pattern.nnz()) * nt * nt;
  cols.reserve(total);
  vals.reserve(total);
  for (int m = 0; m < nf; ++m) {
    for (int i = 0; i < nt; ++i) {
      for (int p = rp[m]; p < rp[m + 1]; ++p) {
        for (int j = 0; j < nt; ++j) {
          cols.push_back(ci[p] * nt + j);
          vals.push_back(blocks[i * nt + j][p]);
        }
      }
      row_ptr[m * nt + i + 1] = static_cast<int>(cols.size());
    }
  }
  return SparseMatrix(nf * nt, nf * nt, std::move(row_ptr), std::move(cols), std::move(vals));
}

Vector apply_block(const SparseMatrix& pattern, int nt, const std::vector<std::vector<double>>& blocks,
                   const Vector& packed) {
  const int nf = pattern.rows();
  const auto& rp = pattern.row_ptr();
  const auto& ci = pattern.col_idx();
  Vector out(packed.size(), 0.0);
  for (int m = 0; m < nf; ++m) {
    for (int i = 0; i < nt; ++i) {
      double s = 0.0;
      for (int p = rp[m]; p < rp[m + 1]; ++p)
        for (int j = 0; j < nt; ++j) s += blocks[i * nt + j][p] * packed[ci[p] * nt + j];
      out[m * nt + i] = s;
    }
  }
  return out;
}

}  // namespace dgac
