#include "dgac/time_basis.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace dgac {

TimePartition::TimePartition(std::vector<double> endpoints) : endpoints_(std::move(endpoints)) {
  if (endpoints_.size() < 2) throw std::invalid_argument("TimePartition: need at least one slab");
  if (endpoints_.front() != 0.0) throw std::invalid_argument("TimePartition: partition must start at t = 0");
  double min_tau = std::numeric_limits<double>::infinity();
  for (std::size_t n = 1; n < endpoints_.size(); ++n) {
    const double tau = endpoints_[n] - endpoints_[n - 1];
    if (!(tau > 0.0)) throw std::invalid_argument("TimePartition: endpoints must be strictly increasing");
    min_tau = std::min(min_tau, tau);
    max_tau_ = std::max(max_tau_, tau);
  }
  theta_ = min_tau / max_tau_;
}

TimePartition TimePartition::uniform(double final_time, int slabs) {
  if (slabs < 1) throw std::invalid_argument("TimePartition::uniform: slab count must be positive");
  if (!(final_time > 0.0)) throw std::invalid_argument("TimePartition::uniform: final time must be positive");
  std::vector<double> t(slabs + 1);
  for (int n = 0; n <= slabs; ++n) t[n] = final_time * n / slabs;
  t.back() = final_time;
  return TimePartition(std::move(t));
}

int default_time_quadrature_points(int k) { return (4 * k + 3 + 1) / 2; }

TimeBasis::TimeBasis(int degree, int quadrature_points, bool allow_under_integration) : k_(degree) {
  if (k_ < 0) throw std::invalid_argument("TimeBasis: degree must be non-negative");
  if (quadrature_points < 1) throw std::invalid_argument("TimeBasis: need at least one quadrature point");
  if (!allow_under_integration && quadrature_points < default_time_quadrature_points(k_)) {
    throw std::invalid_argument("TimeBasis: " + std::to_string(quadrature_points) +
                                " Gauss points do not integrate degree 4k+2 = " + std::to_string(4 * k_ + 2) +
                                " exactly (need " + std::to_string(default_time_quadrature_points(k_)) + ")");
  }
  nodes_ = right_radau_points(k_ + 1);
  denominators_.assign(k_ + 1, 1.0);
  for (int i = 0; i <= k_; ++i)
    for (int j = 0; j <= k_; ++j)
      if (j != i) denominators_[i] *= nodes_[i] - nodes_[j];

  quad_ = gauss_legendre(quadrature_points);
  const int nq = quad_.size();
  values_.resize(nq * (k_ + 1));
  derivs_.resize(nq * (k_ + 1));
  for (int q = 0; q < nq; ++q) {
    for (int i = 0; i <= k_; ++i) {
      values_[q * (k_ + 1) + i] = value(i, quad_.points[q]);
      derivs_[q * (k_ + 1) + i] = derivative(i, quad_.points[q]);
    }
  }
  left_ = values_at(0.0);
  right_ = values_at(1.0);
}

double TimeBasis::value(int i, double s) const {
  double p = 1.0;
  for (int j = 0; j <= k_; ++j)
    if (j != i) p *= s - nodes_[j];
  return p / denominators_[i];
}

double TimeBasis::derivative(int i, double s) const {
  double sum = 0.0;
  for (int m = 0; m <= k_; ++m) {
    if (m == i) continue;
    double p = 1.0;
    for (int j = 0; j <= k_; ++j)
      if (j != i && j != m) p *= s - nodes_[j];
    sum += p;
  }
  return sum / denominators_[i];
}

std::vector<double> TimeBasis::values_at(double s) const {
  std::vector<double> v(k_ + 1);
  for (int i = 0; i <= k_; ++i) v[i] = value(i, s);
  return v;
}

std::vector<double> TimeBasis::derivatives_at(double s) const {
  std::vector<double> v(k_ + 1);
  for (int i = 0; i <= k_; ++i) v[i] = derivative(i, s);
  return v;
}

std::shared_ptr<const TimeBasis> make_time_basis(int k, int quad_points, bool allow_under_integration) {
  if (k < 0) throw std::invalid_argument("make_time_basis: degree must be non-negative");
  return std::make_shared<const TimeBasis>(k, quad_points > 0 ? quad_points : default_time_quadrature_points(k),
                                           allow_under_integration);
}

DgTimeOperators make_time_operators(const TimeBasis& basis) {
  const int nt = basis.size();
  DgTimeOperators ops{DenseMatrix(nt, nt), DenseMatrix(nt, nt), basis.left_values()};
  const auto& w = basis.quadrature().weights;
  for (int i = 0; i < nt; ++i) {
    for (int j = 0; j < nt; ++j) {
      double theta = 0.0;
      double cross = 0.0;  // int chi_j chi_i'
      for (int q = 0; q < basis.quadrature_size(); ++q) {
        theta += w[q] * basis.table(q, i) * basis.table(q, j);
        cross += w[q] * basis.table(q, j) * basis.derivative_table(q, i);
      }
      ops.Theta(i, j) = theta;
      ops.G(i, j) = basis.right_values()[i] * basis.right_values()[j] - cross;
    }
  }
  return ops;
}

}  // namespace dgac
