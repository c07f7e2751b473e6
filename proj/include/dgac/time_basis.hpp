#pragma once

#include <memory>
#include <vector>

#include "dgac/dense.hpp"
#include "dgac/quadrature.hpp"

namespace dgac {

/// Partition 0 = t^0 < t^1 < ... < t^N = T of the time interval.
class TimePartition {
 public:
  explicit TimePartition(std::vector<double> endpoints);
  static TimePartition uniform(double final_time, int slabs);

  int slab_count() const { return static_cast<int>(endpoints_.size()) - 1; }
  const std::vector<double>& endpoints() const { return endpoints_; }
  double start(int n) const { return endpoints_[n - 1]; }  // slabs are numbered 1..N
  double end(int n) const { return endpoints_[n]; }
  double tau(int n) const { return endpoints_[n] - endpoints_[n - 1]; }
  double max_tau() const { return max_tau_; }
  double final_time() const { return endpoints_.back(); }
  /// Quasi-uniformity ratio min tau_n / max tau_n.
  double theta() const { return theta_; }

 private:
  std::vector<double> endpoints_;
  double max_tau_ = 0.0;
  double theta_ = 1.0;
};

/// Nodal Lagrange basis of degree k on [0, 1] at right-Radau points, with a
/// Gauss-Legendre rule and the basis tabulated at its points.
class TimeBasis {
 public:
  TimeBasis(int degree, int quadrature_points, bool allow_under_integration = false);

  int degree() const { return k_; }
  int size() const { return k_ + 1; }
  const std::vector<double>& nodes() const { return nodes_; }
  const QuadratureRule1D& quadrature() const { return quad_; }
  int quadrature_size() const { return quad_.size(); }
  /// Whether the rule integrates degree 4k + 2 exactly.
  bool exact_for_nonlinearity() const { return 2 * quad_.size() - 1 >= 4 * k_ + 2; }

  double value(int i, double s) const;
  double derivative(int i, double s) const;
  std::vector<double> values_at(double s) const;
  std::vector<double> derivatives_at(double s) const;

  /// chi_i at quadrature point q.
  double table(int q, int i) const { return values_[q * (k_ + 1) + i]; }
  double derivative_table(int q, int i) const { return derivs_[q * (k_ + 1) + i]; }
  const std::vector<double>& left_values() const { return left_; }
  const std::vector<double>& right_values() const { return right_; }

 private:
  int k_;
  std::vector<double> nodes_;
  std::vector<double> denominators_;
  QuadratureRule1D quad_;
  std::vector<double> values_;
  std::vector<double> derivs_;
  std::vector<double> left_;
  std::vector<double> right_;
};

/// Minimum Gauss point count for exact treatment of the cubic term: ceil((4k+3)/2).
int default_time_quadrature_points(int k);

/// Build a basis; quad_points = 0 selects the default. Rules below the default
/// are rejected unless under-integration is explicitly allowed.
std::shared_ptr<const TimeBasis> make_time_basis(int k, int quad_points = 0, bool allow_under_integration = false);

/// Slab coupling matrices on the reference interval:
///   G_ij = chi_i(1) chi_j(1) - int chi_j chi_i',  Theta_ij = int chi_i chi_j,
///   left_load_i = chi_i(0).
struct DgTimeOperators {
  DenseMatrix G;
  DenseMatrix Theta;
  std::vector<double> left_load;
};
DgTimeOperators make_time_operators(const TimeBasis& basis);

}  // namespace dgac
