#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "dgac/fe_space.hpp"
#include "dgac/sparse.hpp"

namespace dgac {

/// Tabulated shape data at the quadrature points of every cell.
///
/// Arrays are flattened cell-major: point index p = c * points_per_cell + q.
class CellQuadrature {
 public:
  /// `order` is the polynomial degree integrated exactly on each cell.
  CellQuadrature(std::shared_ptr<const FeSpace> space, int order);

  const FeSpace& space() const { return *space_; }
  int order() const { return order_; }
  int points_per_cell() const { return nq_; }
  int total_points() const { return static_cast<int>(jxw_.size()); }

  double jxw(int p) const { return jxw_[p]; }
  const Point& point(int p) const { return xyz_[p]; }
  double phi(int p, int a) const { return phi_[p * nloc_ + a]; }
  double dphi(int p, int a, int d) const { return dphi_[(p * nloc_ + a) * dim_ + d]; }

  /// Values of a free-dof vector at all quadrature points.
  Vector values(const Vector& u) const;
  /// Gradients (dim per point) of a free-dof vector at all quadrature points.
  Vector gradients(const Vector& u) const;
  /// Values of a pointwise function at all quadrature points.
  Vector sample(const std::function<double(const Point&)>& g) const;

  /// Free-dof load vector (g, phi_i) from point values of g.
  Vector load(const Vector& point_values) const;
  /// Free-dof load vector (G, grad phi_i) from point gradients (dim per point).
  Vector load_gradient(const Vector& point_gradients) const;
  /// Integral of point values over the domain.
  double integrate(const Vector& point_values) const;

 private:
  std::shared_ptr<const FeSpace> space_;
  int order_;
  int dim_;
  int nloc_;
  int nq_;
  std::vector<double> jxw_;
  std::vector<Point> xyz_;
  std::vector<double> phi_;
  std::vector<double> dphi_;
};

/// Spatial operators on the free dofs: the mass and stiffness matrices share
/// one sparsity pattern, so weighted masses can be produced as value arrays
/// aligned with it.
class SpatialOperators {
 public:
  /// Default quadrature order is 4 l, exact for (u^3, phi) with u, phi in U_h.
  explicit SpatialOperators(std::shared_ptr<const FeSpace> space, int quadrature_order = 0);

  const FeSpace& space() const { return *space_; }
  std::shared_ptr<const FeSpace> space_ptr() const { return space_; }
  const CellQuadrature& quadrature() const { return quad_; }
  int size() const { return space_->free_count(); }

  const SparseMatrix& mass() const { return mass_; }
  const SparseMatrix& stiffness() const { return stiffness_; }

  /// Values of the mass matrix weighted by w (given at quadrature points),
  /// aligned with mass().values().
  std::vector<double> weighted_mass_values(const Vector& weight_at_points) const;
  SparseMatrix weighted_mass(const Vector& weight_at_points) const;

  /// Solve M x = b with the cached factorization.
  Vector solve_mass(const Vector& b) const;

  /// L2 inner product and H1 seminorm squared via the assembled matrices.
  double mass_inner(const Vector& a, const Vector& b) const;
  double stiffness_inner(const Vector& a, const Vector& b) const;

 private:
  std::shared_ptr<const FeSpace> space_;
  CellQuadrature quad_;
  SparseMatrix mass_;
  SparseMatrix stiffness_;
  std::vector<int> local_to_pattern_;  // per cell, nloc x nloc, -1 for Dirichlet pairs
  std::shared_ptr<const BandedLU> mass_lu_;
};

}  // namespace dgac
