#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "dgac/mesh.hpp"

namespace dgac {

using Vector = std::vector<double>;

/// Conforming Lagrange space of degree 1 or 2 with homogeneous Dirichlet data.
///
/// Global dofs are numbered vertices first, then edge midpoints (P2). Linear
/// algebra works on the free (non-Dirichlet) dofs only; their numbering is a
/// reverse Cuthill-McKee ordering so that slab systems stay narrowly banded.
class FeSpace {
 public:
  FeSpace(std::shared_ptr<const Mesh> mesh, int degree);

  const Mesh& mesh() const { return *mesh_; }
  std::shared_ptr<const Mesh> mesh_ptr() const { return mesh_; }
  int degree() const { return degree_; }
  int dimension() const { return mesh_->dimension(); }

  int dof_count() const { return static_cast<int>(dof_coords_.size()); }
  int free_count() const { return static_cast<int>(free_dofs_.size()); }
  int dofs_per_cell() const { return dofs_per_cell_; }

  const std::vector<Point>& dof_coordinates() const { return dof_coords_; }
  const std::vector<int>& cell_dofs(int c) const { return cell_dofs_[c]; }
  const std::vector<int>& dirichlet_dofs() const { return dirichlet_dofs_; }
  bool is_dirichlet(int dof) const { return free_index_[dof] < 0; }

  /// Free index of a global dof, or -1 for Dirichlet dofs.
  int free_index(int dof) const { return free_index_[dof]; }
  /// Global dof of a free index.
  int free_dof(int free) const { return free_dofs_[free]; }

  /// Expand a free-dof vector to all dofs (zeros on the boundary).
  Vector expand(const Vector& free_values) const;
  /// Restrict an all-dof vector to free dofs.
  Vector restrict_to_free(const Vector& values) const;

  /// Reference-cell shape function values at a reference point.
  void shape_values(const Point& ref, double* values) const;
  /// Reference-cell shape function gradients, laid out [a * dim + d].
  void shape_gradients(const Point& ref, double* gradients) const;

 private:
  std::shared_ptr<const Mesh> mesh_;
  int degree_;
  int dofs_per_cell_;
  std::vector<Point> dof_coords_;
  std::vector<std::vector<int>> cell_dofs_;
  std::vector<int> dirichlet_dofs_;
  std::vector<int> free_index_;
  std::vector<int> free_dofs_;
};

/// Build the Lagrange space of degree 1 or 2 on a mesh.
std::shared_ptr<const FeSpace> build_space(std::shared_ptr<const Mesh> mesh, int degree_l);

/// Nodal interpolant of g restricted to free dofs.
Vector interpolate(const FeSpace& space, const std::function<double(const Point&)>& g);

}  // namespace dgac
