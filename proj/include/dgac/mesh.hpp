#pragma once

#include <array>
#include <vector>

#include <json.hpp>

namespace dgac {

using Point = std::array<double, 2>;

/// Cell vertex indices: two entries are used for intervals, three for triangles.
using Cell = std::array<int, 3>;

/// Simplicial mesh of an interval (d = 1) or the unit square (d = 2).
///
/// Immutable after construction. Triangles are stored counter-clockwise.
class Mesh {
 public:
  Mesh(int dimension, std::vector<Point> vertices, std::vector<Cell> cells,
       std::vector<bool> boundary_vertex_flags);

  int dimension() const { return dimension_; }
  int vertices_per_cell() const { return dimension_ + 1; }
  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  int cell_count() const { return static_cast<int>(cells_.size()); }

  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<Cell>& cells() const { return cells_; }
  const std::vector<bool>& boundary_vertex_flags() const { return boundary_; }
  bool on_boundary(int vertex) const { return boundary_[vertex]; }

  /// Maximum cell diameter.
  double mesh_size() const { return h_; }

  /// Signed length (d = 1) or area (d = 2) of a cell.
  double cell_volume(int c) const;
  double cell_diameter(int c) const;

  int interior_vertex_count() const;

 private:
  void validate() const;

  int dimension_;
  std::vector<Point> vertices_;
  std::vector<Cell> cells_;
  std::vector<bool> boundary_;
  double h_ = 0.0;
};

/// Uniform subdivision of [a, b] into n_cells intervals.
Mesh build_interval_mesh(double a, double b, int n_cells);

/// Unit square split into n x n cells, each cut into two triangles along the
/// (0,0)-(1,1) diagonal direction.
Mesh build_square_mesh(int n_per_side);

nlohmann::json to_json(const Mesh& mesh);

}  // namespace dgac
