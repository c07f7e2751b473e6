#include "dgac/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

namespace dgac {

Mesh::Mesh(int dimension, std::vector<Point> vertices, std::vector<Cell> cells,
           std::vector<bool> boundary_vertex_flags)
    : dimension_(dimension),
      vertices_(std::move(vertices)),
      cells_(std::move(cells)),
      boundary_(std::move(boundary_vertex_flags)) {
  validate();
  for (int c = 0; c < cell_count(); ++c) h_ = std::max(h_, cell_diameter(c));
}

double Mesh::cell_volume(int c) const {
  const Cell& cell = cells_[c];
  const Point& p0 = vertices_[cell[0]];
  const Point& p1 = vertices_[cell[1]];
  if (dimension_ == 1) return p1[0] - p0[0];
  const Point& p2 = vertices_[cell[2]];
  return 0.5 * ((p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]));
}

double Mesh::cell_diameter(int c) const {
  const Cell& cell = cells_[c];
  double d = 0.0;
  for (int a = 0; a < vertices_per_cell(); ++a) {
    for (int b = a + 1; b < vertices_per_cell(); ++b) {
      const Point& p = vertices_[cell[a]];
      const Point& q = vertices_[cell[b]];
      d = std::max(d, std::hypot(p[0] - q[0], p[1] - q[1]));
    }
  }
  return d;
}

int Mesh::interior_vertex_count() const {
  return static_cast<int>(std::count(boundary_.begin(), boundary_.end(), false));
}

void Mesh::validate() const {
  if (dimension_ != 1 && dimension_ != 2) {
    throw std::invalid_argument("Mesh: dimension must be 1 or 2, got " + std::to_string(dimension_));
  }
  if (boundary_.size() != vertices_.size()) {
    throw std::invalid_argument("Mesh: boundary flag count does not match vertex count");
  }
  if (cells_.empty()) throw std::invalid_argument("Mesh: no cells");
  const int nv = vertex_count();
  for (int c = 0; c < cell_count(); ++c) {
    for (int a = 0; a < vertices_per_cell(); ++a) {
      const int v = cells_[c][a];
      if (v < 0 || v >= nv) {
        throw std::invalid_argument("Mesh: cell " + std::to_string(c) + " references invalid vertex");
      }
    }
    if (!(cell_volume(c) > 0.0)) {
      throw std::invalid_argument("Mesh: cell " + std::to_string(c) + " has non-positive volume");
    }
  }

  // Facets: vertices in 1D, edges in 2D. Interior facets are shared by two
  // cells, boundary facets by one and must lie on the boundary.
  std::map<std::pair<int, int>, int> facet_count;
  for (const Cell& cell : cells_) {
    if (dimension_ == 1) {
      for (int a = 0; a < 2; ++a) ++facet_count[{cell[a], cell[a]}];
    } else {
      for (int a = 0; a < 3; ++a) {
        const int u = cell[a];
        const int w = cell[(a + 1) % 3];
        ++facet_count[{std::min(u, w), std::max(u, w)}];
      }
    }
  }
  for (const auto& [facet, count] : facet_count) {
    if (count > 2) throw std::invalid_argument("Mesh: facet shared by more than two cells");
    if (count == 1 && !(boundary_[facet.first] && boundary_[facet.second])) {
      throw std::invalid_argument("Mesh: unshared facet away from the boundary (non-conforming mesh)");
    }
  }
}

Mesh build_interval_mesh(double a, double b, int n_cells) {
  if (n_cells < 1) throw std::invalid_argument("build_interval_mesh: n_cells must be positive");
  if (!(a < b)) throw std::invalid_argument("build_interval_mesh: require a < b");
  std::vector<Point> vertices(n_cells + 1);
  std::vector<bool> boundary(n_cells + 1, false);
  const double h = (b - a) / n_cells;
  for (int i = 0; i <= n_cells; ++i) vertices[i] = {i == n_cells ? b : a + i * h, 0.0};
  boundary.front() = boundary.back() = true;
  std::vector<Cell> cells(n_cells);
  for (int i = 0; i < n_cells; ++i) cells[i] = {i, i + 1, -1};
  return Mesh(1, std::move(vertices), std::move(cells), std::move(boundary));
}

Mesh build_square_mesh(int n) {
  if (n < 1) throw std::invalid_argument("build_square_mesh: n_per_side must be positive");
  const int nv1 = n + 1;
  std::vector<Point> vertices(nv1 * nv1);
  std::vector<bool> boundary(nv1 * nv1);
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      const int v = j * nv1 + i;
      vertices[v] = {static_cast<double>(i) / n, static_cast<double>(j) / n};
      boundary[v] = i == 0 || i == n || j == 0 || j == n;
    }
  }
  std::vector<Cell> cells;
  cells.reserve(2 * n * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int v00 = j * nv1 + i;
      const int v10 = v00 + 1;
      const int v01 = v00 + nv1;
      const int v11 = v01 + 1;
      cells.push_back({v00, v10, v11});
      cells.push_back({v00, v11, v01});
    }
  }
  return Mesh(2, std::move(vertices), std::move(cells), std::move(boundary));
}

nlohmann::json to_json(const Mesh& mesh) {
  nlohmann::json j;
  j["dimension"] = mesh.dimension();
  j["mesh_size_h"] = mesh.mesh_size();
  auto& verts = j["vertices"] = nlohmann::json::array();
  for (const Point& p : mesh.vertices()) {
    if (mesh.dimension() == 1) {
      verts.push_back({p[0]});
    } else {
      verts.push_back({p[0], p[1]});
    }
  }
  auto& cells = j["elements"] = nlohmann::json::array();
  for (const Cell& c : mesh.cells()) {
    auto row = nlohmann::json::array();
    for (int a = 0; a < mesh.vertices_per_cell(); ++a) row.push_back(c[a]);
    cells.push_back(row);
  }
  j["boundary_vertex_flags"] = mesh.boundary_vertex_flags();
  return j;
}

}  // namespace dgac
