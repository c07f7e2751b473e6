#include "dgac/fe_space.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>

namespace dgac {

namespace {

// Reverse Cuthill-McKee ordering of a symmetric adjacency structure.
std::vector<int> reverse_cuthill_mckee(const std::vector<std::vector<int>>& adjacency) {
  const int n = static_cast<int>(adjacency.size());
  std::vector<int> order;
  order.reserve(n);
  std::vector<bool> visited(n, false);
  auto degree = [&](int v) { return adjacency[v].size(); };
  while (static_cast<int>(order.size()) < n) {
    int start = -1;
    for (int v = 0; v < n; ++v) {
      if (!visited[v] && (start < 0 || degree(v) < degree(start))) start = v;
    }
    std::queue<int> frontier;
    frontier.push(start);
    visited[start] = true;
    while (!frontier.empty()) {
      const int v = frontier.front();
      frontier.pop();
      order.push_back(v);
      std::vector<int> next;
      for (int w : adjacency[v]) {
        if (!visited[w]) {
          visited[w] = true;
          next.push_back(w);
        }
      }
      std::stable_sort(next.begin(), next.end(), [&](int a, int b) { return degree(a) < degree(b); });
      for (int w : next) frontier.push(w);
    }
  }
  std::reverse(order.begin(), order.end());
  return order;
}

}  // namespace

FeSpace::FeSpace(std::shared_ptr<const Mesh> mesh, int degree) : mesh_(std::move(mesh)), degree_(degree) {
  if (degree_ != 1 && degree_ != 2) {
    throw std::invalid_argument("FeSpace: unsupported degree " + std::to_string(degree_) + " (1 or 2 supported)");
  }
  const Mesh& m = *mesh_;
  const int dim = m.dimension();
  dof_coords_ = m.vertices();
  std::vector<bool> on_boundary = m.boundary_vertex_flags();

  dofs_per_cell_ = degree_ == 1 ? dim + 1 : (dim == 1 ? 3 : 6);
  cell_dofs_.assign(m.cell_count(), {});

  if (degree_ == 1) {
    for (int c = 0; c < m.cell_count(); ++c) {
      cell_dofs_[c].assign(m.cells()[c].begin(), m.cells()[c].begin() + dim + 1);
    }
  } else if (dim == 1) {
    for (int c = 0; c < m.cell_count(); ++c) {
      const Cell& cell = m.cells()[c];
      const int mid = static_cast<int>(dof_coords_.size());
      const Point& p0 = m.vertices()[cell[0]];
      const Point& p1 = m.vertices()[cell[1]];
      dof_coords_.push_back({0.5 * (p0[0] + p1[0]), 0.0});
      on_boundary.push_back(false);
      cell_dofs_[c] = {cell[0], cell[1], mid};
    }
  } else {
    // Edge dofs keyed by sorted vertex pair; a boundary edge belongs to one cell.
    std::map<std::pair<int, int>, int> edge_cells;
    for (const Cell& cell : m.cells()) {
      for (int a = 0; a < 3; ++a) {
        const int u = cell[a];
        const int w = cell[(a + 1) % 3];
        ++edge_cells[{std::min(u, w), std::max(u, w)}];
      }
    }
    std::map<std::pair<int, int>, int> edge_dof;
    for (const auto& [edge, count] : edge_cells) {
      const int dof = static_cast<int>(dof_coords_.size());
      edge_dof[edge] = dof;
      const Point& p = m.vertices()[edge.first];
      const Point& q = m.vertices()[edge.second];
      dof_coords_.push_back({0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])});
      on_boundary.push_back(count == 1);
    }
    for (int c = 0; c < m.cell_count(); ++c) {
      const Cell& cell = m.cells()[c];
      std::vector<int> dofs = {cell[0], cell[1], cell[2]};
      for (int a = 0; a < 3; ++a) {
        const int u = cell[a];
        const int w = cell[(a + 1) % 3];
        dofs.push_back(edge_dof.at({std::min(u, w), std::max(u, w)}));
      }
      cell_dofs_[c] = std::move(dofs);
    }
  }

  const int ndof = static_cast<int>(dof_coords_.size());
  std::vector<int> free_candidates;
  for (int d = 0; d < ndof; ++d) {
    if (on_boundary[d]) {
      dirichlet_dofs_.push_back(d);
    } else {
      free_candidates.push_back(d);
    }
  }

  // Graph over free dofs, then RCM.
  std::vector<int> provisional(ndof, -1);
  for (int i = 0; i < static_cast<int>(free_candidates.size()); ++i) provisional[free_candidates[i]] = i;
  std::vector<std::set<int>> adj_sets(free_candidates.size());
  for (const auto& dofs : cell_dofs_) {
    for (int a : dofs) {
      if (provisional[a] < 0) continue;
      for (int b : dofs) {
        if (provisional[b] < 0 || a == b) continue;
        adj_sets[provisional[a]].insert(provisional[b]);
      }
    }
  }
  std::vector<std::vector<int>> adjacency(adj_sets.size());
  for (std::size_t i = 0; i < adj_sets.size(); ++i) adjacency[i].assign(adj_sets[i].begin(), adj_sets[i].end());
  const std::vector<int> order = reverse_cuthill_mckee(adjacency);

  free_index_.assign(ndof, -1);
  free_dofs_.resize(order.size());
  for (int f = 0; f < static_cast<int>(order.size()); ++f) {
    const int dof = free_candidates[order[f]];
    free_dofs_[f] = dof;
    free_index_[dof] = f;
  }
}

Vector FeSpace::expand(const Vector& free_values) const {
  Vector all(dof_count(), 0.0);
  for (int f = 0; f < free_count(); ++f) all[free_dofs_[f]] = free_values[f];
  return all;
}

Vector FeSpace::restrict_to_free(const Vector& values) const {
  Vector out(free_count());
  for (int f = 0; f < free_count(); ++f) out[f] = values[free_dofs_[f]];
  return out;
}

void FeSpace::shape_values(const Point& ref, double* v) const {
  if (dimension() == 1) {
    const double x = ref[0];
    if (degree_ == 1) {
      v[0] = 1.0 - x;
      v[1] = x;
    } else {
      v[0] = (1.0 - x) * (1.0 - 2.0 * x);
      v[1] = x * (2.0 * x - 1.0);
      v[2] = 4.0 * x * (1.0 - x);
    }
    return;
  }
  const double l[3] = {1.0 - ref[0] - ref[1], ref[0], ref[1]};
  if (degree_ == 1) {
    for (int a = 0; a < 3; ++a) v[a] = l[a];
    return;
  }
  for (int a = 0; a < 3; ++a) v[a] = l[a] * (2.0 * l[a] - 1.0);
  for (int e = 0; e < 3; ++e) v[3 + e] = 4.0 * l[e] * l[(e + 1) % 3];
}

void FeSpace::shape_gradients(const Point& ref, double* g) const {
  if (dimension() == 1) {
    const double x = ref[0];
    if (degree_ == 1) {
      g[0] = -1.0;
      g[1] = 1.0;
    } else {
      g[0] = 4.0 * x - 3.0;
      g[1] = 4.0 * x - 1.0;
      g[2] = 4.0 - 8.0 * x;
    }
    return;
  }
  const double l[3] = {1.0 - ref[0] - ref[1], ref[0], ref[1]};
  const double dl[3][2] = {{-1.0, -1.0}, {1.0, 0.0}, {0.0, 1.0}};
  if (degree_ == 1) {
    for (int a = 0; a < 3; ++a) {
      g[2 * a] = dl[a][0];
      g[2 * a + 1] = dl[a][1];
    }
    return;
  }
  for (int a = 0; a < 3; ++a) {
    for (int d = 0; d < 2; ++d) g[2 * a + d] = (4.0 * l[a] - 1.0) * dl[a][d];
  }
  for (int e = 0; e < 3; ++e) {
    const int a = e;
    const int b = (e + 1) % 3;
    for (int d = 0; d < 2; ++d) g[2 * (3 + e) + d] = 4.0 * (dl[a][d] * l[b] + l[a] * dl[b][d]);
  }
}

std::shared_ptr<const FeSpace> build_space(std::shared_ptr<const Mesh> mesh, int degree_l) {
  return std::make_shared<const FeSpace>(std::move(mesh), degree_l);
}

Vector interpolate(const FeSpace& space, const std::function<double(const Point&)>& g) {
  Vector out(space.free_count());
  for (int f = 0; f < space.free_count(); ++f) out[f] = g(space.dof_coordinates()[space.free_dof(f)]);
  return out;
}

}  // namespace dgac
