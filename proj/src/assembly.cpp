#include "dgac/assembly.hpp"

#include <algorithm>
#include <cmath>

#include "dgac/quadrature.hpp"

namespace dgac {

CellQuadrature::CellQuadrature(std::shared_ptr<const FeSpace> space, int order)
    : space_(std::move(space)), order_(order), dim_(space_->dimension()), nloc_(space_->dofs_per_cell()) {
  const Mesh& mesh = space_->mesh();
  std::vector<Point> ref_points;
  std::vector<double> ref_weights;
  if (dim_ == 1) {
    const auto rule = gauss_legendre_for_degree(order);
    for (int q = 0; q < rule.size(); ++q) {
      ref_points.push_back({rule.points[q], 0.0});
      ref_weights.push_back(rule.weights[q]);
    }
  } else {
    const auto rule = triangle_rule(order);
    ref_points = rule.points;
    ref_weights = rule.weights;
  }
  nq_ = static_cast<int>(ref_points.size());

  // Reference tables.
  std::vector<double> ref_phi(nq_ * nloc_);
  std::vector<double> ref_dphi(nq_ * nloc_ * dim_);
  for (int q = 0; q < nq_; ++q) {
    space_->shape_values(ref_points[q], &ref_phi[q * nloc_]);
    space_->shape_gradients(ref_points[q], &ref_dphi[q * nloc_ * dim_]);
  }

  const int nc = mesh.cell_count();
  const std::size_t total = static_cast<std::size_t>(nc) * nq_;
  jxw_.resize(total);
  xyz_.resize(total);
  phi_.resize(total * nloc_);
  dphi_.resize(total * nloc_ * dim_);
  for (int c = 0; c < nc; ++c) {
    const Cell& cell = mesh.cells()[c];
    const Point& p0 = mesh.vertices()[cell[0]];
    const Point& p1 = mesh.vertices()[cell[1]];
    double jac[2][2] = {{p1[0] - p0[0], 0.0}, {p1[1] - p0[1], 0.0}};
    double det = jac[0][0];
    double inv[2][2] = {{1.0 / jac[0][0], 0.0}, {0.0, 0.0}};
    if (dim_ == 2) {
      const Point& p2 = mesh.vertices()[cell[2]];
      jac[0][1] = p2[0] - p0[0];
      jac[1][1] = p2[1] - p0[1];
      det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
      inv[0][0] = jac[1][1] / det;
      inv[0][1] = -jac[0][1] / det;
      inv[1][0] = -jac[1][0] / det;
      inv[1][1] = jac[0][0] / det;
    }
    for (int q = 0; q < nq_; ++q) {
      const std::size_t p = static_cast<std::size_t>(c) * nq_ + q;
      const Point& r = ref_points[q];
      jxw_[p] = ref_weights[q] * std::abs(det);
      if (dim_ == 1) {
        xyz_[p] = {p0[0] + r[0] * jac[0][0], 0.0};
      } else {
        xyz_[p] = {p0[0] + jac[0][0] * r[0] + jac[0][1] * r[1], p0[1] + jac[1][0] * r[0] + jac[1][1] * r[1]};
      }
      for (int a = 0; a < nloc_; ++a) {
        phi_[p * nloc_ + a] = ref_phi[q * nloc_ + a];
        const double* g = &ref_dphi[(q * nloc_ + a) * dim_];
        // physical gradient = J^{-T} reference gradient
        for (int d = 0; d < dim_; ++d) {
          double s = 0.0;
          for (int e = 0; e < dim_; ++e) s += inv[e][d] * g[e];
          dphi_[(p * nloc_ + a) * dim_ + d] = s;
        }
      }
    }
  }
}

Vector CellQuadrature::values(const Vector& u) const {
  const FeSpace& sp = *space_;
  Vector out(total_points(), 0.0);
  const int nc = sp.mesh().cell_count();
  for (int c = 0; c < nc; ++c) {
    const auto& dofs = sp.cell_dofs(c);
    for (int a = 0; a < nloc_; ++a) {
      const int f = sp.free_index(dofs[a]);
      if (f < 0) continue;
      const double ua = u[f];
      if (ua == 0.0) continue;
      for (int q = 0; q < nq_; ++q) {
        const int p = c * nq_ + q;
        out[p] += ua * phi_[p * nloc_ + a];
      }
    }
  }
  return out;
}

Vector CellQuadrature::gradients(const Vector& u) const {
  const FeSpace& sp = *space_;
  Vector out(static_cast<std::size_t>(total_points()) * dim_, 0.0);
  const int nc = sp.mesh().cell_count();
  for (int c = 0; c < nc; ++c) {
    const auto& dofs = sp.cell_dofs(c);
    for (int a = 0; a < nloc_; ++a) {
      const int f = sp.free_index(dofs[a]);
      if (f < 0) continue;
      const double ua = u[f];
      for (int q = 0; q < nq_; ++q) {
        const int p = c * nq_ + q;
        for (int d = 0; d < dim_; ++d) out[p * dim_ + d] += ua * dphi_[(p * nloc_ + a) * dim_ + d];
      }
    }
  }
  return out;
}

Vector CellQuadrature::sample(const std::function<double(const Point&)>& g) const {
  Vector out(total_points());
  for (int p = 0; p < total_points(); ++p) out[p] = g(xyz_[p]);
  return out;
}

Vector CellQuadrature::load(const Vector& point_values) const {
  const FeSpace& sp = *space_;
  Vector out(sp.free_count(), 0.0);
  const int nc = sp.mesh().cell_count();
  for (int c = 0; c < nc; ++c) {
    const auto& dofs = sp.cell_dofs(c);
    for (int a = 0; a < nloc_; ++a) {
      const int f = sp.free_index(dofs[a]);
      if (f < 0) continue;
      double s = 0.0;
      for (int q = 0; q < nq_; ++q) {
        const int p = c * nq_ + q;
        s += jxw_[p] * point_values[p] * phi_[p * nloc_ + a];
      }
      out[f] += s;
    }
  }
  return out;
}

Vector CellQuadrature::load_gradient(const Vector& point_gradients) const {
  const FeSpace& sp = *space_;
  Vector out(sp.free_count(), 0.0);
  const int nc = sp.mesh().cell_count();
  for (int c = 0; c < nc; ++c) {
    const auto& dofs = sp.cell_dofs(c);
    for (int a = 0; a < nloc_; ++a) {
      const int f = sp.free_index(dofs[a]);
      if (f < 0) continue;
      double s = 0.0;
      for (int q = 0; q < nq_; ++q) {
        const int p = c * nq_ + q;
        for (int d = 0; d < dim_; ++d) s += jxw_[p] * point_gradients[p * dim_ + d] * dphi_[(p * nloc_ + a) * dim_ + d];
      }
      out[f] += s;
    }
  }
  return out;
}

double CellQuadrature::integrate(const Vector& point_values) const {
  double s = 0.0;
  for (int p = 0; p < total_points(); ++p) s += jxw_[p] * point_values[p];
  return s;
}

SpatialOperators::SpatialOperators(std::shared_ptr<const FeSpace> space, int quadrature_order)
    : space_(space), quad_(space, quadrature_order > 0 ? quadrature_order : 4 * space->degree()) {
  const FeSpace& sp = *space_;
  const int n = sp.free_count();
  const int nloc = sp.dofs_per_cell();
  const int nq = quad_.points_per_cell();
  const int dim = sp.dimension();
  const int nc = sp.mesh().cell_count();

  TripletBuilder mb(n, n);
  TripletBuilder kb(n, n);
  for (int c = 0; c < nc; ++c) {
    const auto& dofs = sp.cell_dofs(c);
    for (int a = 0; a < nloc; ++a) {
      const int fa = sp.free_index(dofs[a]);
      if (fa < 0) continue;
      for (int b = 0; b < nloc; ++b) {
        const int fb = sp.free_index(dofs[b]);
        if (fb < 0) continue;
        double m = 0.0;
        double k = 0.0;
        for (int q = 0; q < nq; ++q) {
          const int p = c * nq + q;
          m += quad_.jxw(p) * quad_.phi(p, a) * quad_.phi(p, b);
          for (int d = 0; d < dim; ++d) k += quad_.jxw(p) * quad_.dphi(p, a, d) * quad_.dphi(p, b, d);
        }
        mb.add(fa, fb, m);
        kb.add(fa, fb, k);
      }
    }
  }
  mass_ = mb.finalize();
  stiffness_ = kb.finalize();

  // Both matrices were built from identical (i, j) sets so the patterns agree.
  local_to_pattern_.assign(static_cast<std::size_t>(nc) * nloc * nloc, -1);
  const auto& ptr = mass_.row_ptr();
  const auto& idx = mass_.col_idx();
  for (int c = 0; c < nc; ++c) {
    const auto& dofs = sp.cell_dofs(c);
    for (int a = 0; a < nloc; ++a) {
      const int fa = sp.free_index(dofs[a]);
      if (fa < 0) continue;
      for (int b = 0; b < nloc; ++b) {
        const int fb = sp.free_index(dofs[b]);
        if (fb < 0) continue;
        const auto it = std::lower_bound(idx.begin() + ptr[fa], idx.begin() + ptr[fa + 1], fb);
        local_to_pattern_[(static_cast<std::size_t>(c) * nloc + a) * nloc + b] = static_cast<int>(it - idx.begin());
      }
    }
  }
  if (n > 0) mass_lu_ = std::make_shared<const BandedLU>(mass_);
}

std::vector<double> SpatialOperators::weighted_mass_values(const Vector& weight) const {
  const FeSpace& sp = *space_;
  const int nloc = sp.dofs_per_cell();
  const int nq = quad_.points_per_cell();
  const int nc = sp.mesh().cell_count();
  std::vector<double> vals(mass_.nnz(), 0.0);
  std::vector<double> wq(nq);
  for (int c = 0; c < nc; ++c) {
    for (int q = 0; q < nq; ++q) wq[q] = quad_.jxw(c * nq + q) * weight[c * nq + q];
    for (int a = 0; a < nloc; ++a) {
      for (int b = 0; b < nloc; ++b) {
        const int pos = local_to_pattern_[(static_cast<std::size_t>(c) * nloc + a) * nloc + b];
        if (pos < 0) continue;
        double s = 0.0;
        for (int q = 0; q < nq; ++q) {
          const int p = c * nq + q;
          s += wq[q] * quad_.phi(p, a) * quad_.phi(p, b);
        }
        vals[pos] += s;
      }
    }
  }
  return vals;
}

SparseMatrix SpatialOperators::weighted_mass(const Vector& weight) const {
  return mass_.with_values(weighted_mass_values(weight));
}

Vector SpatialOperators::solve_mass(const Vector& b) const {
  if (size() == 0) return {};
  return mass_lu_->solve(b);
}

double SpatialOperators::mass_inner(const Vector& a, const Vector& b) const { return dot(a, mass_.multiply(b)); }

double SpatialOperators::stiffness_inner(const Vector& a, const Vector& b) const {
  return dot(a, stiffness_.multiply(b));
}

}  // namespace dgac
