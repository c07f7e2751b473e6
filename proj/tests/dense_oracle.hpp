#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

namespace oracle {

// Independent dense reference for P1 on a uniform mesh of [0, 1]. The slab
// equations are posed in the form before integration by parts in time:
//   int (u_t, v) + (grad u, grad v) + (1/eps^2)(u^3 - u, v) dt + (u_+ - u_-, v_+) = 0,
// with the Jacobian taken by finite differences.
struct DenseOracle {
  int n;       // cells
  int m;       // interior vertices
  double h;
  double eps;
  std::vector<double> nodes;  // time nodes on [0, 1]
  Eigen::MatrixXd M, A;

  static constexpr double gp[3] = {0.5 - 0.3872983346207417, 0.5, 0.5 + 0.3872983346207417};
  static constexpr double gw[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

  DenseOracle(int cells, double epsilon, std::vector<double> time_nodes)
      : n(cells), m(cells - 1), h(1.0 / cells), eps(epsilon), nodes(std::move(time_nodes)) {
    M = Eigen::MatrixXd::Zero(m, m);
    A = Eigen::MatrixXd::Zero(m, m);
    for (int c = 0; c < n; ++c) {
      const int dofs[2] = {c - 1, c};  // interior index of the cell's vertices
      const double ml[2][2] = {{h / 3, h / 6}, {h / 6, h / 3}};
      const double al[2][2] = {{1 / h, -1 / h}, {-1 / h, 1 / h}};
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          if (dofs[a] >= 0 && dofs[a] < m && dofs[b] >= 0 && dofs[b] < m) {
            M(dofs[a], dofs[b]) += ml[a][b];
            A(dofs[a], dofs[b]) += al[a][b];
          }
    }
  }

  int nt() const { return static_cast<int>(nodes.size()); }

  double chi(int i, double s) const {
    double v = 1.0;
    for (int j = 0; j < nt(); ++j)
      if (j != i) v *= (s - nodes[j]) / (nodes[i] - nodes[j]);
    return v;
  }
  double dchi(int i, double s) const {
    double d = 0.0;
    for (int l = 0; l < nt(); ++l) {
      if (l == i) continue;
      double p = 1.0 / (nodes[i] - nodes[l]);
      for (int j = 0; j < nt(); ++j)
        if (j != i && j != l) p *= (s - nodes[j]) / (nodes[i] - nodes[j]);
      d += p;
    }
    return d;
  }

  // (g(u), phi_i) for u given on interior vertices.
  template <class G>
  Eigen::VectorXd nodal_load(const Eigen::VectorXd& u, G g) const {
    Eigen::VectorXd r = Eigen::VectorXd::Zero(m);
    for (int c = 0; c < n; ++c) {
      const double ul = c >= 1 ? u[c - 1] : 0.0;
      const double ur = c < m ? u[c] : 0.0;
      for (int q = 0; q < 3; ++q) {
        const double val = ul * (1 - gp[q]) + ur * gp[q];
        const double f = g(val, (c + gp[q]) * h) * h * gw[q];
        if (c >= 1) r[c - 1] += f * (1 - gp[q]);
        if (c < m) r[c] += f * gp[q];
      }
    }
    return r;
  }

  template <class F>
  Eigen::VectorXd project(F u0) const {
    return M.lu().solve(nodal_load(Eigen::VectorXd::Zero(m), [&](double, double x) { return u0(x); }));
  }

  Eigen::VectorXd residual(const Eigen::VectorXd& U, const Eigen::VectorXd& prev, double tau) const {
    const int k1 = nt();
    auto at = [&](double s) {
      Eigen::VectorXd u = Eigen::VectorXd::Zero(m);
      for (int j = 0; j < k1; ++j) u += chi(j, s) * U.segment(j * m, m);
      return u;
    };
    auto dt = [&](double s) {
      Eigen::VectorXd u = Eigen::VectorXd::Zero(m);
      for (int j = 0; j < k1; ++j) u += dchi(j, s) * U.segment(j * m, m);
      return u;
    };
    Eigen::VectorXd r = Eigen::VectorXd::Zero(k1 * m);
    const Eigen::VectorXd jump = at(0.0) - prev;
    for (int q = 0; q < 3; ++q) {
      const Eigen::VectorXd u = at(gp[q]);
      const Eigen::VectorXd body = M * dt(gp[q]) + tau * (A * u + nodal_load(u, [](double v, double) { return v * v * v - v; }) / (eps * eps));
      for (int i = 0; i < k1; ++i) r.segment(i * m, m) += gw[q] * chi(i, gp[q]) * body;
    }
    for (int i = 0; i < k1; ++i) r.segment(i * m, m) += chi(i, 0.0) * (M * jump);
    return r;
  }

  // Returns slab coefficients per slab, node-major.
  std::vector<Eigen::VectorXd> solve(Eigen::VectorXd u0, double T, int slabs) const {
    const double tau = T / slabs;
    std::vector<Eigen::VectorXd> out;
    Eigen::VectorXd prev = u0;
    for (int s = 0; s < slabs; ++s) {
      Eigen::VectorXd U = prev.replicate(nt(), 1);
      for (int it = 0; it < 50; ++it) {
        const Eigen::VectorXd r = residual(U, prev, tau);
        if (r.norm() < 1e-14) break;
        Eigen::MatrixXd J(U.size(), U.size());
        const double fd = 1e-7;
        for (int c = 0; c < U.size(); ++c) {
          Eigen::VectorXd Up = U, Um = U;
          Up[c] += fd;
          Um[c] -= fd;
          J.col(c) = (residual(Up, prev, tau) - residual(Um, prev, tau)) / (2 * fd);
        }
        U -= J.partialPivLu().solve(r);
      }
      out.push_back(U);
      prev = Eigen::VectorXd::Zero(m);
      for (int j = 0; j < nt(); ++j) prev += chi(j, 1.0) * U.segment(j * m, m);
    }
    return out;
  }
  // int g(u) phi_a phi_b for u given on interior vertices.
  template <class G>
  Eigen::MatrixXd weighted_mass(const Eigen::VectorXd& u, G g) const {
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(m, m);
    for (int c = 0; c < n; ++c) {
      const int dofs[2] = {c - 1, c};
      const double ul = c >= 1 ? u[c - 1] : 0.0;
      const double ur = c < m ? u[c] : 0.0;
      for (int q = 0; q < 3; ++q) {
        const double phi[2] = {1 - gp[q], gp[q]};
        const double f = g(ul * phi[0] + ur * phi[1]) * h * gw[q];
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b)
            if (dofs[a] >= 0 && dofs[a] < m && dofs[b] >= 0 && dofs[b] < m) w(dofs[a], dofs[b]) += f * phi[a] * phi[b];
      }
    }
    return w;
  }

  Eigen::VectorXd eval(const Eigen::VectorXd& U, double s) const {
    Eigen::VectorXd u = Eigen::VectorXd::Zero(m);
    for (int j = 0; j < nt(); ++j) u += chi(j, s) * U.segment(j * m, m);
    return u;
  }

  // Backward linear slab problem in the form before integration by parts:
  //   int -(phi_t, v) + (grad phi, grad v) + (W(s) phi, v) dt + (phi(1) - incoming, v(1)) = int (src, v),
  // solved for every slab from the last to the first. W(n, s) returns the
  // weighted mass matrix; src holds node-major coefficients per slab.
  template <class W>
  std::vector<Eigen::VectorXd> solve_backward(W reaction, const std::vector<Eigen::VectorXd>& src, double T) const {
    const int slabs = static_cast<int>(src.size());
    const double tau = T / slabs;
    const int size = nt() * m;
    std::vector<Eigen::VectorXd> out(slabs);
    Eigen::VectorXd incoming = Eigen::VectorXd::Zero(m);
    for (int sl = slabs - 1; sl >= 0; --sl) {
      Eigen::MatrixXd K = Eigen::MatrixXd::Zero(size, size);
      Eigen::VectorXd b = Eigen::VectorXd::Zero(size);
      for (int q = 0; q < 3; ++q) {
        const Eigen::MatrixXd Wq = reaction(sl, gp[q]);
        const Eigen::VectorXd sq = eval(src[sl], gp[q]);
        for (int i = 0; i < nt(); ++i) {
          b.segment(i * m, m) += tau * gw[q] * chi(i, gp[q]) * (M * sq);
          for (int j = 0; j < nt(); ++j)
            K.block(i * m, j * m, m, m) += gw[q] * chi(i, gp[q]) *
                                           (-dchi(j, gp[q]) * M + tau * chi(j, gp[q]) * (A + Wq));
        }
      }
      for (int i = 0; i < nt(); ++i) {
        b.segment(i * m, m) += chi(i, 1.0) * (M * incoming);
        for (int j = 0; j < nt(); ++j) K.block(i * m, j * m, m, m) += chi(i, 1.0) * chi(j, 1.0) * M;
      }
      out[sl] = K.partialPivLu().solve(b);
      incoming = eval(out[sl], 0.0);
    }
    return out;
  }
};

}  // namespace oracle
