#include "dgac/companion.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>

#include "dgac/eigen_solver.hpp"
#include "dgac/quadrature.hpp"

namespace dgac {

namespace {

// Reaction weight at the spatial quadrature points for time quadrature point q of slab n.
using ReactionFn = std::function<Vector(int n, int q)>;
// Right-hand side per time node of slab n (already integrated in time).
using RhsFn = std::function<std::vector<Vector>(int n)>;

DgSolution backward_sweep(std::shared_ptr<const Discretization> disc, const ReactionFn& reaction, const RhsFn& rhs,
                          const LinearSolveConfig& linear) {
  const Discretization& d = *disc;
  const SpatialOperators& ops = *d.space;
  const TimeBasis& basis = *d.basis;
  const auto& rule = basis.quadrature();
  const int nt = d.time_nodes();
  const int nf = d.free_dofs();
  const auto& mv = ops.mass().values();
  const auto& av = ops.stiffness().values();

  DgSolution sol(disc, Vector(nf, 0.0), TimeDirection::backward);
  Vector incoming(nf, 0.0);
  for (int n = d.partition.slab_count(); n >= 1; --n) {
    const double tau = d.partition.tau(n);
    std::vector<std::vector<double>> blocks(nt * nt, std::vector<double>(mv.size(), 0.0));
    for (int i = 0; i < nt; ++i) {
      for (int j = 0; j < nt; ++j) {
        const double g = d.time_ops.G(j, i);  // transposed time coupling
        const double th = tau * d.time_ops.Theta(i, j);
        auto& b = blocks[i * nt + j];
        for (std::size_t p = 0; p < mv.size(); ++p) b[p] = g * mv[p] + th * av[p];
      }
    }
    for (int q = 0; q < rule.size(); ++q) {
      const std::vector<double> wm = ops.weighted_mass_values(reaction(n, q));
      for (int i = 0; i < nt; ++i) {
        for (int j = 0; j < nt; ++j) {
          const double c = tau * rule.weights[q] * basis.table(q, i) * basis.table(q, j);
          auto& b = blocks[i * nt + j];
          for (std::size_t p = 0; p < wm.size(); ++p) b[p] += c * wm[p];
        }
      }
    }
    std::vector<Vector> r = rhs(n);
    const Vector m_in = ops.mass().multiply(incoming);
    for (int i = 0; i < nt; ++i) axpy(basis.right_values()[i], m_in, r[i]);
    const Vector x = solve_linear(assemble_block_matrix(ops.mass(), nt, blocks), pack_slab(r), linear);
    SlabSolution s = make_slab_solution(basis, n, unpack_slab(x, nt), incoming, TimeDirection::backward);
    incoming = s.left_trace;
    sol.set_slab(std::move(s));
  }
  return sol;
}

// tau * sum_j Theta_ij M c_j for the coefficients of slab n of src.
RhsFn mass_rhs(const DgSolution& src) {
  return [&src](int n) {
    const Discretization& d = src.discretization();
    const int nt = d.time_nodes();
    const double tau = d.partition.tau(n);
    std::vector<Vector> r(nt, Vector(d.free_dofs(), 0.0));
    for (int j = 0; j < nt; ++j) {
      const Vector mc = d.space->mass().multiply(src.slab(n).coefficients[j]);
      for (int i = 0; i < nt; ++i) axpy(tau * d.time_ops.Theta(i, j), mc, r[i]);
    }
    return r;
  };
}

Vector point_values_at(const DgSolution& u, int n, int q) {
  const Discretization& d = u.discretization();
  const TimeBasis& basis = *d.basis;
  Vector uq(d.free_dofs(), 0.0);
  for (int j = 0; j < basis.size(); ++j) axpy(basis.table(q, j), u.slab(n).coefficients[j], uq);
  return d.space->quadrature().values(uq);
}

Vector combine(const std::vector<Vector>& coeffs, const std::vector<double>& weights) {
  Vector out(coeffs.front().size(), 0.0);
  for (std::size_t j = 0; j < coeffs.size(); ++j) axpy(weights[j], coeffs[j], out);
  return out;
}

void check_same_discretization(const DgSolution& a, const DgSolution& b, const char* where) {
  if (&a.discretization() != &b.discretization())
    throw std::invalid_argument(std::string(where) + ": solutions must share one discretization");
}

double shifted_legendre(int m, double s) { return legendre(m, 2.0 * s - 1.0).value; }

PsiSolution finish_psi(DgSolution psi) {
  const Discretization& d = psi.discretization();
  PsiSolution out{std::move(psi), {}, 0.0};
  for (int n = 1; n <= out.psi.slab_count(); ++n) {
    std::vector<Vector> lap;
    for (const Vector& c : out.psi.slab(n).coefficients) {
      const Vector ac = d.space->stiffness().multiply(c);
      Vector dvec = d.space->solve_mass(ac);
      const Vector md = d.space->mass().multiply(dvec);
      for (std::size_t i = 0; i < md.size(); ++i) out.laplacian_defect = std::max(out.laplacian_defect, std::abs(md[i] - ac[i]));
      lap.push_back(std::move(dvec));
    }
    out.laplacian.push_back(std::move(lap));
  }
  return out;
}

}  // namespace

BackwardDualSolution solve_backward_dual(const DgSolution& u_h, const ProblemSpec& problem,
                                         const LinearSolveConfig& linear) {
  problem.validate();
  if (u_h.direction() != TimeDirection::forward) throw std::invalid_argument("solve_backward_dual: expected a forward solution");
  const double inv_eps2 = 1.0 / (problem.epsilon * problem.epsilon);
  auto reaction = [&](int n, int q) {
    Vector v = point_values_at(u_h, n, q);
    for (double& x : v) x = inv_eps2 * (x * x + 1.0);
    return v;
  };
  DgSolution phi = backward_sweep(u_h.discretization_ptr(), reaction, mass_rhs(u_h), linear);
  return BackwardDualSolution{std::move(phi), u_h};
}

IdentityReport duality_identity(const BackwardDualSolution& dual, const ProblemSpec& problem) {
  const DgSolution& u = dual.source;
  const DgSolution& phi = dual.phi;
  check_same_discretization(u, phi, "duality_identity");
  const Discretization& d = u.discretization();
  const SpatialOperators& ops = *d.space;
  const TimeBasis& basis = *d.basis;
  const QuadratureRule1D ref = gauss_legendre(2 * basis.degree() + 4);
  const auto& rule = basis.quadrature();

  double uu = 0.0;
  double phiu = 0.0;
  double fphi = 0.0;
  for (int n = 1; n <= d.partition.slab_count(); ++n) {
    const double tau = d.partition.tau(n);
    for (int q = 0; q < ref.size(); ++q) {
      const Vector un = u.value(n, ref.points[q]);
      const Vector pn = phi.value(n, ref.points[q]);
      uu += tau * ref.weights[q] * ops.mass_inner(un, un);
      phiu += tau * ref.weights[q] * ops.mass_inner(pn, un);
    }
    if (!problem.forcing->is_zero()) {
      for (int q = 0; q < rule.size(); ++q) {
        const Vector f = problem.forcing->load(d.partition.start(n) + tau * rule.points[q], ops);
        fphi += tau * rule.weights[q] * dot(f, combine(phi.slab(n).coefficients, basis.values_at(rule.points[q])));
      }
    }
  }
  IdentityReport r;
  r.lhs = uu;
  r.rhs = 2.0 / (problem.epsilon * problem.epsilon) * phiu + fphi + ops.mass_inner(u.initial(), phi.slab(1).left_trace);
  r.residual = std::abs(r.lhs - r.rhs) / (std::abs(r.lhs) + std::abs(r.rhs) + 1.0);
  return r;
}

DualStabilityReport dual_stability(const BackwardDualSolution& dual, const ProblemSpec& problem) {
  const DgSolution& u = dual.source;
  const DgSolution& phi = dual.phi;
  const Discretization& d = u.discretization();
  const SpatialOperators& ops = *d.space;
  const CellQuadrature& cq = ops.quadrature();
  const QuadratureRule1D ref = gauss_legendre(2 * d.basis->degree() + 4);
  const double inv_eps2 = 1.0 / (problem.epsilon * problem.epsilon);

  double grad = 0.0, weighted = 0.0, phi2 = 0.0, u2 = 0.0;
  for (int n = 1; n <= d.partition.slab_count(); ++n) {
    const double tau = d.partition.tau(n);
    for (int q = 0; q < ref.size(); ++q) {
      const Vector un = u.value(n, ref.points[q]);
      const Vector pn = phi.value(n, ref.points[q]);
      const Vector uv = cq.values(un);
      const Vector pv = cq.values(pn);
      Vector prod(uv.size());
      for (std::size_t p = 0; p < uv.size(); ++p) prod[p] = uv[p] * uv[p] * pv[p] * pv[p];
      const double w = tau * ref.weights[q];
      grad += w * ops.stiffness_inner(pn, pn);
      weighted += w * cq.integrate(prod);
      phi2 += w * ops.mass_inner(pn, pn);
      u2 += w * ops.mass_inner(un, un);
    }
  }
  const Vector& phi0 = phi.slab(1).left_trace;
  DualStabilityReport r;
  r.lhs = ops.mass_inner(phi0, phi0) + grad + inv_eps2 * weighted + 0.5 * inv_eps2 * phi2;
  r.bound = 0.5 * problem.epsilon * problem.epsilon * u2;
  r.slack = r.bound - r.lhs;
  return r;
}

PsiSolution solve_backward_psi(const DgSolution& rhs, const ScalarField& u_ref, const ProblemSpec& problem,
                               const LinearSolveConfig& linear) {
  problem.validate();
  const Discretization& d = rhs.discretization();
  const double inv_eps2 = 1.0 / (problem.epsilon * problem.epsilon);
  auto reaction = [&](int n, int q) {
    const double t = d.partition.start(n) + d.partition.tau(n) * d.basis->quadrature().points[q];
    Vector v = d.space->quadrature().sample([&](const Point& x) { return u_ref(t, x); });
    for (double& x : v) x = inv_eps2 * (3.0 * x * x - 1.0);
    return v;
  };
  return finish_psi(backward_sweep(rhs.discretization_ptr(), reaction, mass_rhs(rhs), linear));
}

PsiSolution solve_backward_psi(const DgSolution& rhs, const DgSolution& u_ref, const ProblemSpec& problem,
                               const LinearSolveConfig& linear) {
  problem.validate();
  check_same_discretization(rhs, u_ref, "solve_backward_psi");
  const double inv_eps2 = 1.0 / (problem.epsilon * problem.epsilon);
  auto reaction = [&](int n, int q) {
    Vector v = point_values_at(u_ref, n, q);
    for (double& x : v) x = inv_eps2 * (3.0 * x * x - 1.0);
    return v;
  };
  return finish_psi(backward_sweep(rhs.discretization_ptr(), reaction, mass_rhs(rhs), linear));
}

std::vector<PsiChainSlab> psi_spectral_chain(const PsiSolution& psi, const DgSolution& rhs, const ScalarField& u_ref,
                                             const ProblemSpec& problem) {
  const DgSolution& s = psi.psi;
  const Discretization& d = s.discretization();
  const SpatialOperators& ops = *d.space;
  const TimeBasis& basis = *d.basis;
  const auto& rule = basis.quadrature();
  const int nt = basis.size();
  const double inv_eps2 = 1.0 / (problem.epsilon * problem.epsilon);

  std::vector<PsiChainSlab> out;
  std::optional<double> shift;
  for (int n = 1; n <= d.partition.slab_count(); ++n) {
    const double tau = d.partition.tau(n);
    const SlabSolution& sl = s.slab(n);
    PsiChainSlab row;
    row.slab = n;
    row.min_lambda = std::numeric_limits<double>::infinity();
    double spectral = 0.0;
    for (int q = 0; q < rule.size(); ++q) {
      const double t = d.partition.start(n) + tau * rule.points[q];
      Vector w = ops.quadrature().sample([&](const Point& x) { return u_ref(t, x); });
      for (double& x : w) x = inv_eps2 * (3.0 * x * x - 1.0);
      SparseMatrix a = ops.stiffness();
      const std::vector<double> wm = ops.weighted_mass_values(w);
      for (std::size_t p = 0; p < wm.size(); ++p) a.values()[p] += wm[p];
      const GeneralizedEigenResult eig = smallest_generalized_eigenvalue(a, ops.mass(), shift);
      shift = eig.lambda;
      row.min_lambda = std::min(row.min_lambda, eig.lambda);
      const Vector pq = combine(sl.coefficients, basis.values_at(rule.points[q]));
      spectral += tau * rule.weights[q] * eig.lambda * ops.mass_inner(pq, pq);
    }
    double e_psi = 0.0;
    for (int i = 0; i < nt; ++i)
      for (int j = 0; j < nt; ++j)
        e_psi += tau * d.time_ops.Theta(i, j) * ops.mass_inner(sl.coefficients[i], rhs.slab(n).coefficients[j]);
    row.lhs = 0.5 * ops.mass_inner(sl.left_trace, sl.left_trace) - 0.5 * ops.mass_inner(sl.incoming, sl.incoming) +
              0.5 * ops.mass_inner(sl.jump, sl.jump) + spectral;
    row.rhs = e_psi;
    out.push_back(row);
  }
  return out;
}

DgSolution solve_parabolic_projection(const ManufacturedSolution& u, std::shared_ptr<const Discretization> disc,
                                      const LinearSolveConfig& linear) {
  const Discretization& d = *disc;
  const SpatialOperators& ops = *d.space;
  const CellQuadrature& cq = ops.quadrature();
  const TimeBasis& basis = *d.basis;
  // data integrals only, so a rule well beyond the solver's
  const QuadratureRule1D rule = gauss_legendre(2 * basis.degree() + 8);
  const int nt = d.time_nodes();
  const int nf = d.free_dofs();
  const int dim = ops.space().dimension();
  const auto& mv = ops.mass().values();
  const auto& av = ops.stiffness().values();

  DgSolution sol(disc, ops.solve_mass(cq.load(cq.sample([&](const Point& x) { return u.value(0.0, x); }))),
                 TimeDirection::forward);
  Vector prev = sol.initial();
  for (int n = 1; n <= d.partition.slab_count(); ++n) {
    const double tau = d.partition.tau(n);
    std::vector<std::vector<double>> blocks(nt * nt, std::vector<double>(mv.size()));
    for (int i = 0; i < nt; ++i)
      for (int j = 0; j < nt; ++j)
        for (std::size_t p = 0; p < mv.size(); ++p)
          blocks[i * nt + j][p] = d.time_ops.G(i, j) * mv[p] + tau * d.time_ops.Theta(i, j) * av[p];

    std::vector<Vector> r(nt, Vector(nf, 0.0));
    const Vector m_prev = ops.mass().multiply(prev);
    for (int i = 0; i < nt; ++i) axpy(basis.left_values()[i], m_prev, r[i]);
    for (int q = 0; q < rule.size(); ++q) {
      const double t = d.partition.start(n) + tau * rule.points[q];
      Vector load = cq.load(cq.sample([&](const Point& x) { return u.time_derivative(t, x); }));
      Vector grads(static_cast<std::size_t>(cq.total_points()) * dim);
      for (int p = 0; p < cq.total_points(); ++p) {
        const auto g = u.gradient(t, cq.point(p));
        for (int c = 0; c < dim; ++c) grads[p * dim + c] = g[c];
      }
      axpy(1.0, cq.load_gradient(grads), load);
      const std::vector<double> chi = basis.values_at(rule.points[q]);
      for (int i = 0; i < nt; ++i) axpy(tau * rule.weights[q] * chi[i], load, r[i]);
    }
    const Vector x = solve_linear(assemble_block_matrix(ops.mass(), nt, blocks), pack_slab(r), linear);
    SlabSolution s = make_slab_solution(basis, n, unpack_slab(x, nt), prev, TimeDirection::forward);
    prev = s.right_trace;
    sol.set_slab(std::move(s));
  }
  return sol;
}

double parabolic_orthogonality_residual(const DgSolution& u_p, const ManufacturedSolution& u) {
  const Discretization& d = u_p.discretization();
  const SpatialOperators& ops = *d.space;
  const CellQuadrature& cq = ops.quadrature();
  const TimeBasis& basis = *d.basis;
  const QuadratureRule1D rule = gauss_legendre(2 * basis.degree() + 8);
  const int nt = d.time_nodes();
  const int nf = d.free_dofs();
  const int dim = ops.space().dimension();

  auto mass_load = [&](double t) { return cq.load(cq.sample([&](const Point& x) { return u.value(t, x); })); };
  auto stiff_load = [&](double t) {
    Vector grads(static_cast<std::size_t>(cq.total_points()) * dim);
    for (int p = 0; p < cq.total_points(); ++p) {
      const auto g = u.gradient(t, cq.point(p));
      for (int c = 0; c < dim; ++c) grads[p * dim + c] = g[c];
    }
    return cq.load_gradient(grads);
  };

  double worst = 0.0;
  for (int n = 1; n <= d.partition.slab_count(); ++n) {
    const double t0 = d.partition.start(n);
    const double tau = d.partition.tau(n);
    const SlabSolution& sl = u_p.slab(n);
    // discrete form applied to u_p
    std::vector<Vector> r(nt, Vector(nf, 0.0));
    for (int j = 0; j < nt; ++j) {
      const Vector mc = ops.mass().multiply(sl.coefficients[j]);
      const Vector ac = ops.stiffness().multiply(sl.coefficients[j]);
      for (int i = 0; i < nt; ++i) {
        axpy(d.time_ops.G(i, j), mc, r[i]);
        axpy(tau * d.time_ops.Theta(i, j), ac, r[i]);
      }
    }
    const Vector m_in = ops.mass().multiply(sl.incoming);
    for (int i = 0; i < nt; ++i) axpy(-basis.left_values()[i], m_in, r[i]);
    // same form applied to the continuous u
    const Vector m_end = mass_load(t0 + tau);
    const Vector m_start = mass_load(t0);
    for (int i = 0; i < nt; ++i) {
      axpy(-basis.right_values()[i], m_end, r[i]);
      axpy(basis.left_values()[i], m_start, r[i]);
    }
    for (int q = 0; q < rule.size(); ++q) {
      const double s = rule.points[q];
      const Vector ml = mass_load(t0 + tau * s);
      const Vector sl_load = stiff_load(t0 + tau * s);
      const std::vector<double> chi = basis.values_at(s);
      const std::vector<double> dchi = basis.derivatives_at(s);
      for (int i = 0; i < nt; ++i) {
        axpy(rule.weights[q] * dchi[i], ml, r[i]);
        axpy(-tau * rule.weights[q] * chi[i], sl_load, r[i]);
      }
    }
    for (const auto& ri : r)
      for (double v : ri) worst = std::max(worst, std::abs(v));
  }
  return worst;
}

namespace {

struct MomentData {
  QuadratureRule1D rule;
  DenseMatrix c;               // c(m, j) = int_0^1 chi_j L_m
  std::vector<Vector> b;       // b_m = int_0^1 L_m (w(t), phi) ds
  Vector endpoint;             // P_h w(t^n)
};

MomentData moment_data(const ScalarField& w, int n, const Discretization& d) {
  const SpatialOperators& ops = *d.space;
  const CellQuadrature& cq = ops.quadrature();
  const TimeBasis& basis = *d.basis;
  const int k = basis.degree();
  const int nt = basis.size();
  MomentData md{gauss_legendre(k + 8), DenseMatrix(std::max(k, 1), nt), {}, {}};
  const double t0 = d.partition.start(n);
  const double tau = d.partition.tau(n);
  md.b.assign(k, Vector(d.free_dofs(), 0.0));
  for (int q = 0; q < md.rule.size(); ++q) {
    const double s = md.rule.points[q];
    const Vector load = cq.load(cq.sample([&](const Point& x) { return w(t0 + tau * s, x); }));
    for (int m = 0; m < k; ++m) {
      const double lm = md.rule.weights[q] * shifted_legendre(m, s);
      for (int j = 0; j < nt; ++j) md.c(m, j) += lm * basis.value(j, s);
      axpy(lm, load, md.b[m]);
    }
  }
  md.endpoint = ops.solve_mass(cq.load(cq.sample([&](const Point& x) { return w(t0 + tau, x); })));
  return md;
}

}  // namespace

std::vector<Vector> local_projection(const ScalarField& w, int n, const Discretization& d) {
  const SpatialOperators& ops = *d.space;
  const int k = d.basis->degree();
  const int nt = d.time_nodes();
  const int nf = d.free_dofs();
  MomentData md = moment_data(w, n, d);
  std::vector<Vector> coeffs(nt, Vector(nf, 0.0));
  coeffs[k] = md.endpoint;
  if (k == 0) return coeffs;

  const Vector m_end = ops.mass().multiply(md.endpoint);
  DenseMatrix sys(k, k);
  for (int m = 0; m < k; ++m)
    for (int j = 0; j < k; ++j) sys(m, j) = md.c(m, j);
  const DenseLU lu(sys);
  std::vector<Vector> y(k, Vector(nf));
  for (int dof = 0; dof < nf; ++dof) {
    Vector rhs(k);
    for (int m = 0; m < k; ++m) rhs[m] = md.b[m][dof] - md.c(m, k) * m_end[dof];
    const Vector x = lu.solve(std::move(rhs));
    for (int j = 0; j < k; ++j) y[j][dof] = x[j];
  }
  for (int j = 0; j < k; ++j) coeffs[j] = ops.solve_mass(y[j]);
  return coeffs;
}

DgSolution local_projection_all(const ScalarField& w, std::shared_ptr<const Discretization> disc) {
  const SpatialOperators& ops = *disc->space;
  const CellQuadrature& cq = ops.quadrature();
  DgSolution sol(disc, ops.solve_mass(cq.load(cq.sample([&](const Point& x) { return w(0.0, x); }))),
                 TimeDirection::forward);
  Vector prev = sol.initial();
  for (int n = 1; n <= disc->partition.slab_count(); ++n) {
    SlabSolution s = make_slab_solution(*disc->basis, n, local_projection(w, n, *disc), prev, TimeDirection::forward);
    prev = s.right_trace;
    sol.set_slab(std::move(s));
  }
  return sol;
}

double local_projection_defect(const ScalarField& w, int n, const Discretization& d,
                               const std::vector<Vector>& coefficients) {
  const SpatialOperators& ops = *d.space;
  const int k = d.basis->degree();
  const int nt = d.time_nodes();
  const MomentData md = moment_data(w, n, d);
  double worst = 0.0;
  for (std::size_t i = 0; i < md.endpoint.size(); ++i)
    worst = std::max(worst, std::abs(coefficients[k][i] - md.endpoint[i]));
  std::vector<Vector> mc(nt);
  for (int j = 0; j < nt; ++j) mc[j] = ops.mass().multiply(coefficients[j]);
  for (int m = 0; m < k; ++m) {
    Vector r = md.b[m];
    for (int j = 0; j < nt; ++j) axpy(-md.c(m, j), mc[j], r);
    for (double v : r) worst = std::max(worst, std::abs(v));
  }
  return worst;
}

}  // namespace dgac
