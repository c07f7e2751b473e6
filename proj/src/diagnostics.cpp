#include "dgac/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dgac/quadrature.hpp"

namespace dgac {

namespace {

Vector combine(const std::vector<Vector>& coeffs, const std::vector<double>& weights) {
  Vector out(coeffs.front().size(), 0.0);
  for (std::size_t j = 0; j < coeffs.size(); ++j) axpy(weights[j], coeffs[j], out);
  return out;
}

struct PointwiseIntegrals {
  double l2_sq = 0.0;
  double grad_sq = 0.0;
  double l4_4 = 0.0;
};

// Integrals of e = u_h(t) - u(t) (or u_h(t) alone) over the domain.
PointwiseIntegrals spatial_integrals(const CellQuadrature& cq, const Vector& coeffs, const ManufacturedSolution* ref,
                                     double t, bool need_grad) {
  const int dim = cq.space().dimension();
  Vector vals = cq.values(coeffs);
  Vector grads;
  if (need_grad) grads = cq.gradients(coeffs);
  if (ref) {
    for (int p = 0; p < cq.total_points(); ++p) {
      vals[p] -= ref->value(t, cq.point(p));
      if (need_grad) {
        const auto g = ref->gradient(t, cq.point(p));
        for (int c = 0; c < dim; ++c) grads[p * dim + c] -= g[c];
      }
    }
  }
  PointwiseIntegrals r;
  for (int p = 0; p < cq.total_points(); ++p) {
    const double v2 = vals[p] * vals[p];
    r.l2_sq += cq.jxw(p) * v2;
    r.l4_4 += cq.jxw(p) * v2 * v2;
    if (need_grad)
      for (int c = 0; c < dim; ++c) r.grad_sq += cq.jxw(p) * grads[p * dim + c] * grads[p * dim + c];
  }
  return r;
}

}  // namespace

NormReport compute_norms(const DgSolution& sol, const ManufacturedSolution* reference) {
  const Discretization& d = sol.discretization();
  const SpatialOperators& ops = *d.space;
  const TimeBasis& basis = *d.basis;
  const int l = ops.space().degree();
  const int k = basis.degree();
  const CellQuadrature cq(ops.space_ptr(), reference ? 4 * l + 4 : 4 * l);
  const QuadratureRule1D rule = gauss_legendre(2 * k + 6);
  const int samples = 4 * (k + 1);

  NormReport r;
  double l4 = 0.0;
  for (int n = 1; n <= d.partition.slab_count(); ++n) {
    const SlabSolution& sl = sol.slab(n);
    const double t0 = d.partition.start(n);
    const double tau = d.partition.tau(n);
    double l2 = 0.0, h1 = 0.0;
    for (int q = 0; q < rule.size(); ++q) {
      const double s = rule.points[q];
      const PointwiseIntegrals pi =
          spatial_integrals(cq, combine(sl.coefficients, basis.values_at(s)), reference, t0 + tau * s, true);
      const double w = tau * rule.weights[q];
      l2 += w * pi.l2_sq;
      h1 += w * (pi.l2_sq + pi.grad_sq);
      l4 += w * pi.l4_4;
    }
    double linf = 0.0;
    for (int m = 0; m <= samples + 1; ++m) {
      // s = 0 and s = 1 are the traces, the rest are cell midpoints of a uniform grid
      const double s = m == 0 ? 0.0 : (m == samples + 1 ? 1.0 : (m - 0.5) / samples);
      const PointwiseIntegrals pi =
          spatial_integrals(cq, combine(sl.coefficients, basis.values_at(s)), reference, t0 + tau * s, false);
      linf = std::max(linf, std::sqrt(pi.l2_sq));
    }
    const double jump = ops.mass_inner(sl.jump, sl.jump);
    r.slab_L2L2_sq.push_back(l2);
    r.slab_H1_sq.push_back(h1);
    r.slab_LinfL2.push_back(linf);
    r.slab_jump_sq.push_back(jump);
    r.L2L2 += l2;
    r.L2H1 += h1;
    r.LinfL2 = std::max(r.LinfL2, linf);
    r.jump_sum += jump;
  }
  r.L2L2 = std::sqrt(r.L2L2);
  r.L2H1 = std::sqrt(r.L2H1);
  r.L4L4 = std::pow(l4, 0.25);
  return r;
}

double energy(const SpatialOperators& ops, const Vector& v, double epsilon) {
  const CellQuadrature& cq = ops.quadrature();
  Vector vals = cq.values(v);
  for (double& x : vals) x = (x * x - 1.0) * (x * x - 1.0);
  return 0.5 * ops.stiffness_inner(v, v) + cq.integrate(vals) / (4.0 * epsilon * epsilon);
}

EnergySlab energy_identity(const DgSolution& sol, int n, const ProblemSpec& problem) {
  const Discretization& d = sol.discretization();
  const SpatialOperators& ops = *d.space;
  const TimeBasis& basis = *d.basis;
  if (basis.degree() < 1) throw std::invalid_argument("energy_identity: unsupported configuration, needs k >= 1");
  if (!problem.forcing->is_zero()) throw std::invalid_argument("energy_identity: unsupported configuration, needs f = 0");
  const auto& rule = basis.quadrature();
  const SlabSolution& sl = sol.slab(n);
  const double tau = d.partition.tau(n);

  EnergySlab e;
  e.slab = n;
  e.right_energy = energy(ops, sl.right_trace, problem.epsilon);
  for (int q = 0; q < rule.size(); ++q) {
    const double s = rule.points[q];
    const Vector u = combine(sl.coefficients, basis.values_at(s));
    const Vector us = combine(sl.coefficients, basis.derivatives_at(s));
    e.integrated_energy += tau * rule.weights[q] * energy(ops, u, problem.epsilon);
    // (t - t^{n-1}) ||u_t||^2 dt = s ||u_s||^2 ds after mapping to [0, 1]
    e.weighted_dissipation += rule.weights[q] * s * ops.mass_inner(us, us);
  }
  e.residual = std::abs(tau * e.right_energy - e.integrated_energy + e.weighted_dissipation);
  e.tolerance_scale = 1.0 + tau * e.right_energy;
  return e;
}

std::vector<EnergySlab> energy_trace(const DgSolution& sol, const ProblemSpec& problem) {
  std::vector<EnergySlab> out;
  for (int n = 1; n <= sol.slab_count(); ++n) out.push_back(energy_identity(sol, n, problem));
  return out;
}

std::vector<StabilitySlab> stability_identity(const DgSolution& sol, const ProblemSpec& problem) {
  const Discretization& d = sol.discretization();
  const SpatialOperators& ops = *d.space;
  const CellQuadrature& cq = ops.quadrature();
  const TimeBasis& basis = *d.basis;
  const auto& rule = basis.quadrature();
  const double inv_eps2 = 1.0 / (problem.epsilon * problem.epsilon);

  std::vector<StabilitySlab> out;
  for (int n = 1; n <= sol.slab_count(); ++n) {
    const SlabSolution& sl = sol.slab(n);
    const double tau = d.partition.tau(n);
    const double t0 = d.partition.start(n);
    const double end_sq = 0.5 * ops.mass_inner(sl.right_trace, sl.right_trace);
    const double in_sq = 0.5 * ops.mass_inner(sl.incoming, sl.incoming);
    const double jump_sq = 0.5 * ops.mass_inner(sl.jump, sl.jump);
    double grad = 0.0, quartic = 0.0, square = 0.0, forcing = 0.0;
    for (int q = 0; q < rule.size(); ++q) {
      const double w = tau * rule.weights[q];
      const Vector u = combine(sl.coefficients, basis.values_at(rule.points[q]));
      Vector v4 = cq.values(u);
      for (double& x : v4) x = x * x * x * x;
      grad += w * ops.stiffness_inner(u, u);
      quartic += w * cq.integrate(v4);
      square += w * ops.mass_inner(u, u);
      if (!problem.forcing->is_zero()) forcing += w * dot(problem.forcing->load(t0 + tau * rule.points[q], ops), u);
    }
    StabilitySlab s;
    s.slab = n;
    s.lhs = end_sq - in_sq + jump_sq + grad + inv_eps2 * (quartic - square);
    s.rhs = forcing;
    const double scale = end_sq + in_sq + jump_sq + grad + inv_eps2 * (quartic + square) + std::abs(forcing);
    s.relative_residual = scale > 0.0 ? std::abs(s.lhs - s.rhs) / scale : 0.0;
    out.push_back(s);
  }
  return out;
}

namespace {

SpectrumTrace spectrum_from_values(const SpatialOperators& ops, const std::vector<double>& times, double epsilon,
                                   const std::function<Vector(double)>& values_at) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("spectrum_along_solution: epsilon must be positive");
  const double inv_eps2 = 1.0 / (epsilon * epsilon);
  SpectrumTrace tr;
  std::optional<double> shift;
  double lowest = std::numeric_limits<double>::infinity();
  for (double t : times) {
    Vector w = values_at(t);
    for (double& x : w) x = inv_eps2 * (3.0 * x * x - 1.0);
    SparseMatrix a = ops.stiffness();
    const std::vector<double> wm = ops.weighted_mass_values(w);
    for (std::size_t p = 0; p < wm.size(); ++p) a.values()[p] += wm[p];
    const GeneralizedEigenResult eig = smallest_generalized_eigenvalue(a, ops.mass(), shift);
    shift = eig.lambda;
    tr.times.push_back(t);
    tr.lambda_min.push_back(eig.lambda);
    tr.residuals.push_back(eig.residual);
    lowest = std::min(lowest, eig.lambda);
  }
  tr.C_s = times.empty() ? 0.0 : std::max(0.0, -lowest);
  return tr;
}

}  // namespace

SpectrumTrace spectrum_along_solution(const DgSolution& u, const std::vector<double>& times, double epsilon) {
  const SpatialOperators& ops = *u.discretization().space;
  return spectrum_from_values(ops, times, epsilon, [&](double t) { return ops.quadrature().values(u.at_time(t)); });
}

SpectrumTrace spectrum_along_solution(const ScalarField& u, const SpatialOperators& ops,
                                      const std::vector<double>& times, double epsilon) {
  return spectrum_from_values(ops, times, epsilon, [&](double t) {
    return ops.quadrature().sample([&](const Point& x) { return u(t, x); });
  });
}

BestApproximation best_approximation_ratio(const DgSolution& u_h, const DgSolution& u_p, const ManufacturedSolution& u) {
  const NormReport eh = compute_norms(u_h, &u);
  const NormReport ep = compute_norms(u_p, &u);
  BestApproximation b;
  b.numerator = eh.L2H1 + eh.LinfL2;
  b.denominator = ep.L2H1 + ep.LinfL2;
  if (b.numerator <= 1e-9 && b.denominator <= 1e-9) {
    b.exact_case = true;
    b.ratio = 1.0;
  } else if (b.denominator == 0.0) {
    throw std::domain_error("best_approximation_ratio: zero projection error with nonzero discrete error");
  } else {
    b.ratio = b.numerator / b.denominator;
  }
  return b;
}

}  // namespace dgac
