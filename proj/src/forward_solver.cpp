#include "dgac/forward_solver.hpp"

#include <cmath>
#include <sstream>

namespace dgac {

void NewtonConfig::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw std::invalid_argument("NewtonConfig: tolerances must be positive");
  if (max_iter < 1) throw std::invalid_argument("NewtonConfig: max_iter must be positive");
}

Vector l2_project(const SpatialOperators& ops, const std::function<double(const Point&)>& g) {
  const Vector vals = ops.quadrature().sample(g);
  for (double v : vals)
    if (!std::isfinite(v)) throw std::domain_error("l2_project: non-finite function value at a quadrature point");
  return ops.solve_mass(ops.quadrature().load(vals));
}

namespace {

// Slab data that does not depend on the unknowns.
struct SlabSetup {
  const Discretization& disc;
  int n;
  int nt;
  double tau;
  double inv_eps2;
  Vector prev_mass;                 // M u^{n-1}_-
  std::vector<Vector> forcing;      // F(t_q) per time quadrature point, empty if f = 0

  SlabSetup(const Discretization& d, const ProblemSpec& problem, int slab, const Vector& prev)
      : disc(d), n(slab), nt(d.time_nodes()), tau(d.partition.tau(slab)), inv_eps2(1.0 / (problem.epsilon * problem.epsilon)) {
    if (static_cast<int>(prev.size()) != d.free_dofs()) throw std::invalid_argument("solve_slab: incoming trace has wrong size");
    for (double v : prev)
      if (!std::isfinite(v)) throw std::invalid_argument("solve_slab: incoming trace is not finite");
    prev_mass = d.space->mass().multiply(prev);
    if (!problem.forcing->is_zero()) {
      const auto& rule = d.basis->quadrature();
      for (int q = 0; q < rule.size(); ++q)
        forcing.push_back(problem.forcing->load(d.partition.start(slab) + tau * rule.points[q], *d.space));
    }
  }
};

// Residual; also returns u at the spatial quadrature points for every time point.
Vector residual(const SlabSetup& st, const std::vector<Vector>& coeffs, std::vector<Vector>* point_values) {
  const Discretization& d = st.disc;
  const SpatialOperators& ops = *d.space;
  const TimeBasis& basis = *d.basis;
  const auto& rule = basis.quadrature();
  const int nt = st.nt;
  const int nf = d.free_dofs();

  std::vector<Vector> mu(nt), au(nt);
  for (int j = 0; j < nt; ++j) {
    mu[j] = ops.mass().multiply(coeffs[j]);
    au[j] = ops.stiffness().multiply(coeffs[j]);
  }
  std::vector<Vector> r(nt, Vector(nf, 0.0));
  for (int i = 0; i < nt; ++i) {
    for (int j = 0; j < nt; ++j) {
      axpy(d.time_ops.G(i, j), mu[j], r[i]);
      axpy(st.tau * d.time_ops.Theta(i, j), au[j], r[i]);
    }
    axpy(-d.time_ops.left_load[i], st.prev_mass, r[i]);
  }
  if (point_values) point_values->assign(rule.size(), Vector());
  for (int q = 0; q < rule.size(); ++q) {
    Vector uq(nf, 0.0);
    for (int j = 0; j < nt; ++j) axpy(basis.table(q, j), coeffs[j], uq);
    Vector vals = ops.quadrature().values(uq);
    Vector nl(vals.size());
    for (std::size_t p = 0; p < vals.size(); ++p) nl[p] = vals[p] * vals[p] * vals[p] - vals[p];
    const Vector load = ops.quadrature().load(nl);
    for (int i = 0; i < nt; ++i) {
      const double wchi = rule.weights[q] * basis.table(q, i) * st.tau;
      axpy(wchi * st.inv_eps2, load, r[i]);
      if (!st.forcing.empty()) axpy(-wchi, st.forcing[q], r[i]);
    }
    if (point_values) (*point_values)[q] = std::move(vals);
  }
  return pack_slab(r);
}

SparseMatrix jacobian(const SlabSetup& st, const std::vector<Vector>& point_values) {
  const Discretization& d = st.disc;
  const SpatialOperators& ops = *d.space;
  const TimeBasis& basis = *d.basis;
  const auto& rule = basis.quadrature();
  const int nt = st.nt;
  const auto& mv = ops.mass().values();
  const auto& av = ops.stiffness().values();

  std::vector<std::vector<double>> blocks(nt * nt, std::vector<double>(mv.size(), 0.0));
  for (int i = 0; i < nt; ++i) {
    for (int j = 0; j < nt; ++j) {
      auto& b = blocks[i * nt + j];
      const double g = d.time_ops.G(i, j);
      const double th = st.tau * d.time_ops.Theta(i, j);
      for (std::size_t p = 0; p < mv.size(); ++p) b[p] = g * mv[p] + th * av[p];
    }
  }
  for (int q = 0; q < rule.size(); ++q) {
    Vector w(point_values[q].size());
    for (std::size_t p = 0; p < w.size(); ++p) w[p] = 3.0 * point_values[q][p] * point_values[q][p] - 1.0;
    const std::vector<double> wm = ops.weighted_mass_values(w);
    for (int i = 0; i < nt; ++i) {
      for (int j = 0; j < nt; ++j) {
        const double c = st.tau * st.inv_eps2 * rule.weights[q] * basis.table(q, i) * basis.table(q, j);
        auto& b = blocks[i * nt + j];
        for (std::size_t p = 0; p < wm.size(); ++p) b[p] += c * wm[p];
      }
    }
  }
  return assemble_block_matrix(ops.mass(), nt, blocks);
}

}  // namespace

Vector slab_residual(const Discretization& disc, const ProblemSpec& problem, int n, const Vector& prev_trace,
                     const Vector& packed) {
  const SlabSetup st(disc, problem, n, prev_trace);
  return residual(st, unpack_slab(packed, st.nt), nullptr);
}

SlabSolution solve_slab(const Discretization& disc, const Vector& prev_trace, int n, const ProblemSpec& problem,
                        const NewtonConfig& cfg, SlabReport* report_out) {
  cfg.validate();
  if (n < 1 || n > disc.partition.slab_count()) throw std::out_of_range("solve_slab: slab index out of range");
  const SlabSetup st(disc, problem, n, prev_trace);
  const int nt = st.nt;

  Vector u = pack_slab(std::vector<Vector>(nt, prev_trace));
  std::vector<Vector> pv;
  Vector r = residual(st, unpack_slab(u, nt), &pv);
  double rnorm = norm2(r);

  SlabReport report;
  report.slab = n;
  report.initial_residual = rnorm;
  const double target = cfg.abs_tol + cfg.rel_tol * rnorm;

  bool converged = rnorm <= target;
  int it = 0;
  while (!converged && it < cfg.max_iter) {
    ++it;
    NewtonStep step;
    step.iteration = it;
    step.residual = rnorm;

    Vector neg_r(r);
    for (double& x : neg_r) x = -x;
    Vector delta;
    try {
      delta = solve_linear(jacobian(st, pv), neg_r, cfg.linear);
    } catch (const LinearSolveError& e) {
      report.iterations = it;
      report.final_residual = rnorm;
      report.history.push_back(step);
      throw NewtonError("slab " + std::to_string(n) + ": linear solve failed: " + e.what(), report);
    }
    step.step_norm = norm2(delta);

    double lambda = 1.0;
    Vector trial;
    std::vector<Vector> trial_pv;
    Vector trial_r;
    double trial_norm = 0.0;
    for (int h = 0;; ++h) {
      trial = u;
      axpy(lambda, delta, trial);
      trial_r = residual(st, unpack_slab(trial, nt), &trial_pv);
      trial_norm = norm2(trial_r);
      step.halvings = h;
      if (cfg.damping == Damping::none || trial_norm < rnorm || h == 8) break;
      lambda *= 0.5;
    }
    if (!std::isfinite(trial_norm)) {
      report.iterations = it;
      report.final_residual = trial_norm;
      report.history.push_back(step);
      throw NewtonError("slab " + std::to_string(n) + ": Newton iterate became non-finite", report);
    }
    report.history.push_back(step);
    // Roundoff floor: the residual is already tiny and no damped step reduces it.
    if (trial_norm >= rnorm && rnorm <= 1e-10 * (1.0 + report.initial_residual)) {
      converged = true;
      break;
    }
    u = std::move(trial);
    r = std::move(trial_r);
    pv = std::move(trial_pv);
    rnorm = trial_norm;
    const bool tiny_step = lambda * step.step_norm <= 1e-14 * (1.0 + norm2(u));
    converged = rnorm <= target || tiny_step;
  }
  report.iterations = it;
  report.final_residual = rnorm;
  if (report_out) *report_out = report;
  if (!converged) {
    std::ostringstream msg;
    msg << "slab " << n << ": Newton did not converge in " << cfg.max_iter << " iterations (residual " << rnorm
        << ", target " << target << ")";
    throw NewtonError(msg.str(), report);
  }
  return make_slab_solution(*disc.basis, n, unpack_slab(u, nt), prev_trace, TimeDirection::forward);
}

DgSolution solve_forward(const ProblemSpec& problem, std::shared_ptr<const Discretization> disc,
                         const NewtonConfig& cfg, std::vector<SlabReport>* reports) {
  problem.validate();
  if (std::abs(disc->partition.final_time() - problem.final_time) > 1e-12 * problem.final_time)
    throw std::invalid_argument("solve_forward: partition does not end at the problem's final time");
  DgSolution sol(disc, l2_project(*disc->space, problem.initial_data), TimeDirection::forward);
  if (reports) reports->clear();
  Vector prev = sol.initial();
  for (int n = 1; n <= disc->partition.slab_count(); ++n) {
    SlabReport rep;
    SlabSolution s = solve_slab(*disc, prev, n, problem, cfg, &rep);
    if (reports) reports->push_back(rep);
    prev = s.right_trace;
    sol.set_slab(std::move(s));
  }
  return sol;
}

}  // namespace dgac
