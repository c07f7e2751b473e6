#pragma once

#include <optional>
#include <vector>

#include "dgac/companion.hpp"
#include "dgac/dg_solution.hpp"
#include "dgac/eigen_solver.hpp"
#include "dgac/problem.hpp"

namespace dgac {

/// Norms of u_h, or of u_h - u when a reference is given.
///
/// Time integrals use 2k + 6 Gauss points per slab. The L-infinity-in-time
/// norm is the maximum over 4(k+1) equispaced midpoints per slab plus both
/// slab traces. L2H1 is the full H1 norm.
struct NormReport {
  double L2L2 = 0.0;
  double LinfL2 = 0.0;
  double L2H1 = 0.0;
  double L4L4 = 0.0;
  double jump_sum = 0.0;  // sum_n ||[u^{n-1}_h]||^2 of u_h itself
  std::vector<double> slab_L2L2_sq;
  std::vector<double> slab_LinfL2;
  std::vector<double> slab_H1_sq;
  std::vector<double> slab_jump_sq;
};

NormReport compute_norms(const DgSolution& sol, const ManufacturedSolution* reference = nullptr);

/// E(v) = 1/2 a(v, v) + 1/(4 eps^2) int (v^2 - 1)^2.
double energy(const SpatialOperators& ops, const Vector& v, double epsilon);

struct EnergySlab {
  int slab = 0;
  double right_energy = 0.0;        // E(u^n_-)
  double integrated_energy = 0.0;   // int_slab E dt
  double weighted_dissipation = 0.0;  // int_slab (t - t^{n-1}) ||u_t||^2 dt
  double residual = 0.0;
  double tolerance_scale = 1.0;     // 1 + tau_n E(u^n_-)
};

/// tau_n E(u^n_-) - int E dt + int (t - t^{n-1}) ||u_t||^2 dt on slab n.
/// Requires k >= 1 and zero forcing.
EnergySlab energy_identity(const DgSolution& sol, int n, const ProblemSpec& problem);
std::vector<EnergySlab> energy_trace(const DgSolution& sol, const ProblemSpec& problem);

/// Slab balance obtained by testing with u_h itself.
struct StabilitySlab {
  int slab = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double relative_residual = 0.0;
};
std::vector<StabilitySlab> stability_identity(const DgSolution& sol, const ProblemSpec& problem);

/// lambda_min of a(v, v) + (1/eps^2)((3u^2 - 1) v, v) over the Dirichlet space.
struct SpectrumTrace {
  std::vector<double> times;
  std::vector<double> lambda_min;
  std::vector<double> residuals;
  double C_s = 0.0;  // max(0, -min lambda)
};
SpectrumTrace spectrum_along_solution(const DgSolution& u, const std::vector<double>& times, double epsilon);
SpectrumTrace spectrum_along_solution(const ScalarField& u, const SpatialOperators& ops,
                                      const std::vector<double>& times, double epsilon);

struct BestApproximation {
  double numerator = 0.0;    // ||u_h - u||_{L2H1} + ||u_h - u||_{LinfL2}
  double denominator = 0.0;  // same for u_p
  double ratio = 1.0;
  bool exact_case = false;   // both below 1e-9
};
BestApproximation best_approximation_ratio(const DgSolution& u_h, const DgSolution& u_p, const ManufacturedSolution& u);

}  // namespace dgac
