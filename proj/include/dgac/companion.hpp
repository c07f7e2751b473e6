#pragma once

#include <vector>

#include "dgac/dg_solution.hpp"
#include "dgac/problem.hpp"

namespace dgac {

/// Backward dual phi_h with terminal data phi^N_+ = 0, built from a forward
/// solution. Slab n receives phi^n_+ as its incoming trace.
struct BackwardDualSolution {
  DgSolution phi;
  DgSolution source;  // the forward u_h it was built from
};

BackwardDualSolution solve_backward_dual(const DgSolution& u_h, const ProblemSpec& problem,
                                         const LinearSolveConfig& linear = {});

struct IdentityReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
};

/// |LHS - RHS| / (|LHS| + |RHS| + 1) with LHS = int ||u_h||^2 and
/// RHS = (2/eps^2) int (phi_h, u_h) + int <f, phi_h> + (u^0, phi^0_+).
IdentityReport duality_identity(const BackwardDualSolution& dual, const ProblemSpec& problem);

/// ||phi^0_+||^2 + ||grad phi||^2 + (1/eps^2) ||phi u||^2 + (1/(2 eps^2)) ||phi||^2
/// against (eps^2 / 2) ||u||^2, all in L2(0,T; .).
struct DualStabilityReport {
  double lhs = 0.0;
  double bound = 0.0;
  double slack = 0.0;  // bound - lhs
};
DualStabilityReport dual_stability(const BackwardDualSolution& dual, const ProblemSpec& problem);

/// Backward linearized problem with reaction (3 u_ref^2 - 1) / eps^2 and
/// right-hand side e_h; stores the discrete Laplacian M^{-1} A psi per node.
struct PsiSolution {
  DgSolution psi;
  std::vector<std::vector<Vector>> laplacian;  // [slab - 1][node]
  /// Largest |M d - A psi| over all nodes.
  double laplacian_defect = 0.0;
};

PsiSolution solve_backward_psi(const DgSolution& rhs, const ScalarField& u_ref, const ProblemSpec& problem,
                               const LinearSolveConfig& linear = {});
PsiSolution solve_backward_psi(const DgSolution& rhs, const DgSolution& u_ref, const ProblemSpec& problem,
                               const LinearSolveConfig& linear = {});

/// Per-slab check of
///   1/2 ||psi^{n-1}_+||^2 - 1/2 ||psi^n_+||^2 + 1/2 ||[psi^n]||^2 + int lambda_min(t) ||psi||^2 <= int (e, psi)
/// with lambda_min the smallest eigenvalue of the linearized operator at each
/// time quadrature point.
struct PsiChainSlab {
  int slab = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double min_lambda = 0.0;
};
std::vector<PsiChainSlab> psi_spectral_chain(const PsiSolution& psi, const DgSolution& rhs, const ScalarField& u_ref,
                                             const ProblemSpec& problem);

/// dG solution of the heat equation with load (u_t, w) + a(u, w) and initial
/// value P_h u(0).
DgSolution solve_parabolic_projection(const ManufacturedSolution& u, std::shared_ptr<const Discretization> disc,
                                      const LinearSolveConfig& linear = {});

/// Largest slab residual of e_p = u_p - u in the linear slab forms, tested
/// against every basis function; u enters without integration by parts.
double parabolic_orthogonality_residual(const DgSolution& u_p, const ManufacturedSolution& u);

/// Local projection on slab n: value P_h w(t^n) at the right end and k time
/// moments against P_{k-1}(U_h).
std::vector<Vector> local_projection(const ScalarField& w, int n, const Discretization& disc);
/// Slab-wise local projection assembled into a (discontinuous) DgSolution.
DgSolution local_projection_all(const ScalarField& w, std::shared_ptr<const Discretization> disc);

/// Largest violation of the local projection's defining conditions on slab n.
double local_projection_defect(const ScalarField& w, int n, const Discretization& disc,
                               const std::vector<Vector>& coefficients);

}  // namespace dgac
