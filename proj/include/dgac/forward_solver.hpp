#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dgac/dg_solution.hpp"
#include "dgac/problem.hpp"

namespace dgac {

enum class Damping { none, backtracking };

struct NewtonConfig {
  double abs_tol = 1e-14;
  double rel_tol = 1e-12;
  int max_iter = 30;
  Damping damping = Damping::backtracking;
  LinearSolveConfig linear;

  void validate() const;
};

struct NewtonStep {
  int iteration = 0;
  double residual = 0.0;  // before the step
  double step_norm = 0.0;
  int halvings = 0;
};

struct SlabReport {
  int slab = 0;
  int iterations = 0;
  double initial_residual = 0.0;
  double final_residual = 0.0;
  std::vector<NewtonStep> history;
};

class NewtonError : public std::runtime_error {
 public:
  NewtonError(const std::string& what, SlabReport report) : std::runtime_error(what), report_(std::move(report)) {}
  const SlabReport& report() const { return report_; }

 private:
  SlabReport report_;
};

/// L2 projection P_h g onto the free dofs.
Vector l2_project(const SpatialOperators& ops, const std::function<double(const Point&)>& g);

/// Residual of the slab system at packed coefficients U (dof-major).
Vector slab_residual(const Discretization& disc, const ProblemSpec& problem, int n, const Vector& prev_trace,
                     const Vector& packed);

/// Solve slab n by Newton's method starting from the constant extension of prev_trace.
SlabSolution solve_slab(const Discretization& disc, const Vector& prev_trace, int n, const ProblemSpec& problem,
                        const NewtonConfig& cfg, SlabReport* report = nullptr);

DgSolution solve_forward(const ProblemSpec& problem, std::shared_ptr<const Discretization> disc,
                         const NewtonConfig& cfg, std::vector<SlabReport>* reports = nullptr);

}  // namespace dgac
