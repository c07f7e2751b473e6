#pragma once

#include <memory>
#include <vector>

#include "dgac/assembly.hpp"
#include "dgac/time_basis.hpp"

namespace dgac {

/// Everything a slab solve needs: spatial operators, time partition, time
/// basis with its coupling matrices, and the linear solver settings.
struct Discretization {
  std::shared_ptr<const SpatialOperators> space;
  TimePartition partition;
  std::shared_ptr<const TimeBasis> basis;
  DgTimeOperators time_ops;

  int time_nodes() const { return basis->size(); }
  int free_dofs() const { return space->size(); }
};

std::shared_ptr<const Discretization> make_discretization(std::shared_ptr<const SpatialOperators> space,
                                                          TimePartition partition,
                                                          std::shared_ptr<const TimeBasis> basis);

enum class TimeDirection { forward, backward };

/// Coefficients of one slab, one free-dof vector per time node.
///
/// `incoming` is the trace handed over by the neighbouring slab: u^{n-1}_{h-}
/// for forward problems and phi^n_{h+} for backward ones. The jump is always
/// taken at the slab edge facing the incoming data.
struct SlabSolution {
  int index = 0;
  std::vector<Vector> coefficients;
  Vector incoming;
  Vector left_trace;   // value at t^{n-1} from inside the slab
  Vector right_trace;  // value at t^n from inside the slab
  Vector jump;         // forward: left_trace - incoming; backward: incoming - right_trace
};

SlabSolution make_slab_solution(const TimeBasis& basis, int index, std::vector<Vector> coefficients,
                                Vector incoming, TimeDirection direction);

class DgSolution {
 public:
  DgSolution(std::shared_ptr<const Discretization> disc, Vector initial,
             TimeDirection direction = TimeDirection::forward);

  const Discretization& discretization() const { return *disc_; }
  std::shared_ptr<const Discretization> discretization_ptr() const { return disc_; }
  TimeDirection direction() const { return direction_; }
  /// u^0 = P_h u_0 for forward problems, the terminal value for backward ones.
  const Vector& initial() const { return initial_; }

  int slab_count() const { return static_cast<int>(slabs_.size()); }
  /// Slabs are numbered 1..N.
  const SlabSolution& slab(int n) const { return slabs_.at(n - 1); }
  SlabSolution& slab(int n) { return slabs_.at(n - 1); }
  void set_slab(SlabSolution s);

  /// u_h(t^{n-1} + s tau_n) from inside slab n.
  Vector value(int n, double s) const;
  /// d/dt u_h at the same point.
  Vector time_derivative(int n, double s) const;
  /// Left-continuous point evaluation for forward problems, right-continuous
  /// for backward ones.
  Vector at_time(double t) const;

  /// Checks the slab chaining invariant; returns the largest mismatch.
  double chaining_defect() const;

 private:
  std::shared_ptr<const Discretization> disc_;
  Vector initial_;
  TimeDirection direction_;
  std::vector<SlabSolution> slabs_;
};

/// Per-slab block operators use dof-major ordering: entry (dof m, node i)
/// sits at m * nt + i.
Vector pack_slab(const std::vector<Vector>& per_node);
std::vector<Vector> unpack_slab(const Vector& packed, int nt);

/// Block matrix with nt x nt blocks, each given as values aligned with the
/// spatial pattern (mass().values()); blocks[i * nt + j] couples test node i
/// to trial node j.
SparseMatrix assemble_block_matrix(const SparseMatrix& pattern, int nt, const std::vector<std::vector<double>>& blocks);

/// Apply the block matrix without assembling it.
Vector apply_block(const SparseMatrix& pattern, int nt, const std::vector<std::vector<double>>& blocks,
                   const Vector& packed);

}  // namespace dgac
