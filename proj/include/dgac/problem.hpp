#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "dgac/assembly.hpp"

namespace dgac {

using ScalarField = std::function<double(double t, const Point& x)>;

/// Exact solution with the derivatives needed by error studies and by the
/// integrated-by-parts loads; no finite-difference substitutes.
struct ManufacturedSolution {
  std::string id;
  int dimension = 1;
  ScalarField value;
  ScalarField time_derivative;
  std::function<std::array<double, 2>(double t, const Point& x)> gradient;
  ScalarField laplacian;
};

/// Right-hand side functional t -> (<f(t), phi_i>)_i on the free dofs.
class Forcing {
 public:
  virtual ~Forcing() = default;
  virtual Vector load(double t, const SpatialOperators& ops) const = 0;
  virtual bool is_zero() const { return false; }
};

class ZeroForcing final : public Forcing {
 public:
  Vector load(double, const SpatialOperators& ops) const override { return Vector(ops.size(), 0.0); }
  bool is_zero() const override { return true; }
};

class PointwiseForcing final : public Forcing {
 public:
  explicit PointwiseForcing(ScalarField f) : f_(std::move(f)) {}
  Vector load(double t, const SpatialOperators& ops) const override;

 private:
  ScalarField f_;
};

/// Allen-Cahn problem data: u_t - Delta u + (u^3 - u) / eps^2 = f on (0, T].
struct ProblemSpec {
  double epsilon = 1.0;
  double final_time = 1.0;
  std::function<double(const Point&)> initial_data;
  std::shared_ptr<const Forcing> forcing = std::make_shared<ZeroForcing>();
  std::optional<ManufacturedSolution> exact;

  void validate() const;
};

/// f = u_t - Delta u + (u^3 - u) / eps^2 for a manufactured u.
ScalarField manufactured_forcing(const ManufacturedSolution& u, double epsilon);

/// Problem whose exact solution is the manufactured u.
ProblemSpec make_manufactured_problem(const ManufacturedSolution& u, double epsilon, double final_time);
/// Problem with zero forcing and the given initial profile.
ProblemSpec make_unforced_problem(std::function<double(const Point&)> u0, double epsilon, double final_time);

// Built-in registry.
ManufacturedSolution expsine_1d();   // u = e^{-t} sin(pi x)
ManufacturedSolution expsine_2d();   // u = e^{-t} sin(pi x) sin(pi y)
/// tanh((x - 1/2) / (sqrt(2) eps)), the planar interface profile.
std::function<double(const Point&)> interface_profile(double epsilon);

bool is_manufactured_id(const std::string& id);
bool is_initial_profile_id(const std::string& id);
ManufacturedSolution manufactured_by_id(const std::string& id);
std::function<double(const Point&)> initial_profile_by_id(const std::string& id, double epsilon);

}  // namespace dgac
